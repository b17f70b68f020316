#pragma once

#include "xpfilter/prefix_forest.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace xpfilter {

using BlockId = std::uint32_t;

inline constexpr std::uint64_t kDecoderArea = 256;      // one line per byte value
inline constexpr std::uint64_t kTagFilterArea = 64;
inline constexpr std::uint64_t kTosMatcherArea = 16;
inline constexpr std::uint64_t kStackEntryArea = 16;    // bits per stack slot
inline constexpr std::uint32_t kDefaultStackDepth = 64;

enum class EncoderGroup { NoStack, Stack };
const char* to_string(EncoderGroup group);

// The four area scenarios: Unop, Com-P, Unop-CharDec, Com-P-CharDec.
struct DatapathConfig {
    bool prefix_shared = false;
    bool char_decoded = false;
    std::uint32_t max_depth = kDefaultStackDepth;
    bool operator==(const DatapathConfig&) const = default;
};

std::string config_name(const DatapathConfig& config);
std::vector<DatapathConfig> all_configs(std::uint32_t max_depth = kDefaultStackDepth);
DatapathConfig config_from_name(const std::string& name, std::uint32_t max_depth = kDefaultStackDepth);

struct CharDecoder {};

// Comparator over the last `bytes.size()` input bytes. Open-tag matchers are
// NFA states: they fire when the window matches and the chain enables them,
// and then hold an armed flag until `reset` fires.
struct TagMatcher {
    std::string bytes;
    bool decoded = false;
    bool anchored = false;                 // first step, root element only
    std::optional<BlockId> predecessor;    // enabling state
    std::optional<BlockId> tos;            // parent-level check
    std::optional<BlockId> reset;          // negation block clearing the armed flag
};

struct NegationBlock {
    TagCode tag;  // fires on `</tag>`
    std::string bytes;
    bool decoded = false;
    BlockId segment = 0;  // state whose armed flag it clears
};

struct TagFilter {};

struct StackBlock {
    std::uint32_t max_depth = kDefaultStackDepth;
};

struct TosMatcher {
    TagCode expected;
};

struct ResultCell {
    ProfileId profile_id = 0;
    EncoderGroup group = EncoderGroup::NoStack;
};

struct PriorityEncoder {
    EncoderGroup group = EncoderGroup::NoStack;
};

using BlockKind =
    std::variant<CharDecoder, TagMatcher, NegationBlock, TagFilter, StackBlock, TosMatcher, ResultCell, PriorityEncoder>;

const char* kind_name(const BlockKind& kind);

struct Block {
    BlockId id = 0;
    BlockKind kind;
    std::vector<BlockId> inputs;
    std::uint64_t area_bits = 0;
};

class Datapath {
public:
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const Block& block(BlockId id) const { return blocks_.at(id); }
    const DatapathConfig& config() const noexcept { return config_; }

    std::optional<BlockId> decoder() const noexcept { return decoder_; }
    std::optional<BlockId> stack() const noexcept { return stack_; }
    std::optional<BlockId> tag_filter() const noexcept { return tag_filter_; }
    BlockId encoder(EncoderGroup group) const { return group == EncoderGroup::Stack ? stack_encoder_ : nostack_encoder_; }

    // Group of the result cell driving `profile`; nullopt when absent.
    std::optional<EncoderGroup> group_of(ProfileId profile) const;
    std::vector<ProfileId> profiles() const;

    // Throws InvalidArgument when a structural invariant is broken.
    void validate() const;

private:
    friend class DatapathBuilder;
    std::vector<Block> blocks_;
    DatapathConfig config_;
    std::optional<BlockId> decoder_;
    std::optional<BlockId> tag_filter_;
    std::optional<BlockId> stack_;
    BlockId nostack_encoder_ = 0;
    BlockId stack_encoder_ = 0;
    std::map<ProfileId, BlockId> result_of_;
};

// Without prefix sharing every profile gets a private chain; with it, each
// forest node's steps are instantiated once and feed every suffix chain.
// Throws EmptyForest.
Datapath lower_to_datapath(const PrefixForest& forest, const DatapathConfig& config);

struct AreaReport {
    std::uint64_t total_bits = 0;
    std::size_t block_count = 0;
    std::map<std::string, std::uint64_t> per_kind_bits;
    std::map<std::string, std::size_t> per_kind_count;
    DatapathConfig config;
};

AreaReport area_report(const Datapath& dp);
std::string area_report_json(const AreaReport& report);

// Structural VHDL-style netlist: one entity per block kind in use, one
// instance per block, one signal per wiring edge.
std::string emit_netlist(const Datapath& dp);

}  // namespace xpfilter
