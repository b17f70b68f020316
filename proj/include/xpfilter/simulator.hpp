#pragma once

#include "xpfilter/datapath.hpp"
#include "xpfilter/errors.hpp"

#include <array>
#include <compare>
#include <cstdint>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace xpfilter {

struct MatchEvent {
    std::size_t doc_id = 0;
    ProfileId profile_id = 0;
    std::size_t byte_offset = 0;  // cycle on which the final open tag's '>' arrives
    auto operator<=>(const MatchEvent&) const = default;
};

// Indexed only evaluates the matchers whose tag completes this cycle; every
// other comparator provably reads false. Exhaustive evaluates every block on
// every cycle and exists to cross-check the indexed path.
enum class SimMode { Indexed, Exhaustive };

// Called once per cycle after the stack commit.
using StackObserver = std::function<void(std::size_t cycle, std::span<const TagCode> stack)>;

class Engine {
public:
    explicit Engine(const Datapath& dp, SimMode mode = SimMode::Indexed);

    // One byte per cycle. Each profile is reported at most once, on its first
    // firing; events from the same cycle are ordered by profile id.
    // Throws MalformedDocument or StackOverflow.
    std::vector<MatchEvent> run(std::string_view doc, std::size_t doc_id,
                                const StackObserver& observer = nullptr) const;

private:
    struct Matcher {
        std::array<char, 4> pattern{};
        bool decoded = false;
        bool anchored = false;
        int predecessor = -1;
        std::optional<TagCode> tos;
        std::vector<std::uint32_t> results;  // dense result indices
    };
    struct Negation {
        std::array<char, 5> pattern{};
        bool decoded = false;
        std::uint32_t segment = 0;
    };

    const Datapath* dp_;
    SimMode mode_;
    std::uint32_t max_depth_;
    bool has_decoder_;
    std::vector<Matcher> matchers_;
    std::vector<Negation> negations_;
    std::vector<ProfileId> result_profiles_;
    std::vector<std::vector<std::uint32_t>> open_index_;   // by code slot
    std::vector<std::vector<std::uint32_t>> close_index_;
};

std::vector<MatchEvent> run(const Datapath& dp, std::string_view doc, std::size_t doc_id);

struct ThroughputStats {
    std::size_t bytes = 0;
    double wall_seconds = 0.0;
    double mb_per_s = 0.0;  // 1 MB = 10^6 bytes
};

struct DocOutcome {
    std::vector<MatchEvent> events;
    std::optional<Error> error;
};

struct StreamResult {
    std::vector<DocOutcome> per_doc;
    ThroughputStats stats;
};

// Documents get ids 0..n-1 in order. The engine state is rebuilt for every
// document; a failing document records its error and the stream continues.
StreamResult run_stream(const Datapath& dp, const std::vector<std::string>& docs,
                        SimMode mode = SimMode::Indexed);

// CSV with header `doc_id,profile_id,byte_offset`.
void write_match_csv(std::ostream& out, const std::vector<MatchEvent>& events);
std::vector<MatchEvent> read_match_csv(std::istream& in);
std::string throughput_text(const ThroughputStats& stats);

}  // namespace xpfilter
