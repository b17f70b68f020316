#include "xpfilter/datapath.hpp"

#include "xpfilter/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace xpfilter {

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

std::uint64_t comparator_bits(std::size_t bytes, bool decoded) {
    return decoded ? bytes : 8 * static_cast<std::uint64_t>(bytes);
}

}  // namespace

const char* to_string(EncoderGroup group) { return group == EncoderGroup::Stack ? "stack" : "nostack"; }

std::string config_name(const DatapathConfig& config) {
    std::string name = config.prefix_shared ? "Com-P" : "Unop";
    if (config.char_decoded) name += "-CharDec";
    return name;
}

std::vector<DatapathConfig> all_configs(std::uint32_t max_depth) {
    return {{false, false, max_depth}, {true, false, max_depth}, {false, true, max_depth}, {true, true, max_depth}};
}

DatapathConfig config_from_name(const std::string& name, std::uint32_t max_depth) {
    for (const auto& config : all_configs(max_depth)) {
        if (config_name(config) == name) return config;
    }
    throw InvalidArgument("unknown configuration '" + name + "'");
}

const char* kind_name(const BlockKind& kind) {
    return std::visit(overloaded{
                          [](const CharDecoder&) { return "char_decoder"; },
                          [](const TagMatcher&) { return "tag_matcher"; },
                          [](const NegationBlock&) { return "negation"; },
                          [](const TagFilter&) { return "tag_filter"; },
                          [](const StackBlock&) { return "stack"; },
                          [](const TosMatcher&) { return "tos_matcher"; },
                          [](const ResultCell&) { return "result_cell"; },
                          [](const PriorityEncoder&) { return "priority_encoder"; },
                      },
                      kind);
}

std::optional<EncoderGroup> Datapath::group_of(ProfileId profile) const {
    const auto it = result_of_.find(profile);
    if (it == result_of_.end()) return std::nullopt;
    return std::get<ResultCell>(blocks_[it->second].kind).group;
}

std::vector<ProfileId> Datapath::profiles() const {
    std::vector<ProfileId> ids;
    ids.reserve(result_of_.size());
    for (const auto& [id, block] : result_of_) ids.push_back(id);
    return ids;
}

void Datapath::validate() const {
    const auto fail = [](const std::string& what) { return InvalidArgument("invalid datapath: " + what); };
    std::size_t decoders = 0, filters = 0, stacks = 0, encoders = 0, tos = 0, decoded = 0;
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const Block& b = blocks_[i];
        if (b.id != i) throw fail("block ids are not dense");
        for (const BlockId in : b.inputs) {
            if (in >= blocks_.size()) throw fail("dangling input on block " + std::to_string(i));
        }
        std::visit(overloaded{
                       [&](const CharDecoder&) { ++decoders; },
                       [&](const TagMatcher& m) {
                           decoded += m.decoded;
                           if (m.predecessor && !std::holds_alternative<TagMatcher>(blocks_.at(*m.predecessor).kind))
                               throw fail("matcher predecessor is not a matcher");
                           if (m.tos && !std::holds_alternative<TosMatcher>(blocks_.at(*m.tos).kind))
                               throw fail("matcher tos input is not a TOS matcher");
                       },
                       [&](const NegationBlock& n) {
                           decoded += n.decoded;
                           const auto* seg = std::get_if<TagMatcher>(&blocks_.at(n.segment).kind);
                           if (!seg || seg->reset != b.id) throw fail("negation block not wired to its segment");
                       },
                       [&](const TagFilter&) { ++filters; },
                       [&](const StackBlock&) { ++stacks; },
                       [&](const TosMatcher&) { ++tos; },
                       [&](const ResultCell&) {
                           if (b.inputs.size() != 1 || !std::holds_alternative<TagMatcher>(blocks_[b.inputs[0]].kind))
                               throw fail("result cell must be driven by one matcher");
                       },
                       [&](const PriorityEncoder&) { ++encoders; },
                   },
                   b.kind);
    }
    if (encoders != 2) throw fail("expected exactly two priority encoders");
    if (decoders > 1 || (decoded > 0) != (decoders == 1)) throw fail("decoder count does not match matcher mode");
    if (filters > 1 || stacks > 1 || (tos > 0) != (stacks == 1) || filters != stacks)
        throw fail("stack blocks do not match TOS usage");

    // Acyclic over inputs.
    std::vector<int> color(blocks_.size(), 0);
    std::function<void(BlockId)> visit = [&](BlockId id) {
        if (color[id] == 2) return;
        if (color[id] == 1) throw fail("wiring cycle through block " + std::to_string(id));
        color[id] = 1;
        for (const BlockId in : blocks_[id].inputs) visit(in);
        color[id] = 2;
    };
    for (BlockId id = 0; id < blocks_.size(); ++id) visit(id);
}

class DatapathBuilder {
public:
    DatapathBuilder(const DatapathConfig& config, bool needs_stack) {
        dp_.config_ = config;
        if (config.max_depth == 0) throw InvalidArgument("stack depth must be positive");
        if (config.char_decoded) dp_.decoder_ = add(CharDecoder{}, {}, kDecoderArea);
        if (needs_stack) {
            dp_.tag_filter_ = add(TagFilter{}, {}, kTagFilterArea);
            dp_.stack_ = add(StackBlock{config.max_depth}, {*dp_.tag_filter_},
                             static_cast<std::uint64_t>(config.max_depth) * kStackEntryArea);
        }
    }

    // Lowers `atoms` starting from `state`; returns the last matcher state.
    BlockId lower_atoms(std::span<const RegexAtom> atoms, std::optional<BlockId> state) {
        bool gap = false;
        std::optional<BlockId> tos;
        for (const auto& atom : atoms) {
            std::visit(overloaded{
                           [&](const GapPattern&) { gap = true; },
                           [&](const NegationGuard& g) { negation_for(require(state), g.tag); },
                           [&](const StackCheck& s) { tos = tos_for(require(state), s.expected); },
                           [&](const OpenTagMatch& o) {
                               state = open_matcher(o.tag, state, tos, !state && !gap);
                               gap = false;
                               tos.reset();
                           },
                       },
                       atom);
        }
        return require(state);
    }

    void lower_node(const PrefixNode& node, std::optional<BlockId> state, bool stack_on_path) {
        const bool uses_stack = stack_on_path || atoms_use_stack(node.shared_atoms);
        const BlockId end = lower_atoms(node.shared_atoms, state);
        for (const ProfileId id : node.terminal_profiles) result_cell(id, end, uses_stack);
        for (const auto& child : node.children) lower_node(child, end, uses_stack);
    }

    void lower_chain(const StackRegexIr& ir) {
        const BlockId end = lower_atoms(ir.atoms, std::nullopt);
        result_cell(ir.profile_id, end, atoms_use_stack(ir.atoms));
    }

    Datapath finish() {
        dp_.nostack_encoder_ = add(PriorityEncoder{EncoderGroup::NoStack}, nostack_cells_, nostack_cells_.size());
        dp_.stack_encoder_ = add(PriorityEncoder{EncoderGroup::Stack}, stack_cells_, stack_cells_.size());
        return std::move(dp_);
    }

private:
    BlockId add(BlockKind kind, std::vector<BlockId> inputs, std::uint64_t area) {
        const auto id = static_cast<BlockId>(dp_.blocks_.size());
        dp_.blocks_.push_back({id, std::move(kind), std::move(inputs), area});
        return id;
    }

    static BlockId require(std::optional<BlockId> state) {
        if (!state) throw InvalidArgument("IR guard or stack check precedes the first tag match");
        return *state;
    }

    std::vector<BlockId> decoder_inputs() const {
        if (dp_.decoder_) return {*dp_.decoder_};
        return {};
    }

    BlockId open_matcher(TagCode tag, std::optional<BlockId> pred, std::optional<BlockId> tos, bool anchored) {
        TagMatcher m;
        m.bytes = tag.open_tag();
        m.decoded = dp_.config_.char_decoded;
        m.anchored = anchored;
        m.predecessor = pred;
        m.tos = tos;
        auto inputs = decoder_inputs();
        if (pred) inputs.push_back(*pred);
        if (tos) inputs.push_back(*tos);
        const auto area = comparator_bits(m.bytes.size(), m.decoded);
        return add(std::move(m), std::move(inputs), area);
    }

    void negation_for(BlockId state, TagCode tag) {
        if (negation_of_.count(state)) return;
        NegationBlock n;
        n.tag = tag;
        n.bytes = tag.close_tag();
        n.decoded = dp_.config_.char_decoded;
        n.segment = state;
        const auto area = comparator_bits(n.bytes.size(), n.decoded);
        const BlockId id = add(std::move(n), decoder_inputs(), area);
        negation_of_[state] = id;
        auto& seg = dp_.blocks_[state];
        std::get<TagMatcher>(seg.kind).reset = id;
        seg.inputs.push_back(id);
    }

    BlockId tos_for(BlockId state, TagCode expected) {
        if (!dp_.stack_) throw InvalidArgument("stack check without a stack block");
        const auto key = std::make_pair(state, expected);
        if (auto it = tos_of_.find(key); it != tos_of_.end()) return it->second;
        const BlockId id = add(TosMatcher{expected}, {*dp_.stack_}, kTosMatcherArea);
        tos_of_[key] = id;
        return id;
    }

    void result_cell(ProfileId profile, BlockId state, bool uses_stack) {
        const auto group = uses_stack ? EncoderGroup::Stack : EncoderGroup::NoStack;
        const BlockId id = add(ResultCell{profile, group}, {state}, 0);
        (uses_stack ? stack_cells_ : nostack_cells_).push_back(id);
        dp_.result_of_[profile] = id;
    }

    Datapath dp_;
    std::map<BlockId, BlockId> negation_of_;
    std::map<std::pair<BlockId, TagCode>, BlockId> tos_of_;
    std::vector<BlockId> nostack_cells_;
    std::vector<BlockId> stack_cells_;
};

Datapath lower_to_datapath(const PrefixForest& forest, const DatapathConfig& config) {
    if (forest.empty()) throw EmptyForest();
    const auto irs = expand_forest(forest);
    const bool needs_stack = std::any_of(irs.begin(), irs.end(), [](const auto& ir) { return ir.uses_stack; });

    DatapathBuilder builder(config, needs_stack);
    if (config.prefix_shared) {
        for (const auto& tree : forest.trees) builder.lower_node(tree, std::nullopt, false);
    } else {
        for (const auto& ir : irs) builder.lower_chain(ir);
    }
    return builder.finish();
}

AreaReport area_report(const Datapath& dp) {
    AreaReport report;
    report.config = dp.config();
    report.block_count = dp.blocks().size();
    for (const auto& block : dp.blocks()) {
        const std::string kind = kind_name(block.kind);
        report.total_bits += block.area_bits;
        report.per_kind_bits[kind] += block.area_bits;
        report.per_kind_count[kind] += 1;
    }
    return report;
}

std::string area_report_json(const AreaReport& report) {
    nlohmann::ordered_json j;
    j["config"] = {{"name", config_name(report.config)},
                   {"prefix_shared", report.config.prefix_shared},
                   {"char_decoded", report.config.char_decoded},
                   {"max_depth", report.config.max_depth}};
    j["total_bits"] = report.total_bits;
    j["block_count"] = report.block_count;
    nlohmann::ordered_json per_kind = nlohmann::ordered_json::object();
    for (const auto& [kind, bits] : report.per_kind_bits) {
        per_kind[kind] = {{"bits", bits}, {"count", report.per_kind_count.at(kind)}};
    }
    j["per_kind"] = per_kind;
    j["constants"] = {{"decoder_area", kDecoderArea},
                      {"tag_filter_area", kTagFilterArea},
                      {"tos_area", kTosMatcherArea},
                      {"stack_entry_area", kStackEntryArea}};
    return j.dump(2) + "\n";
}

namespace {

std::string vhdl_string(const std::string& bytes) {
    std::string out = "\"";
    for (const char c : bytes) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string generics_of(const BlockKind& kind) {
    return std::visit(overloaded{
                          [](const CharDecoder&) { return std::string{}; },
                          [](const TagMatcher& m) {
                              return "PATTERN => " + vhdl_string(m.bytes) + ", DECODED => " +
                                     (m.decoded ? "true" : "false") + ", ANCHORED => " +
                                     (m.anchored ? "true" : "false");
                          },
                          [](const NegationBlock& n) {
                              return "PATTERN => " + vhdl_string(n.bytes) + ", DECODED => " +
                                     (n.decoded ? "true" : "false");
                          },
                          [](const TagFilter&) { return std::string{}; },
                          [](const StackBlock& s) { return "DEPTH => " + std::to_string(s.max_depth); },
                          [](const TosMatcher& t) { return "EXPECTED => " + vhdl_string(t.expected.str()); },
                          [](const ResultCell& r) { return "PROFILE => " + std::to_string(r.profile_id); },
                          [](const PriorityEncoder& p) {
                              return "GROUP => " + vhdl_string(to_string(p.group));
                          },
                      },
                      kind);
}

const char* entity_decl(const std::string& kind) {
    if (kind == "char_decoder")
        return "entity char_decoder is\n"
               "  port (clk : in std_logic; data : in std_logic_vector(7 downto 0);\n"
               "        q : out std_logic_vector(255 downto 0));\n"
               "end entity char_decoder;\n";
    if (kind == "tag_matcher")
        return "entity tag_matcher is\n"
               "  generic (PATTERN : string; DECODED : boolean; ANCHORED : boolean);\n"
               "  port (clk : in std_logic; rst : in std_logic; data : in std_logic_vector(7 downto 0);\n"
               "        inputs : in std_logic_vector; q : out std_logic);\n"
               "end entity tag_matcher;\n";
    if (kind == "negation")
        return "entity negation is\n"
               "  generic (PATTERN : string; DECODED : boolean);\n"
               "  port (clk : in std_logic; rst : in std_logic; data : in std_logic_vector(7 downto 0);\n"
               "        inputs : in std_logic_vector; q : out std_logic);\n"
               "end entity negation;\n";
    if (kind == "tag_filter")
        return "entity tag_filter is\n"
               "  port (clk : in std_logic; rst : in std_logic; data : in std_logic_vector(7 downto 0);\n"
               "        q : out std_logic);\n"
               "end entity tag_filter;\n";
    if (kind == "stack")
        return "entity stack is\n"
               "  generic (DEPTH : positive);\n"
               "  port (clk : in std_logic; rst : in std_logic; inputs : in std_logic_vector;\n"
               "        q : out std_logic);\n"
               "end entity stack;\n";
    if (kind == "tos_matcher")
        return "entity tos_matcher is\n"
               "  generic (EXPECTED : string);\n"
               "  port (clk : in std_logic; inputs : in std_logic_vector; q : out std_logic);\n"
               "end entity tos_matcher;\n";
    if (kind == "result_cell")
        return "entity result_cell is\n"
               "  generic (PROFILE : natural);\n"
               "  port (clk : in std_logic; rst : in std_logic; inputs : in std_logic_vector;\n"
               "        q : out std_logic);\n"
               "end entity result_cell;\n";
    return "entity priority_encoder is\n"
           "  generic (GROUP : string);\n"
           "  port (clk : in std_logic; inputs : in std_logic_vector; q : out std_logic);\n"
           "end entity priority_encoder;\n";
}

}  // namespace

std::string emit_netlist(const Datapath& dp) {
    std::ostringstream out;
    const auto& blocks = dp.blocks();
    out << "-- structural netlist: " << config_name(dp.config()) << ", stack depth " << dp.config().max_depth
        << ", " << blocks.size() << " blocks\n";
    out << "library ieee;\nuse ieee.std_logic_1164.all;\n\n";

    std::set<std::string> kinds;
    for (const auto& b : blocks) kinds.insert(kind_name(b.kind));
    for (const auto& kind : kinds) out << entity_decl(kind) << '\n';

    const auto encoder_width = [&](EncoderGroup g) { return blocks[dp.encoder(g)].inputs.size(); };
    out << "entity xpath_filter is\n"
        << "  port (clk : in std_logic; rst : in std_logic; data_in : in std_logic_vector(7 downto 0);\n"
        << "        match_nostack : out std_logic;  -- " << encoder_width(EncoderGroup::NoStack) << " profiles\n"
        << "        match_stack : out std_logic);   -- " << encoder_width(EncoderGroup::Stack) << " profiles\n"
        << "end entity xpath_filter;\n\n";

    out << "architecture structural of xpath_filter is\n";
    const auto signal_type = [&](BlockId id) {
        return std::holds_alternative<CharDecoder>(blocks[id].kind) ? "std_logic_vector(255 downto 0)" : "std_logic";
    };
    for (const auto& b : blocks) out << "  signal n" << b.id << " : " << signal_type(b.id) << ";\n";
    for (const auto& b : blocks) {
        for (const BlockId in : b.inputs) out << "  signal e" << in << "_" << b.id << " : " << signal_type(in) << ";\n";
    }
    out << "begin\n";
    for (const auto& b : blocks) {
        for (const BlockId in : b.inputs) out << "  e" << in << "_" << b.id << " <= n" << in << ";\n";
    }
    for (const auto& b : blocks) {
        const std::string kind = kind_name(b.kind);
        out << "  -- area " << b.area_bits << " bits\n";
        out << "  b" << b.id << " : entity work." << kind;
        const auto generics = generics_of(b.kind);
        if (!generics.empty()) out << "\n    generic map (" << generics << ")";
        out << "\n    port map (clk => clk";
        if (kind != "char_decoder" && kind != "tos_matcher" && kind != "priority_encoder") out << ", rst => rst";
        if (kind == "char_decoder" || kind == "tag_matcher" || kind == "negation" || kind == "tag_filter")
            out << ", data => data_in";
        if (!b.inputs.empty()) {
            out << ", inputs => (";
            for (std::size_t i = 0; i < b.inputs.size(); ++i) {
                if (i) out << ", ";
                out << i << " => e" << b.inputs[i] << "_" << b.id;
            }
            out << ")";
        }
        out << ", q => n" << b.id << ");\n";
    }
    out << "  match_nostack <= n" << dp.encoder(EncoderGroup::NoStack) << ";\n";
    out << "  match_stack <= n" << dp.encoder(EncoderGroup::Stack) << ";\n";
    out << "end architecture structural;\n";
    return out.str();
}

}  // namespace xpfilter
