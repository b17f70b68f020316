#include "support.hpp"
#include "xpfilter/errors.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace xpfilter;
using test::compile;

namespace {

template <class K>
std::vector<const Block*> of_kind(const Datapath& dp) {
    std::vector<const Block*> out;
    for (const auto& b : dp.blocks())
        if (std::holds_alternative<K>(b.kind)) out.push_back(&b);
    return out;
}

const DatapathConfig kUnop{false, false};
const DatapathConfig kComP{true, false};
const DatapathConfig kUnopDec{false, true};
const DatapathConfig kComPDec{true, true};

std::string read_golden(const std::string& name) {
    std::ifstream in(std::string(XPFILTER_GOLDEN_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_SUITE("datapath") {

TEST_CASE("descendant profile, undecoded") {
    const auto dp = compile({"a0//b0"}, kUnop);
    dp.validate();
    const auto matchers = of_kind<TagMatcher>(dp);
    REQUIRE(matchers.size() == 2);
    for (const auto* m : matchers) CHECK(m->area_bits == 32);
    CHECK(std::get<TagMatcher>(matchers[0]->kind).bytes == "<a0>");
    CHECK(std::get<TagMatcher>(matchers[1]->kind).bytes == "<b0>");

    const auto negs = of_kind<NegationBlock>(dp);
    REQUIRE(negs.size() == 1);
    CHECK(negs[0]->area_bits == 40);
    CHECK(std::get<NegationBlock>(negs[0]->kind).bytes == "</a0>");

    CHECK(of_kind<ResultCell>(dp).size() == 1);
    CHECK(of_kind<PriorityEncoder>(dp).size() == 2);
    CHECK(of_kind<TosMatcher>(dp).empty());
    CHECK_FALSE(dp.stack().has_value());
    CHECK_FALSE(dp.tag_filter().has_value());
    CHECK_FALSE(dp.decoder().has_value());
    CHECK(dp.group_of(0) == EncoderGroup::NoStack);
}

TEST_CASE("child profile adds stack machinery") {
    const auto dp = compile({"a0/b0"}, kUnop);
    dp.validate();
    CHECK(dp.stack().has_value());
    CHECK(dp.tag_filter().has_value());
    const auto tos = of_kind<TosMatcher>(dp);
    REQUIRE(tos.size() == 1);
    CHECK(tos[0]->area_bits == kTosMatcherArea);
    CHECK(std::get<TosMatcher>(tos[0]->kind).expected == TagCode::parse("a0"));
    CHECK(dp.block(*dp.stack()).area_bits == kDefaultStackDepth * kStackEntryArea);
    CHECK(dp.block(*dp.tag_filter()).area_bits == kTagFilterArea);
    CHECK(dp.group_of(0) == EncoderGroup::Stack);
}

TEST_CASE("decoded configuration") {
    const auto dp = compile({"a0//b0"}, kUnopDec);
    dp.validate();
    REQUIRE(dp.decoder().has_value());
    CHECK(dp.block(*dp.decoder()).area_bits == kDecoderArea);
    for (const auto* m : of_kind<TagMatcher>(dp)) {
        CHECK(m->area_bits == 4);
        CHECK(std::get<TagMatcher>(m->kind).decoded);
        CHECK(m->inputs.front() == *dp.decoder());
    }
    for (const auto* n : of_kind<NegationBlock>(dp)) CHECK(n->area_bits == 5);
}

TEST_CASE("area report is additive") {
    const auto dp = compile({"a0/b0//c0", "a0//d0", "e0/f0"}, kComPDec);
    const auto report = area_report(dp);
    std::uint64_t sum = 0;
    for (const auto& b : dp.blocks()) sum += b.area_bits;
    CHECK(report.total_bits == sum);
    CHECK(report.block_count == dp.blocks().size());
    std::uint64_t per_kind = 0;
    std::size_t count = 0;
    for (const auto& [kind, bits] : report.per_kind_bits) per_kind += bits;
    for (const auto& [kind, n] : report.per_kind_count) count += n;
    CHECK(per_kind == sum);
    CHECK(count == dp.blocks().size());
}

TEST_CASE("undecoded matchers cost eight times decoded ones") {
    const std::vector<std::string> raw{"a0//b0/c0", "d0/e0", "//f0//g0"};
    const auto plain_dp = compile(raw, kUnop);
    const auto dec_dp = compile(raw, kUnopDec);
    const auto plain = of_kind<TagMatcher>(plain_dp);
    const auto dec = of_kind<TagMatcher>(dec_dp);
    REQUIRE(plain.size() == dec.size());
    for (std::size_t i = 0; i < plain.size(); ++i) CHECK(plain[i]->area_bits == 8 * dec[i]->area_bits);
}

TEST_CASE("unshared area is exactly linear in copies of a profile set") {
    std::vector<std::string> raw;
    std::vector<std::uint64_t> totals;
    const std::vector<std::string> base{"a0/b0//c0", "d0//e0", "f0/g0"};
    for (int k = 1; k <= 5; ++k) {
        raw.insert(raw.end(), base.begin(), base.end());
        totals.push_back(area_report(compile(raw, kUnop)).total_bits);
    }
    for (std::size_t i = 2; i < totals.size(); ++i)
        CHECK(totals[i] - totals[i - 1] == totals[1] - totals[0]);
}

TEST_CASE("sharing never costs more") {
    const std::vector<std::string> raw{"a0//b0//c0//d0", "a0//b0//c0//e0", "a0/b0", "a0/b0/c0", "b0"};
    const auto unop = area_report(compile(raw, kUnop)).total_bits;
    const auto comp = area_report(compile(raw, kComP)).total_bits;
    const auto unop_dec = area_report(compile(raw, kUnopDec)).total_bits;
    const auto comp_dec = area_report(compile(raw, kComPDec)).total_bits;
    CHECK(comp < unop);
    CHECK(comp_dec <= unop_dec);
    CHECK(unop_dec <= unop);
}

TEST_CASE("shared prefix is instantiated once") {
    const auto dp = compile({"a0//b0//c0//d0", "a0//b0//c0//e0"}, kComP);
    CHECK(of_kind<TagMatcher>(dp).size() == 5);
    CHECK(of_kind<NegationBlock>(dp).size() == 3);
    CHECK(of_kind<ResultCell>(dp).size() == 2);
    const auto unop = compile({"a0//b0//c0//d0", "a0//b0//c0//e0"}, kUnop);
    CHECK(of_kind<TagMatcher>(unop).size() == 8);
    CHECK(of_kind<NegationBlock>(unop).size() == 6);
}

TEST_CASE("sixteen-profile layout") {
    std::vector<std::string> raw;
    for (int i = 0; i < 16; ++i) {
        const std::string t = TagCode::from_sequence_index(static_cast<std::size_t>(i)).str();
        raw.push_back(i % 2 ? t + "/b9" : t + "//b9");
    }
    const auto dp = compile(raw, kComPDec);
    dp.validate();
    CHECK(of_kind<PriorityEncoder>(dp).size() == 2);
    CHECK(of_kind<StackBlock>(dp).size() == 1);
    CHECK(of_kind<CharDecoder>(dp).size() == 1);
    CHECK(of_kind<ResultCell>(dp).size() == 16);
    const auto& stack_enc = dp.block(dp.encoder(EncoderGroup::Stack));
    const auto& plain_enc = dp.block(dp.encoder(EncoderGroup::NoStack));
    CHECK(stack_enc.inputs.size() == 8);
    CHECK(plain_enc.inputs.size() == 8);
    CHECK(stack_enc.area_bits == 8);
    const auto netlist = emit_netlist(dp);
    std::size_t encoders = 0;
    for (std::size_t pos = 0; (pos = netlist.find("entity work.priority_encoder", pos)) != std::string::npos; ++pos)
        ++encoders;
    CHECK(encoders == 2);
}

TEST_CASE("netlist golden") {
    CHECK(emit_netlist(compile({"a0//b0", "a0/b0"}, kUnop)) == read_golden("netlist_a0_b0.vhd"));
}

TEST_CASE("netlist and report are deterministic") {
    const std::vector<std::string> raw{"a0/b0//c0", "a0//d0", "e0/f0", "//g0"};
    for (const auto& cfg : all_configs()) {
        const auto a = compile(raw, cfg);
        const auto b = compile(raw, cfg);
        CHECK(emit_netlist(a) == emit_netlist(b));
        CHECK(area_report_json(area_report(a)) == area_report_json(area_report(b)));
    }
}

TEST_CASE("config names") {
    CHECK(config_name(kUnop) == "Unop");
    CHECK(config_name(kComP) == "Com-P");
    CHECK(config_name(kUnopDec) == "Unop-CharDec");
    CHECK(config_name(kComPDec) == "Com-P-CharDec");
    for (const auto& cfg : all_configs()) CHECK(config_from_name(config_name(cfg)) == cfg);
    CHECK_THROWS_AS(config_from_name("fast"), InvalidArgument);
}

TEST_CASE("empty forest") {
    CHECK_THROWS_AS(lower_to_datapath(PrefixForest{}, kUnop), EmptyForest);
}

}  // TEST_SUITE
