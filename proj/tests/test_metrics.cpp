#include "xpfilter/metrics.hpp"

#include <doctest.h>

#include <sstream>

using namespace xpfilter;
using namespace xpfilter::metrics;

namespace {

GridSpec small_spec() {
    GridSpec spec;
    spec.profile_counts = {16, 64};
    spec.lengths = {2};
    spec.doc_count = 2;
    spec.doc_size = 2048;
    return spec;
}

const ExperimentRow& row(const ExperimentTable& t, std::size_t count, std::size_t length, const std::string& cfg) {
    for (const auto& r : t.rows)
        if (r.profile_count == count && r.length == length && r.config == cfg) return r;
    FAIL("missing row");
    return t.rows.front();
}

bool passed(const std::vector<TrendResult>& results, const std::string& name) {
    for (const auto& r : results)
        if (r.name == name) return r.passed;
    return false;
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("grid cardinality and determinism") {
    const auto t = run_grid(small_spec());
    CHECK(t.rows.size() == 8);
    const auto again = run_grid(small_spec());
    REQUIRE(again.rows.size() == 8);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(t.rows[i].config == again.rows[i].config);
        CHECK(t.rows[i].total_bits == again.rows[i].total_bits);
        CHECK(t.rows[i].block_count == again.rows[i].block_count);
        CHECK(t.rows[i].match_count == again.rows[i].match_count);
    }
}

TEST_CASE("area grows with profile count") {
    auto spec = small_spec();
    spec.profile_counts = {16, 1024};
    spec.lengths = {6};
    spec.configs = {DatapathConfig{}};
    const auto t = run_grid(spec);
    CHECK(row(t, 1024, 6, "Unop").total_bits > row(t, 16, 6, "Unop").total_bits);
}

TEST_CASE("injected match-count fault is reported with its cell") {
    auto t = run_grid(small_spec());
    for (auto& r : t.rows)
        if (r.profile_count == 64 && r.config == "Com-P") r.match_count += 1;
    const auto results = trend_check(t);
    CHECK(passed(results, "unop_area_linear_in_profile_count"));
    CHECK(passed(results, "area_monotone_across_configs"));
    CHECK_FALSE(passed(results, "match_counts_identical_across_configs"));
    const auto report = trend_report(results);
    CHECK(report.find("FAIL match_counts_identical_across_configs") != std::string::npos);
    CHECK(report.find("64") != std::string::npos);
}

TEST_CASE("injected area fault breaks linearity and monotonicity") {
    auto spec = small_spec();
    spec.profile_counts = {16, 64, 256};
    auto t = run_grid(spec);
    for (auto& r : t.rows)
        if (r.profile_count == 64 && r.config == "Unop") r.total_bits += 1;
    const auto results = trend_check(t);
    CHECK_FALSE(passed(results, "unop_area_linear_in_profile_count"));

    for (auto& r : t.rows)
        if (r.profile_count == 16 && r.config == "Com-P-CharDec") r.total_bits = 1u << 30;
    CHECK_FALSE(passed(trend_check(t), "area_monotone_across_configs"));
}

TEST_CASE("no sharing when the shared-prefix rate is zero") {
    auto spec = small_spec();
    spec.prefix_share = 0.0;
    spec.profile_counts = {8, 16};
    spec.lengths = {2, 4};
    const auto t = run_grid(spec);
    for (const std::size_t c : spec.profile_counts)
        for (const std::size_t l : spec.lengths) {
            CHECK(row(t, c, l, "Com-P").total_bits == row(t, c, l, "Unop").total_bits);
            CHECK(row(t, c, l, "Com-P-CharDec").total_bits == row(t, c, l, "Unop-CharDec").total_bits);
        }
}

TEST_CASE("default rate passes every trend") {
    GridSpec spec;
    spec.doc_count = 2;
    spec.doc_size = 4096;
    const auto t = run_grid(spec);
    CHECK(t.rows.size() == 4 * 3 * 4);
    for (const auto& r : trend_check(t)) CHECK_MESSAGE(r.passed, r.name << ": " << r.detail);
}

TEST_CASE("linearity helper") {
    CHECK(exactly_linear({{16, 100}, {64, 388}, {256, 1540}}));
    CHECK_FALSE(exactly_linear({{16, 100}, {64, 389}, {256, 1540}}));
    CHECK(exactly_linear({{1, 5}, {2, 7}}));
}

TEST_CASE("csv names every parameter") {
    std::ostringstream ss;
    write_table_csv(ss, run_grid(small_spec()));
    const auto text = ss.str();
    CHECK(text.rfind("#", 0) == 0);
    for (const char* key : {"axis_mix", "prefix_share", "seed", "doc_size"}) CHECK(text.find(key) != std::string::npos);
    CHECK(text.find("profile_count,length,config,total_bits,block_count,mb_per_s,match_count") != std::string::npos);
}

}  // TEST_SUITE
