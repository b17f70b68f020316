#pragma once

#include "xpfilter/datapath.hpp"
#include "xpfilter/workload.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace xpfilter::metrics {

struct GridSpec {
    std::vector<std::size_t> profile_counts{16, 64, 256, 1024};
    std::vector<std::size_t> lengths{2, 4, 6};
    std::vector<DatapathConfig> configs = all_configs();
    double axis_mix = 0.5;
    double prefix_share = 0.5;
    double root_anchor = 0.25;
    workload::SchemaParams schema;
    std::size_t doc_count = 4;
    std::size_t doc_size = 16 * 1024;
    std::size_t doc_depth = 10;
    std::uint64_t seed = 1;
};

struct ExperimentRow {
    std::size_t profile_count = 0;
    std::size_t length = 0;
    std::string config;
    std::uint64_t total_bits = 0;
    std::size_t block_count = 0;
    double mb_per_s = 0.0;  // informational only
    std::size_t match_count = 0;
};

struct ExperimentTable {
    GridSpec spec;
    std::vector<ExperimentRow> rows;  // sorted by (length, count, config order)
};

// One row per (count, length, config). Profiles for a (count, length) cell
// are generated once and shared by all configs; every cell runs the same
// document set.
ExperimentTable run_grid(const GridSpec& spec);

void write_table_csv(std::ostream& out, const ExperimentTable& table);

struct TrendResult {
    std::string name;
    bool passed = true;
    std::string detail;
};

// (a) Unop area exactly linear in profile count per length,
// (b) Com-P-CharDec <= Unop-CharDec <= Unop and Com-P <= Unop per cell,
// (c) identical match counts across configs per cell.
std::vector<TrendResult> trend_check(const ExperimentTable& table);
std::string trend_report(const std::vector<TrendResult>& results);

// Exact test that the (x, y) points lie on one line (integer arithmetic).
bool exactly_linear(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points);

}  // namespace xpfilter::metrics
