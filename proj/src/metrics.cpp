#include "xpfilter/metrics.hpp"

#include "xpfilter/errors.hpp"
#include "xpfilter/prefix_forest.hpp"
#include "xpfilter/profile.hpp"
#include "xpfilter/simulator.hpp"

#include <algorithm>
#include <optional>
#include <tuple>
#include <map>
#include <ostream>
#include <sstream>

namespace xpfilter::metrics {

namespace {

std::uint64_t cell_seed(std::uint64_t seed, std::size_t count, std::size_t length) {
    return seed * 1000003ULL + count * 7919ULL + length;
}

std::size_t config_rank(const std::string& name) {
    const auto configs = all_configs();
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (config_name(configs[i]) == name) return i;
    }
    return configs.size();
}

}  // namespace

ExperimentTable run_grid(const GridSpec& spec) {
    if (spec.profile_counts.empty() || spec.lengths.empty() || spec.configs.empty()) {
        throw InvalidArgument("experiment grid needs at least one count, length and config");
    }
    ExperimentTable table;
    table.spec = spec;
    const auto schema = workload::make_schema(spec.schema);

    std::vector<std::string> docs;
    for (std::size_t d = 0; d < spec.doc_count; ++d) {
        docs.push_back(workload::gen_document(schema, {spec.doc_size, spec.doc_depth, spec.seed + d}));
    }

    for (const std::size_t length : spec.lengths) {
        for (const std::size_t count : spec.profile_counts) {
            workload::ProfileParams pp;
            pp.count = count;
            pp.length = length;
            pp.axis_mix = spec.axis_mix;
            pp.prefix_share = spec.prefix_share;
            pp.root_anchor = spec.root_anchor;
            pp.seed = cell_seed(spec.seed, count, length);
            const auto raw = workload::gen_profiles(schema, pp);
            std::vector<StackRegexIr> irs;
            for (const auto& ast : parse_profiles(raw, &schema.dict)) irs.push_back(lower_profile(ast));
            const auto forest = build_prefix_forest(irs);

            for (const auto& config : spec.configs) {
                const auto dp = lower_to_datapath(forest, config);
                const auto area = area_report(dp);
                const auto run = run_stream(dp, docs);
                ExperimentRow row;
                row.profile_count = count;
                row.length = length;
                row.config = config_name(config);
                row.total_bits = area.total_bits;
                row.block_count = area.block_count;
                row.mb_per_s = run.stats.mb_per_s;
                for (const auto& outcome : run.per_doc) {
                    if (outcome.error) throw *outcome.error;
                    row.match_count += outcome.events.size();
                }
                table.rows.push_back(std::move(row));
            }
        }
    }
    std::stable_sort(table.rows.begin(), table.rows.end(), [](const auto& a, const auto& b) {
        return std::make_tuple(a.length, a.profile_count, config_rank(a.config)) <
               std::make_tuple(b.length, b.profile_count, config_rank(b.config));
    });
    return table;
}

void write_table_csv(std::ostream& out, const ExperimentTable& table) {
    const auto& s = table.spec;
    out << "# axis_mix=" << s.axis_mix << " prefix_share=" << s.prefix_share << " root_anchor=" << s.root_anchor
        << " alphabet=" << s.schema.alphabet << " fanout=" << s.schema.fanout << " schema_seed=" << s.schema.seed
        << " doc_count=" << s.doc_count << " doc_size=" << s.doc_size << " doc_depth=" << s.doc_depth
        << " seed=" << s.seed << "\n";
    out << "profile_count,length,config,total_bits,block_count,mb_per_s,match_count\n";
    for (const auto& r : table.rows) {
        out << r.profile_count << ',' << r.length << ',' << r.config << ',' << r.total_bits << ',' << r.block_count
            << ',' << r.mb_per_s << ',' << r.match_count << '\n';
    }
}

bool exactly_linear(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& points) {
    if (points.size() < 3) return true;
    const auto [x0, y0] = points[0];
    const auto [x1, y1] = points[1];
    const auto dx = static_cast<__int128>(x1) - x0;
    const auto dy = static_cast<__int128>(y1) - y0;
    for (std::size_t i = 2; i < points.size(); ++i) {
        const auto ex = static_cast<__int128>(points[i].first) - x0;
        const auto ey = static_cast<__int128>(points[i].second) - y0;
        if (ey * dx != dy * ex) return false;
    }
    return true;
}

std::vector<TrendResult> trend_check(const ExperimentTable& table) {
    using Cell = std::pair<std::size_t, std::size_t>;  // (length, count)
    std::map<Cell, std::map<std::string, const ExperimentRow*>> cells;
    for (const auto& row : table.rows) cells[{row.length, row.profile_count}][row.config] = &row;

    TrendResult linear{"unop_area_linear_in_profile_count", true, ""};
    TrendResult monotone{"area_monotone_across_configs", true, ""};
    TrendResult matches{"match_counts_identical_across_configs", true, ""};

    std::map<std::size_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>> unop_points;
    for (const auto& [cell, by_config] : cells) {
        const auto [length, count] = cell;
        const std::string where = "(count=" + std::to_string(count) + ", length=" + std::to_string(length) + ")";
        const auto bits = [&](const char* name) -> std::optional<std::uint64_t> {
            auto it = by_config.find(name);
            if (it == by_config.end()) return std::nullopt;
            return it->second->total_bits;
        };
        if (auto unop = bits("Unop")) unop_points[length].emplace_back(count, *unop);

        const auto unop = bits("Unop"), comp = bits("Com-P"), unop_cd = bits("Unop-CharDec"),
                   comp_cd = bits("Com-P-CharDec");
        const auto fail_monotone = [&](const std::string& what) {
            if (monotone.passed) monotone.detail = what + " at " + where;
            monotone.passed = false;
        };
        if (comp_cd && unop_cd && *comp_cd > *unop_cd) fail_monotone("Com-P-CharDec > Unop-CharDec");
        if (unop_cd && unop && *unop_cd > *unop) fail_monotone("Unop-CharDec > Unop");
        if (comp && unop && *comp > *unop) fail_monotone("Com-P > Unop");

        std::optional<std::size_t> reference;
        for (const auto& [name, row] : by_config) {
            if (!reference) {
                reference = row->match_count;
            } else if (row->match_count != *reference && matches.passed) {
                matches.passed = false;
                matches.detail = "config " + name + " reports " + std::to_string(row->match_count) + " matches vs " +
                                 std::to_string(*reference) + " at " + where;
            }
        }
    }
    for (auto& [length, points] : unop_points) {
        std::sort(points.begin(), points.end());
        if (!exactly_linear(points) && linear.passed) {
            linear.passed = false;
            linear.detail = "Unop area not linear at length " + std::to_string(length);
        }
    }
    if (unop_points.empty()) {
        linear.passed = false;
        linear.detail = "no Unop rows";
    }
    return {linear, monotone, matches};
}

std::string trend_report(const std::vector<TrendResult>& results) {
    std::ostringstream out;
    for (const auto& r : results) {
        out << (r.passed ? "PASS " : "FAIL ") << r.name;
        if (!r.detail.empty()) out << ": " << r.detail;
        out << '\n';
    }
    return out.str();
}

}  // namespace xpfilter::metrics
