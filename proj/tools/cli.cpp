#include "cli.hpp"

#include "xpfilter/datapath.hpp"
#include "xpfilter/dictionary.hpp"
#include "xpfilter/errors.hpp"
#include "xpfilter/metrics.hpp"
#include "xpfilter/oracle.hpp"
#include "xpfilter/prefix_forest.hpp"
#include "xpfilter/profile.hpp"
#include "xpfilter/regex_ir.hpp"
#include "xpfilter/simulator.hpp"
#include "xpfilter/workload.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace xpfilter::cli {

namespace fs = std::filesystem;

namespace {

int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::Syntax:
    case ErrorKind::UnsupportedFeature: return 2;
    case ErrorKind::UnknownTag: return 3;
    case ErrorKind::StackOverflow: return 4;
    case ErrorKind::MalformedDocument: return 5;
    default: return 1;
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    out << contents;
}

struct CompileOptions {
    std::string profiles;
    std::string dict;
    bool prefix_share = false;
    bool char_decode = false;
    std::uint32_t stack_depth = kDefaultStackDepth;

    void add_to(CLI::App& cmd) {
        cmd.add_option("-p,--profiles", profiles, "profile file, one XPath per line")->required();
        cmd.add_option("-d,--dict", dict, "dictionary TSV; omit when profiles already use tag codes");
        cmd.add_flag("--prefix-share", prefix_share, "share common profile prefixes");
        cmd.add_flag("--char-decode", char_decode, "use the shared character pre-decoder");
        cmd.add_option("--stack-depth", stack_depth, "tag stack depth")->check(CLI::PositiveNumber);
    }

    DatapathConfig config() const { return {prefix_share, char_decode, stack_depth}; }

    std::vector<ProfileAst> load_profiles() const {
        const auto lines = read_profile_file(profiles);
        if (lines.empty()) throw InvalidArgument("profile file '" + profiles + "' contains no profiles");
        if (dict.empty()) return parse_profiles(lines, nullptr);
        const auto d = Dictionary::load_tsv_file(dict);
        return parse_profiles(lines, &d);
    }
};

std::vector<StackRegexIr> lower_all(const std::vector<ProfileAst>& asts) {
    std::vector<StackRegexIr> irs;
    irs.reserve(asts.size());
    for (const auto& ast : asts) irs.push_back(lower_profile(ast));
    return irs;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"XPath profile to filtering datapath compiler and simulator", "xpfilter"};
    app.require_subcommand(1);
    app.set_config("--config", "", "optional TOML/INI file with default flag values");

    // gen
    auto* gen = app.add_subcommand("gen", "generate profiles, dictionary, documents and a manifest");
    std::string gen_out;
    workload::SchemaParams schema_params;
    workload::ProfileParams profile_params;
    std::size_t gen_docs = 1;
    workload::DocumentParams doc_params;
    gen->add_option("-o,--out", gen_out, "output directory")->required();
    gen->add_option("--count", profile_params.count, "number of profiles")->check(CLI::PositiveNumber);
    gen->add_option("--length", profile_params.length, "steps per profile")->check(CLI::PositiveNumber);
    gen->add_option("--axis-mix", profile_params.axis_mix, "fraction of '/' steps")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--prefix-share", profile_params.prefix_share, "shared-prefix rate")->check(CLI::Range(0.0, 1.0));
    gen->add_option("--root-anchor", profile_params.root_anchor, "root-anchored fresh profiles")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--alphabet", schema_params.alphabet, "distinct tags")->check(CLI::Range(2, 260));
    gen->add_option("--fanout", schema_params.fanout, "allowed children per tag")->check(CLI::PositiveNumber);
    gen->add_option("--docs", gen_docs, "number of documents");
    gen->add_option("--doc-size", doc_params.size_bytes, "bytes per document");
    gen->add_option("--doc-depth", doc_params.max_depth, "maximum element depth")->check(CLI::PositiveNumber);
    std::uint64_t gen_seed = 1;
    gen->add_option("--seed", gen_seed, "master seed");

    // encode
    auto* encode = app.add_subcommand("encode", "rewrite element names of an XML document to tag codes");
    std::string encode_dict, encode_in, encode_out;
    encode->add_option("-d,--dict", encode_dict, "dictionary TSV")->required();
    encode->add_option("input", encode_in, "XML document")->required();
    encode->add_option("-o,--out", encode_out, "output file (default stdout)");

    // compile
    auto* compile = app.add_subcommand("compile", "compile profiles to IR, prefix forest, netlist and area report");
    CompileOptions compile_opts;
    compile_opts.add_to(*compile);
    std::string compile_dir;
    compile->add_option("-o,--out-dir", compile_dir, "write ir.txt, forest.txt, netlist.vhd, area.json here");

    // run
    auto* run_cmd = app.add_subcommand("run", "simulate the datapath over encoded documents");
    CompileOptions run_opts;
    run_opts.add_to(*run_cmd);
    std::vector<std::string> run_docs;
    std::string run_out, run_stats;
    run_cmd->add_option("docs", run_docs, "encoded documents; ids follow argument order")->required();
    run_cmd->add_option("-o,--out", run_out, "match CSV (default stdout)");
    run_cmd->add_option("--stats", run_stats, "throughput stats file (default stderr)");

    // oracle
    auto* oracle_cmd = app.add_subcommand("oracle", "reference matches by tree search");
    std::string oracle_profiles, oracle_dict, oracle_out;
    std::vector<std::string> oracle_docs;
    oracle_cmd->add_option("-p,--profiles", oracle_profiles, "profile file")->required();
    oracle_cmd->add_option("-d,--dict", oracle_dict, "dictionary TSV");
    oracle_cmd->add_option("docs", oracle_docs, "encoded documents")->required();
    oracle_cmd->add_option("-o,--out", oracle_out, "match CSV (default stdout)");

    // diff
    auto* diff = app.add_subcommand("diff", "compare two match CSVs as sets");
    std::string diff_a, diff_b;
    diff->add_option("left", diff_a, "first CSV")->required();
    diff->add_option("right", diff_b, "second CSV")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "area/throughput grid over the four configurations");
    metrics::GridSpec grid;
    std::string bench_out, bench_report;
    bench->add_option("--counts", grid.profile_counts, "profile counts")->delimiter(',');
    bench->add_option("--lengths", grid.lengths, "profile lengths")->delimiter(',');
    bench->add_option("--axis-mix", grid.axis_mix, "fraction of '/' steps")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--prefix-share", grid.prefix_share, "shared-prefix rate")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--root-anchor", grid.root_anchor, "root-anchored fresh profiles")->check(CLI::Range(0.0, 1.0));
    bench->add_option("--alphabet", grid.schema.alphabet, "distinct tags")->check(CLI::Range(2, 260));
    bench->add_option("--fanout", grid.schema.fanout, "allowed children per tag")->check(CLI::PositiveNumber);
    bench->add_option("--docs", grid.doc_count, "documents per cell");
    bench->add_option("--doc-size", grid.doc_size, "bytes per document");
    bench->add_option("--seed", grid.seed, "master seed");
    bench->add_option("-o,--out", bench_out, "table CSV (default stdout)");
    bench->add_option("--report", bench_report, "trend report file (default stderr)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        std::ostream& stream = e.get_exit_code() == 0 ? out : err;
        return app.exit(e, stream, stream);
    }

    try {
        if (*gen) {
            schema_params.seed = gen_seed;
            profile_params.seed = gen_seed + 1;
            const auto schema = workload::make_schema(schema_params);
            const auto profiles = workload::gen_profiles(schema, profile_params);
            fs::create_directories(gen_out);
            std::ostringstream lines;
            for (const auto& p : profiles) lines << p << '\n';
            write_file(fs::path(gen_out) / "profiles.txt", lines.str());
            std::ostringstream dict;
            schema.dict.save_tsv(dict);
            write_file(fs::path(gen_out) / "dict.tsv", dict.str());
            nlohmann::ordered_json manifest;
            manifest["note"] = "synthetic workload; schema, selectivity and sizes are generator defaults, not a "
                               "recovered corpus";
            manifest["seed"] = gen_seed;
            manifest["schema"] = {{"alphabet", schema_params.alphabet},
                                  {"fanout", schema_params.fanout},
                                  {"seed", schema_params.seed}};
            manifest["profiles"] = {{"file", "profiles.txt"},
                                    {"count", profile_params.count},
                                    {"length", profile_params.length},
                                    {"axis_mix", profile_params.axis_mix},
                                    {"prefix_share", profile_params.prefix_share},
                                    {"root_anchor", profile_params.root_anchor},
                                    {"seed", profile_params.seed}};
            manifest["dictionary"] = "dict.tsv";
            auto docs = nlohmann::ordered_json::array();
            for (std::size_t d = 0; d < gen_docs; ++d) {
                workload::DocumentParams dp = doc_params;
                dp.seed = gen_seed * 1000 + d;
                std::ostringstream name;
                name << "doc_" << std::setw(3) << std::setfill('0') << d << ".xml";
                write_file(fs::path(gen_out) / name.str(), workload::gen_document(schema, dp));
                docs.push_back({{"file", name.str()},
                                {"size_bytes", dp.size_bytes},
                                {"max_depth", dp.max_depth},
                                {"seed", dp.seed}});
            }
            manifest["documents"] = docs;
            write_file(fs::path(gen_out) / "manifest.json", manifest.dump(2) + "\n");
            return 0;
        }

        if (*encode) {
            const auto dict = Dictionary::load_tsv_file(encode_dict);
            const auto encoded = encode_document(read_file(encode_in), dict);
            if (encode_out.empty()) {
                out << encoded;
            } else {
                write_file(encode_out, encoded);
            }
            return 0;
        }

        if (*compile) {
            const auto irs = lower_all(compile_opts.load_profiles());
            const auto forest = build_prefix_forest(irs);
            const auto dp = lower_to_datapath(forest, compile_opts.config());
            dp.validate();
            const auto ir_text = dump_ir(irs);
            const auto forest_text = dump_forest(forest);
            const auto area_text = area_report_json(area_report(dp));
            if (compile_dir.empty()) {
                out << "# ir\n" << ir_text << "# forest\n" << forest_text << "# area\n" << area_text;
            } else {
                fs::create_directories(compile_dir);
                write_file(fs::path(compile_dir) / "ir.txt", ir_text);
                write_file(fs::path(compile_dir) / "forest.txt", forest_text);
                write_file(fs::path(compile_dir) / "netlist.vhd", emit_netlist(dp));
                write_file(fs::path(compile_dir) / "area.json", area_text);
            }
            return 0;
        }

        if (*run_cmd) {
            const auto forest = build_prefix_forest(lower_all(run_opts.load_profiles()));
            const auto dp = lower_to_datapath(forest, run_opts.config());
            std::vector<std::string> docs;
            docs.reserve(run_docs.size());
            for (const auto& path : run_docs) docs.push_back(read_file(path));
            const auto result = run_stream(dp, docs);
            std::vector<MatchEvent> events;
            int status = 0;
            for (std::size_t i = 0; i < result.per_doc.size(); ++i) {
                const auto& outcome = result.per_doc[i];
                if (outcome.error) {
                    err << "xpfilter: " << to_string(outcome.error->kind()) << ": " << run_docs[i] << ": "
                        << outcome.error->what() << '\n';
                    if (status == 0) status = exit_code(outcome.error->kind());
                    continue;
                }
                events.insert(events.end(), outcome.events.begin(), outcome.events.end());
            }
            if (run_out.empty()) {
                write_match_csv(out, events);
            } else {
                std::ofstream csv(run_out);
                if (!csv) throw IoError("cannot write '" + run_out + "'");
                write_match_csv(csv, events);
            }
            if (run_stats.empty()) {
                err << throughput_text(result.stats);
            } else {
                write_file(run_stats, throughput_text(result.stats));
            }
            return status;
        }

        if (*oracle_cmd) {
            const auto lines = read_profile_file(oracle_profiles);
            if (lines.empty()) throw InvalidArgument("profile file '" + oracle_profiles + "' contains no profiles");
            std::optional<Dictionary> dict;
            if (!oracle_dict.empty()) dict = Dictionary::load_tsv_file(oracle_dict);
            const auto asts = parse_profiles(lines, dict ? &*dict : nullptr);
            std::vector<MatchEvent> events;
            int status = 0;
            for (std::size_t i = 0; i < oracle_docs.size(); ++i) {
                try {
                    const auto tree = oracle::parse_tree(read_file(oracle_docs[i]));
                    const auto doc_events = oracle::match_document(tree, asts, i);
                    events.insert(events.end(), doc_events.begin(), doc_events.end());
                } catch (const Error& e) {
                    err << "xpfilter: " << to_string(e.kind()) << ": " << oracle_docs[i] << ": " << e.what() << '\n';
                    if (status == 0) status = exit_code(e.kind());
                }
            }
            if (oracle_out.empty()) {
                write_match_csv(out, events);
            } else {
                std::ofstream csv(oracle_out);
                if (!csv) throw IoError("cannot write '" + oracle_out + "'");
                write_match_csv(csv, events);
            }
            return status;
        }

        if (*diff) {
            const auto load = [](const std::string& path) {
                std::ifstream in(path);
                if (!in) throw IoError("cannot open '" + path + "'");
                auto events = read_match_csv(in);
                std::sort(events.begin(), events.end());
                return events;
            };
            const auto left = load(diff_a);
            const auto right = load(diff_b);
            if (left == right) {
                out << "EQUIVALENT (" << left.size() << " events)\n";
                return 0;
            }
            const auto render = [](const MatchEvent& e) {
                return std::to_string(e.doc_id) + "," + std::to_string(e.profile_id) + "," +
                       std::to_string(e.byte_offset);
            };
            const auto [l, r] = std::mismatch(left.begin(), left.end(), right.begin(), right.end());
            out << "DIFFERENT: first divergence: left " << (l == left.end() ? std::string("<end>") : render(*l))
                << ", right " << (r == right.end() ? std::string("<end>") : render(*r)) << '\n';
            return 1;
        }

        if (*bench) {
            const auto table = metrics::run_grid(grid);
            const auto trends = metrics::trend_check(table);
            if (bench_out.empty()) {
                metrics::write_table_csv(out, table);
            } else {
                std::ofstream csv(bench_out);
                if (!csv) throw IoError("cannot write '" + bench_out + "'");
                metrics::write_table_csv(csv, table);
            }
            const auto report = metrics::trend_report(trends);
            if (bench_report.empty()) {
                err << report;
            } else {
                write_file(bench_report, report);
            }
            for (const auto& t : trends) {
                if (!t.passed) return 1;
            }
            return 0;
        }
    } catch (const Error& e) {
        err << "xpfilter: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const std::exception& e) {
        err << "xpfilter: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace xpfilter::cli
