// Command-line front end: run queries over a detection relation, generate
// synthetic feeds, sweep benchmarks, and inspect single windows with the
// brute-force reference.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcosq/cnf.hpp"
#include "mcosq/ingest.hpp"
#include "mcosq/oracle.hpp"
#include "mcosq/pipeline.hpp"

using namespace mcosq;

namespace {

FeedFormat format_from_name(const std::string& name) {
    if (name == "csv") return FeedFormat::Csv;
    if (name == "jsonl") return FeedFormat::Jsonl;
    throw CLI::ValidationError("--format", "expected csv or jsonl");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-occurrence query engine over per-frame detection metadata"};
    app.require_subcommand(1);

    // run
    std::string run_input, run_format = "csv", run_queries, run_engine = "ssg", run_out;
    bool run_prune = false;
    auto* run = app.add_subcommand("run", "Evaluate queries over a relation file");
    run->add_option("--input", run_input, "Relation file")->required();
    run->add_option("--format", run_format, "csv|jsonl");
    run->add_option("--queries", run_queries, "Query file, one query per line")->required();
    run->add_option("--engine", run_engine, "naive|mfs|ssg");
    run->add_flag("--prune", run_prune, "Terminate states failing all >=-only queries");
    run->add_option("--out", run_out, "Match output (JSONL)")->required();

    // generate
    std::string gen_config, gen_preset, gen_out;
    std::int64_t gen_seed = -1;
    std::int64_t gen_occlusion = -1;
    auto* gen = app.add_subcommand("generate", "Generate a synthetic relation");
    gen->add_option("--config", gen_config, "FeedConfig file (key=value)");
    gen->add_option("--preset", gen_preset, "V1|V2|D1|D2|M1|M2");
    gen->add_option("--seed", gen_seed, "Seed override");
    gen->add_option("--occlusion", gen_occlusion, "Max id reuses override");
    gen->add_option("--out", gen_out, "Output relation (CSV)")->required();

    // bench
    std::string bench_config, bench_out;
    auto* bench_cmd = app.add_subcommand("bench", "Sweep engines over generated feeds");
    bench_cmd->add_option("--config", bench_config, "Bench config file")->required();
    bench_cmd->add_option("--out", bench_out, "Output table (CSV)")->required();

    // oracle
    std::string oracle_input, oracle_format = "csv";
    std::uint64_t oracle_window = 0, oracle_duration = 0, oracle_at = 0;
    auto* oracle_cmd = app.add_subcommand("oracle", "Brute-force MCOS of one window (debug)");
    oracle_cmd->add_option("--input", oracle_input, "Relation file")->required();
    oracle_cmd->add_option("--format", oracle_format, "csv|jsonl");
    oracle_cmd->add_option("--window", oracle_window, "Window size")->required();
    oracle_cmd->add_option("--duration", oracle_duration, "Duration threshold")->required();
    oracle_cmd->add_option("--at", oracle_at, "Anchor frame")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            VideoRelation relation = parse_vr_file(run_input, format_from_name(run_format));
            auto queries = parse_query_file(run_queries);
            PipelineResult result =
                run_pipeline(relation, queries, engine_from_name(run_engine), run_prune);
            auto out = open_out(run_out);
            write_matches_jsonl(result.matches, out);
            std::cerr << "engine=" << result.totals.engine
                      << " frames=" << result.totals.frames_processed
                      << " matches=" << result.totals.matches
                      << " intersections=" << result.totals.intersections_computed
                      << " states_live_max=" << result.totals.states_live_max
                      << " wall=" << result.totals.wall_time << "s\n";
        } else if (*gen) {
            FeedConfig cfg;
            if (!gen_preset.empty())
                cfg = preset_config(gen_preset);
            else if (!gen_config.empty())
                cfg = parse_feed_config_file(gen_config);
            else
                throw std::runtime_error("generate: need --config or --preset");
            if (gen_seed >= 0) cfg.seed = static_cast<std::uint64_t>(gen_seed);
            if (gen_occlusion >= 0) cfg.occlusion = static_cast<std::uint32_t>(gen_occlusion);
            VideoRelation relation = generate_feed(cfg);
            auto out = open_out(gen_out);
            write_vr_csv(relation, out);
        } else if (*bench_cmd) {
            BenchConfig cfg = parse_bench_config_file(bench_config);
            auto rows = bench(cfg);
            auto out = open_out(bench_out);
            write_bench_csv(rows, out);
        } else if (*oracle_cmd) {
            VideoRelation relation = parse_vr_file(oracle_input, format_from_name(oracle_format));
            ResultStateSet results =
                oracle_window(relation, oracle_at, oracle_window, oracle_duration);
            for (const ResultState& rs : results) {
                nlohmann::json j;
                std::vector<std::string> ids;
                for (ObjId id : rs.ids.members()) ids.push_back(relation.id_token(id));
                std::sort(ids.begin(), ids.end());
                j["mcos"] = ids;
                j["frames"] = rs.frames;
                std::cout << j.dump() << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
