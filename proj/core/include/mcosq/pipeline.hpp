#ifndef MCOSQ_PIPELINE_HPP
#define MCOSQ_PIPELINE_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcosq/cnf.hpp"
#include "mcosq/feed.hpp"
#include "mcosq/ingest.hpp"

namespace mcosq {

enum class EngineKind { Naive, Mfs, Ssg };

const char* engine_name(EngineKind kind);
EngineKind engine_from_name(const std::string& name);

/// Queries sharing a window size run against one engine instance, driven by
/// the smallest duration among them; each query re-filters by its own.
struct QueryGroup {
    Fid window = 1;
    Fid d_min = 0;
    std::vector<Query> queries;
};

std::vector<QueryGroup> group_queries(const std::vector<Query>& queries);

struct QueryMatch {
    Fid frame = 0;
    Fid group_window = 1;
    std::string qid;
    std::vector<std::string> mcos; // display tokens, sorted
    std::vector<Fid> frames;

    bool operator<(const QueryMatch& o) const;
    bool operator==(const QueryMatch& o) const;
};

struct RunMetrics {
    std::string engine;
    std::uint64_t intersections_computed = 0;
    std::size_t states_live_max = 0;
    std::size_t edges_live_max = 0;
    std::uint64_t frames_processed = 0;
    std::uint64_t matches = 0;
    double wall_time = 0.0;
};

struct PipelineResult {
    std::vector<QueryMatch> matches; // sorted (frame, window, qid, ...)
    RunMetrics totals;
    std::vector<RunMetrics> per_group;
};

/// The full metadata path: class-filter push-down, per-group state
/// maintenance, aggregation, CNF evaluation, per-query duration filter.
/// `prune` requires a >=-only query set (std::invalid_argument otherwise).
/// Groups execute concurrently; output order is deterministic.
PipelineResult run_pipeline(const VideoRelation& relation, const std::vector<Query>& queries,
                            EngineKind engine, bool prune);

void write_matches_jsonl(const std::vector<QueryMatch>& matches, std::ostream& out);

/// Benchmark sweep: engines x windows x durations x occlusions x seeds over
/// a generated feed. Deterministic given the seeds.
struct BenchConfig {
    std::vector<EngineKind> engines{EngineKind::Naive, EngineKind::Mfs, EngineKind::Ssg};
    FeedConfig feed;                  // base feed; occlusion/seed overridden per cell
    std::string preset;               // optional preset name the feed came from
    std::vector<Fid> windows{300};
    std::vector<Fid> durations{240};
    std::vector<std::uint32_t> occlusions{0};
    std::vector<std::uint64_t> seeds{1};
    bool prune = false;
    std::vector<Query> queries;       // empty: one any-class >=1 query per (w, d)
};

BenchConfig parse_bench_config(std::istream& in);
BenchConfig parse_bench_config_file(const std::string& path);

struct BenchRow {
    std::string engine;
    std::string preset;
    Fid window = 0;
    Fid duration = 0;
    std::uint32_t occlusion = 0;
    std::uint64_t seed = 0;
    RunMetrics metrics;
};

std::vector<BenchRow> bench(const BenchConfig& config);
void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out);

} // namespace mcosq

#endif
