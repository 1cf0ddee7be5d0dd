#include "mcosq/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <future>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mcosq/flat_engine.hpp"
#include "mcosq/ssg.hpp"

namespace mcosq {

const char* engine_name(EngineKind kind) {
    switch (kind) {
        case EngineKind::Naive: return "naive";
        case EngineKind::Mfs: return "mfs";
        case EngineKind::Ssg: return "ssg";
    }
    return "?";
}

EngineKind engine_from_name(const std::string& name) {
    if (name == "naive") return EngineKind::Naive;
    if (name == "mfs") return EngineKind::Mfs;
    if (name == "ssg") return EngineKind::Ssg;
    throw std::invalid_argument("unknown engine '" + name + "'");
}

std::vector<QueryGroup> group_queries(const std::vector<Query>& queries) {
    std::vector<QueryGroup> groups;
    for (const Query& q : queries) {
        auto it = std::find_if(groups.begin(), groups.end(),
                               [&](const QueryGroup& g) { return g.window == q.window; });
        if (it == groups.end()) {
            groups.push_back({q.window, q.duration, {q}});
        } else {
            it->d_min = std::min(it->d_min, q.duration);
            it->queries.push_back(q);
        }
    }
    return groups;
}

bool QueryMatch::operator<(const QueryMatch& o) const {
    if (frame != o.frame) return frame < o.frame;
    if (group_window != o.group_window) return group_window < o.group_window;
    if (qid != o.qid) return qid < o.qid;
    if (mcos != o.mcos) return mcos < o.mcos;
    return frames < o.frames;
}

bool QueryMatch::operator==(const QueryMatch& o) const {
    return frame == o.frame && group_window == o.group_window && qid == o.qid &&
           mcos == o.mcos && frames == o.frames;
}

namespace {

struct GroupOutcome {
    std::vector<QueryMatch> matches;
    RunMetrics metrics;
};

GroupOutcome run_group(const VideoRelation& relation, const QueryGroup& group,
                       EngineKind engine, bool prune) {
    GroupOutcome out;
    out.metrics.engine = engine_name(engine);
    auto t0 = std::chrono::steady_clock::now();

    IndexSet indexes = IndexSet::build(group.queries);
    PruneHook hook;
    if (prune)
        hook = [&indexes, &relation](const IdSet& ids) {
            return prune_check(indexes, ids, relation);
        };

    FlatEngine flat(engine == EngineKind::Naive ? FlatEngine::Mode::Naive
                                                : FlatEngine::Mode::Mfs,
                    group.window, hook);
    SsgEngine ssg(group.window, hook);

    for (Fid i = 0; i < relation.frame_count(); ++i) {
        ResultStateSet results;
        if (engine == EngineKind::Ssg) {
            results = ssg.process_frame(i, relation.object_set_of(i), group.d_min);
            out.metrics.states_live_max = std::max(out.metrics.states_live_max, ssg.live_states());
            out.metrics.edges_live_max = std::max(out.metrics.edges_live_max, ssg.live_edges());
        } else {
            flat.process_frame(i, relation.object_set_of(i));
            results = flat.collect_results(group.d_min);
            out.metrics.states_live_max = std::max(out.metrics.states_live_max, flat.live_states());
        }
        for (const ResultState& rs : results) {
            auto counts = aggregate(rs.ids, relation);
            for (const std::string& qid : indexes.evaluate(counts)) {
                const Query* q = nullptr;
                for (const Query& cand : group.queries)
                    if (cand.qid == qid) {
                        q = &cand;
                        break;
                    }
                if (!q || rs.frames.size() < q->duration) continue;
                QueryMatch m;
                m.frame = i;
                m.group_window = group.window;
                m.qid = qid;
                for (ObjId id : rs.ids.members()) m.mcos.push_back(relation.id_token(id));
                std::sort(m.mcos.begin(), m.mcos.end());
                m.frames = rs.frames;
                out.matches.push_back(std::move(m));
            }
        }
    }
    out.metrics.intersections_computed =
        engine == EngineKind::Ssg ? ssg.intersections() : flat.intersections();
    out.metrics.frames_processed = relation.frame_count();
    out.metrics.matches = out.matches.size();
    out.metrics.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

} // namespace

PipelineResult run_pipeline(const VideoRelation& relation, const std::vector<Query>& queries,
                            EngineKind engine, bool prune) {
    if (prune && !is_prunable(queries))
        throw std::invalid_argument(
            "run_pipeline: pruning requires every condition to use >=");

    // class-filter push-down: objects no query asks about never reach the engines
    std::set<std::string> wanted;
    for (const Query& q : queries)
        for (const Clause& clause : q.clauses)
            for (const Condition& c : clause) wanted.insert(c.label);
    VideoRelation filtered = filter_classes(relation, wanted);

    std::vector<QueryGroup> groups = group_queries(queries);

    PipelineResult result;
    result.totals.engine = engine_name(engine);
    auto t0 = std::chrono::steady_clock::now();

    std::vector<GroupOutcome> outcomes(groups.size());
    if (groups.size() > 1) {
        std::vector<std::future<GroupOutcome>> futures;
        futures.reserve(groups.size());
        for (const QueryGroup& g : groups)
            futures.push_back(std::async(std::launch::async, [&filtered, &g, engine, prune] {
                return run_group(filtered, g, engine, prune);
            }));
        for (std::size_t k = 0; k < futures.size(); ++k) outcomes[k] = futures[k].get();
    } else {
        for (std::size_t k = 0; k < groups.size(); ++k)
            outcomes[k] = run_group(filtered, groups[k], engine, prune);
    }

    for (GroupOutcome& o : outcomes) {
        result.totals.intersections_computed += o.metrics.intersections_computed;
        result.totals.states_live_max += o.metrics.states_live_max;
        result.totals.edges_live_max += o.metrics.edges_live_max;
        result.totals.matches += o.metrics.matches;
        result.per_group.push_back(o.metrics);
        result.matches.insert(result.matches.end(),
                              std::make_move_iterator(o.matches.begin()),
                              std::make_move_iterator(o.matches.end()));
    }
    result.totals.frames_processed = relation.frame_count();
    result.totals.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::sort(result.matches.begin(), result.matches.end());
    return result;
}

void write_matches_jsonl(const std::vector<QueryMatch>& matches, std::ostream& out) {
    for (const QueryMatch& m : matches) {
        nlohmann::json j;
        j["frame"] = m.frame;
        j["qid"] = m.qid;
        j["mcos"] = m.mcos;
        j["frames"] = m.frames;
        out << j.dump() << '\n';
    }
}

namespace {

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = value.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(value.substr(start));
            break;
        }
        out.push_back(value.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

std::string strip_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

Query any_class_query(const FeedConfig& feed, Fid w, Fid d) {
    Query q;
    q.qid = "any";
    Clause clause;
    static const char* names[] = {"person", "car", "truck", "bus"};
    for (std::uint32_t c = 0; c < feed.n_classes; ++c) {
        std::string label = c < 4 ? names[c] : "class" + std::to_string(c);
        clause.push_back({label, Theta::Ge, 1});
    }
    q.clauses.push_back(std::move(clause));
    q.window = w;
    q.duration = d;
    return q;
}

} // namespace

BenchConfig parse_bench_config(std::istream& in) {
    BenchConfig cfg;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = strip_ws(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bench config: line " + std::to_string(line_no) +
                                     ": expected key=value");
        std::string key = strip_ws(t.substr(0, eq));
        std::string value = strip_ws(t.substr(eq + 1));
        if (key == "engines") {
            cfg.engines.clear();
            for (const auto& e : split_list(value)) cfg.engines.push_back(engine_from_name(strip_ws(e)));
        } else if (key == "preset") {
            cfg.preset = value;
            cfg.feed = preset_config(value);
        } else if (key == "frames") {
            cfg.feed.n_frames = std::stoull(value);
        } else if (key == "obj_per_frame") {
            cfg.feed.mean_objects_per_frame = std::stod(value);
        } else if (key == "frames_per_obj") {
            cfg.feed.mean_frames_per_object = std::stod(value);
        } else if (key == "w") {
            cfg.windows.clear();
            for (const auto& v : split_list(value)) cfg.windows.push_back(std::stoull(strip_ws(v)));
        } else if (key == "d") {
            cfg.durations.clear();
            for (const auto& v : split_list(value)) cfg.durations.push_back(std::stoull(strip_ws(v)));
        } else if (key == "occlusion") {
            cfg.occlusions.clear();
            for (const auto& v : split_list(value))
                cfg.occlusions.push_back(static_cast<std::uint32_t>(std::stoul(strip_ws(v))));
        } else if (key == "seed") {
            cfg.seeds.clear();
            for (const auto& v : split_list(value)) cfg.seeds.push_back(std::stoull(strip_ws(v)));
        } else if (key == "prune") {
            cfg.prune = value == "1" || value == "true";
        } else if (key == "queries") {
            cfg.queries = parse_query_file(value);
        } else {
            throw std::runtime_error("bench config: line " + std::to_string(line_no) +
                                     ": unknown key '" + key + "'");
        }
    }
    return cfg;
}

BenchConfig parse_bench_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("bench config: cannot open " + path);
    return parse_bench_config(in);
}

std::vector<BenchRow> bench(const BenchConfig& config) {
    std::vector<BenchRow> rows;
    for (std::uint64_t seed : config.seeds) {
        for (std::uint32_t occ : config.occlusions) {
            FeedConfig feed = config.feed;
            feed.occlusion = occ;
            feed.seed = seed;
            VideoRelation relation = generate_feed(feed);
            auto run_cell = [&](EngineKind engine, Fid w, Fid d,
                               const std::vector<Query>& queries) {
                PipelineResult pr = run_pipeline(relation, queries, engine, config.prune);
                BenchRow row;
                row.engine = engine_name(engine);
                row.preset = config.preset.empty() ? "custom" : config.preset;
                row.window = w;
                row.duration = d;
                row.occlusion = occ;
                row.seed = seed;
                row.metrics = pr.totals;
                rows.push_back(std::move(row));
            };
            for (EngineKind engine : config.engines) {
                if (!config.queries.empty()) {
                    Fid w = config.queries.front().window;
                    Fid d = config.queries.front().duration;
                    run_cell(engine, w, d, config.queries);
                    continue;
                }
                for (Fid w : config.windows)
                    for (Fid d : config.durations)
                        run_cell(engine, w, d, {any_class_query(feed, w, d)});
            }
        }
    }
    return rows;
}

void write_bench_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
    out << "engine,preset,w,d,occlusion,seed,frames_processed,intersections_computed,"
           "states_live_max,edges_live_max,matches,wall_time\n";
    for (const BenchRow& r : rows) {
        out << r.engine << ',' << r.preset << ',' << r.window << ',' << r.duration << ','
            << r.occlusion << ',' << r.seed << ',' << r.metrics.frames_processed << ','
            << r.metrics.intersections_computed << ',' << r.metrics.states_live_max << ','
            << r.metrics.edges_live_max << ',' << r.metrics.matches << ',' << r.metrics.wall_time
            << '\n';
    }
}

} // namespace mcosq
