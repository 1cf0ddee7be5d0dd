#include <doctest.h>

#include <map>
#include <sstream>
#include <stdexcept>

#include "mcosq/ingest.hpp"
#include "support/fixtures.hpp"

using namespace mcosq;
using namespace mcosq::testing;

namespace {

// maximal contiguous appearance runs per object id
std::map<std::string, unsigned> runs_per_id(const VideoRelation& rel) {
    std::map<std::string, std::vector<Fid>> frames_of;
    for (Fid f = 0; f < rel.frame_count(); ++f)
        for (ObjId id : rel.object_set_of(f).members())
            frames_of[rel.id_token(id)].push_back(f);
    std::map<std::string, unsigned> runs;
    for (auto& [id, frames] : frames_of) {
        unsigned r = 1;
        for (std::size_t k = 1; k < frames.size(); ++k)
            if (frames[k] != frames[k - 1] + 1) ++r;
        runs[id] = r;
    }
    return runs;
}

std::string to_csv(const VideoRelation& rel) {
    std::ostringstream os;
    write_vr_csv(rel, os);
    return os.str();
}

} // namespace

TEST_CASE("csv rows map directly to records") {
    std::istringstream in("fid,id,class\n12,7,car\n");
    auto rel = parse_vr(in, FeedFormat::Csv);
    CHECK(rel.frame_count() == 13);
    CHECK(rel.object_set_of(12).size() == 1);
    CHECK(rel.id_token(rel.object_set_of(12).members()[0]) == "7");
    CHECK(rel.object_set_of(3).empty()); // missing fids become empty frames
}

TEST_CASE("duplicate rows are a consistency error") {
    std::istringstream in("fid,id,class\n0,B,car\n0,B,car\n");
    CHECK_THROWS_AS(parse_vr(in, FeedFormat::Csv), std::invalid_argument);
}

TEST_CASE("malformed rows carry a line number") {
    std::istringstream in("fid,id,class\n1,x\n");
    CHECK_THROWS_WITH_AS(parse_vr(in, FeedFormat::Csv),
                         doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("the example feed round-trips through csv") {
    auto rel = example_feed();
    std::ostringstream os;
    write_vr_csv(rel, os);
    std::istringstream in(os.str());
    auto parsed = parse_vr(in, FeedFormat::Csv);
    CHECK(parsed.frame_count() == rel.frame_count());
    for (Fid f = 0; f < rel.frame_count(); ++f)
        CHECK(parsed.object_set_of(f).size() == rel.object_set_of(f).size());
    CHECK(parsed.object_set_of(2) == ids_of(parsed, "ABDF"));
}

TEST_CASE("jsonl records parse") {
    std::istringstream in(R"({"fid": 0, "id": "B", "class": "car"}
{"fid": 2, "id": "A", "class": "person"}
)");
    auto rel = parse_vr(in, FeedFormat::Jsonl);
    CHECK(rel.frame_count() == 3);
    CHECK(rel.object_set_of(0).size() == 1);
    CHECK(rel.object_set_of(1).empty());

    std::istringstream bad("{\"fid\": \"x\"}\n");
    CHECK_THROWS_AS(parse_vr(bad, FeedFormat::Jsonl), std::runtime_error);
}

TEST_CASE("filter_classes drops exactly the unwanted classes") {
    std::vector<ObjectRecord> records = {
        {0, "a", "car"}, {0, "b", "person"}, {0, "c", "dog"},
        {1, "a", "car"}, {1, "c", "dog"},
    };
    auto rel = VideoRelation::from_records(records, 3);

    auto filtered = filter_classes(rel, {"car", "person"});
    CHECK(filtered.frame_count() == 3);
    CHECK(filtered.object_set_of(0).size() == 2);
    CHECK(filtered.object_set_of(1).size() == 1);

    auto same = filter_classes(rel, {"car", "person", "dog"});
    CHECK(to_csv(same) == to_csv(rel));

    auto none = filter_classes(rel, {});
    CHECK(none.frame_count() == 3);
    for (Fid f = 0; f < 3; ++f) CHECK(none.object_set_of(f).empty());

    auto twice = filter_classes(filtered, {"car", "person"});
    CHECK(to_csv(twice) == to_csv(filtered));
}

TEST_CASE("generated feeds are deterministic") {
    FeedConfig cfg;
    cfg.n_frames = 300;
    cfg.mean_objects_per_frame = 4;
    cfg.mean_frames_per_object = 20;
    cfg.seed = 42;
    CHECK(to_csv(generate_feed(cfg)) == to_csv(generate_feed(cfg)));
    cfg.seed = 43;
    CHECK(to_csv(generate_feed(cfg)) != to_csv(generate_feed(FeedConfig{
        300, 4, 20, 4, {0.4, 0.3, 0.2, 0.1}, 0, 42})));
}

TEST_CASE("occlusion zero means one contiguous run per id") {
    FeedConfig cfg;
    cfg.n_frames = 400;
    cfg.mean_objects_per_frame = 5;
    cfg.mean_frames_per_object = 25;
    cfg.occlusion = 0;
    cfg.seed = 7;
    auto rel = generate_feed(cfg);
    for (const auto& [id, runs] : runs_per_id(rel)) CHECK(runs == 1);
}

TEST_CASE("runs per id never exceed occlusion + 1") {
    FeedConfig cfg;
    cfg.n_frames = 600;
    cfg.mean_objects_per_frame = 5;
    cfg.mean_frames_per_object = 15;
    cfg.occlusion = 3;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        cfg.seed = seed;
        auto rel = generate_feed(cfg);
        for (const auto& [id, runs] : runs_per_id(rel)) CHECK(runs <= 4);
    }
}

TEST_CASE("empirical objects per frame tracks the configured mean") {
    FeedConfig cfg;
    cfg.n_frames = 2000;
    cfg.mean_objects_per_frame = 7;
    cfg.mean_frames_per_object = 30;
    cfg.occlusion = 0;
    double total = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        cfg.seed = seed;
        auto rel = generate_feed(cfg);
        std::uint64_t incidences = 0;
        for (Fid f = 0; f < rel.frame_count(); ++f) incidences += rel.object_set_of(f).size();
        total += static_cast<double>(incidences) / static_cast<double>(rel.frame_count());
    }
    double mean = total / 10.0;
    CHECK(mean > 7.0 * 0.85);
    CHECK(mean < 7.0 * 1.15);
}

TEST_CASE("presets carry the published statistics") {
    auto m2 = preset_config("M2");
    CHECK(m2.n_frames == 750);
    CHECK(m2.mean_objects_per_frame == doctest::Approx(11.59));
    CHECK(m2.occlusion == 3);
    CHECK_THROWS_AS(preset_config("Z9"), std::invalid_argument);
}

TEST_CASE("feed config files parse key=value pairs") {
    std::istringstream in(
        "n_frames=500\nmean_objects_per_frame=6.5\nmean_frames_per_object=40\n"
        "n_classes=2\nclass_weights=0.5,0.5\nocclusion=2\nseed=9\n");
    auto cfg = parse_feed_config(in);
    CHECK(cfg.n_frames == 500);
    CHECK(cfg.n_classes == 2);
    CHECK(cfg.occlusion == 2);
    CHECK(cfg.seed == 9);

    std::istringstream bad("n_frames=500\nclass_weights=0.9,0.3\nn_classes=2\n");
    CHECK_THROWS(parse_feed_config(bad));
}
