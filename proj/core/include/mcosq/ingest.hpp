#ifndef MCOSQ_INGEST_HPP
#define MCOSQ_INGEST_HPP

#include <cstdint>
#include <iosfwd>
#include <set>
#include <string>
#include <vector>

#include "mcosq/feed.hpp"

namespace mcosq {

enum class FeedFormat { Csv, Jsonl };

/// Reads a detection relation. CSV expects a `fid,id,class` header; JSONL
/// expects one {"fid":int,"id":str,"class":str} object per line. Frame ids
/// missing between 0 and the maximum become empty frames. Malformed rows
/// raise std::runtime_error with the line number; duplicate (fid,id) rows
/// and class conflicts raise std::invalid_argument.
VideoRelation parse_vr(std::istream& in, FeedFormat format);
VideoRelation parse_vr_file(const std::string& path, FeedFormat format);

void write_vr_csv(const VideoRelation& relation, std::ostream& out);

/// Drops every record whose class is not wanted; frame count is unchanged.
VideoRelation filter_classes(const VideoRelation& relation,
                             const std::set<std::string>& wanted);

/// Synthetic feed knobs. Objects enter at random frames, stay visible for a
/// geometric duration with the given mean, and each id is reused (after a
/// gap) at most `occlusion` additional times.
struct FeedConfig {
    std::uint64_t n_frames = 1000;
    double mean_objects_per_frame = 5.0;
    double mean_frames_per_object = 50.0;
    std::uint32_t n_classes = 4;
    std::vector<double> class_weights = {0.4, 0.3, 0.2, 0.1};
    std::uint32_t occlusion = 0; // p_o: maximum id reuses
    std::uint64_t seed = 1;

    void validate() const; // throws std::invalid_argument
};

/// Table-driven presets named after the evaluation videos; `name` is one of
/// V1, V2, D1, D2, M1, M2.
FeedConfig preset_config(const std::string& name);

/// key=value text, keys exactly the FeedConfig field names
/// (class_weights comma-separated).
FeedConfig parse_feed_config(std::istream& in);
FeedConfig parse_feed_config_file(const std::string& path);

/// Deterministic: the same config yields a byte-identical relation. Each
/// id's appearance runs form at most occlusion+1 maximal intervals, and the
/// per-id run plan is a prefix of the plan for any larger occlusion value.
VideoRelation generate_feed(const FeedConfig& config);

} // namespace mcosq

#endif
