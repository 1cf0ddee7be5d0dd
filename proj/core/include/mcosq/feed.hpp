#ifndef MCOSQ_FEED_HPP
#define MCOSQ_FEED_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace mcosq {

using Fid = std::uint64_t;     // frame index
using ObjId = std::uint32_t;   // interned object id
using LabelId = std::uint32_t; // interned class label

/// One row of the structured detection relation: object `id` of class
/// `label` was seen in frame `fid`.
struct ObjectRecord {
    Fid fid = 0;
    std::string id;
    std::string label;
};

/// Bijective token <-> dense integer mapping. Intersections and hashing
/// work on the dense side; tokens come back out only at the edges.
class Interner {
public:
    std::uint32_t intern(std::string_view token);
    const std::string& token_of(std::uint32_t value) const;
    bool contains(std::string_view token) const;
    std::uint32_t lookup(std::string_view token) const; // throws if absent
    std::size_t size() const { return tokens_.size(); }

private:
    std::vector<std::string> tokens_;
    std::unordered_map<std::string, std::uint32_t> index_;
};

/// Sorted, duplicate-free set of interned object ids. Equality and hashing
/// are structural.
class IdSet {
public:
    IdSet() = default;
    explicit IdSet(std::vector<ObjId> members); // sorts + dedups

    bool empty() const { return members_.empty(); }
    std::size_t size() const { return members_.size(); }
    const std::vector<ObjId>& members() const { return members_; }

    bool contains(ObjId id) const;
    bool subset_of(const IdSet& other) const;

    bool operator==(const IdSet& other) const { return members_ == other.members_; }
    bool operator!=(const IdSet& other) const { return members_ != other.members_; }
    bool operator<(const IdSet& other) const { return members_ < other.members_; }

    static IdSet intersect(const IdSet& a, const IdSet& b);

private:
    std::vector<ObjId> members_;
};

struct IdSetHash {
    std::size_t operator()(const IdSet& s) const;
};

/// Sliding window [lo, anchor] of at most `size` frames ending at `anchor`.
struct WindowView {
    Fid anchor = 0;
    Fid size = 1;
    Fid lo = 0;

    bool contains(Fid fid) const { return fid >= lo && fid <= anchor; }
    Fid frame_count() const { return anchor - lo + 1; }
};

/// window_of(i, w): the last w frames ending at i, clipped at the stream start.
WindowView window_of(Fid anchor, Fid size);

/// Immutable frame-indexed view of a detection relation. Frames are
/// contiguous 0..N-1; per-frame object sets may be empty.
class VideoRelation {
public:
    VideoRelation() = default;

    /// Builds from records, interning ids and labels. Throws
    /// std::invalid_argument on duplicate (fid, id) pairs or an id seen with
    /// two distinct labels. Frames between 0 and the largest fid (or
    /// min_frames, if larger) exist even when empty.
    static VideoRelation from_records(const std::vector<ObjectRecord>& records,
                                      Fid min_frames = 0);

    Fid frame_count() const { return static_cast<Fid>(frames_.size()); }
    const IdSet& object_set_of(Fid fid) const; // throws std::out_of_range
    LabelId class_of(ObjId id) const { return class_of_.at(id); }

    /// cooc: TRUE iff every member of `ids` is present in frame `fid`.
    /// Throws std::invalid_argument on an empty set.
    bool cooc(const IdSet& ids, Fid fid) const;

    const Interner& ids() const { return ids_; }
    const Interner& labels() const { return labels_; }

    std::size_t object_count() const { return class_of_.size(); }
    std::size_t label_count() const { return labels_.size(); }

    std::string id_token(ObjId id) const { return ids_.token_of(id); }
    std::string label_token(LabelId label) const { return labels_.token_of(label); }

private:
    std::vector<IdSet> frames_;
    std::vector<LabelId> class_of_; // indexed by ObjId
    Interner ids_;
    Interner labels_;

    friend class FeedBuilder;
};

} // namespace mcosq

#endif
