#ifndef MCOSQ_STATE_HPP
#define MCOSQ_STATE_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "mcosq/feed.hpp"

namespace mcosq {

/// Frame ids in ascending order, each carrying a key-frame mark. Marks are
/// the witnesses that keep a state alive: a state whose marks have all
/// expired is no longer a maximum co-occurrence set of its frames.
class MarkedFrameSet {
public:
    struct Entry {
        Fid fid;
        bool marked;
        bool operator==(const Entry& o) const { return fid == o.fid && marked == o.marked; }
    };

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    const std::vector<Entry>& entries() const { return entries_; }

    /// Appends fid (must be >= the last entry); marking an existing last
    /// entry upgrades it, re-appending it unmarked is a no-op.
    void append(Fid fid, bool marked);

    /// Sets the mark on an already-present fid; no-op when absent.
    void mark(Fid fid);

    bool contains(Fid fid) const;
    bool has_mark() const;
    std::size_t marked_count() const;
    std::vector<Fid> fids() const;
    std::vector<Fid> marked_fids() const;

    /// Union of frames; a frame is marked in the result iff marked in either.
    void merge_from(const MarkedFrameSet& other);

    /// Drops every entry with fid < lo (window expiry is oldest-first).
    void expire_below(Fid lo);

    /// Drops a single fid if present.
    void erase(Fid fid);

    bool operator==(const MarkedFrameSet& o) const { return entries_ == o.entries_; }

private:
    std::vector<Entry> entries_;
};

/// The unit of maintained intermediate results: an object set and the
/// marked frames it co-occurs in within the window.
struct State {
    IdSet ids;
    MarkedFrameSet frames;
    std::vector<Fid> creation_fids; // in-window frames whose object set equals ids
    bool terminated = false;

    bool principal() const { return !creation_fids.empty(); }
};

/// A valid, satisfied state snapshotted for query evaluation.
struct ResultState {
    IdSet ids;
    std::vector<Fid> frames;

    bool operator==(const ResultState& o) const { return ids == o.ids && frames == o.frames; }
    bool operator<(const ResultState& o) const {
        if (ids != o.ids) return ids < o.ids;
        return frames < o.frames;
    }
};

using ResultStateSet = std::vector<ResultState>; // kept sorted for comparison

void canonicalize(ResultStateSet& results);

/// Creation-time hook: return true when the new object set can never satisfy
/// any query (the state is then terminated / dropped).
using PruneHook = std::function<bool(const IdSet&)>;

} // namespace mcosq

#endif
