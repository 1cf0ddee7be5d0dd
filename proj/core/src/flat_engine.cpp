#include "mcosq/flat_engine.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcosq {

namespace {
constexpr std::size_t kNone = static_cast<std::size_t>(-1);
constexpr std::size_t kDropped = static_cast<std::size_t>(-2);
} // namespace

FlatEngine::FlatEngine(Mode mode, Fid window, PruneHook prune)
    : mode_(mode), window_(window), prune_(std::move(prune)) {
    if (window == 0) throw std::invalid_argument("FlatEngine: window must be >= 1");
}

void FlatEngine::process_frame(Fid i, const IdSet& frame_ids) {
    if (i >= window_) expire(i - window_);
    step(i, frame_ids);
}

const State* FlatEngine::find(const IdSet& ids) const {
    auto it = by_ids_.find(ids);
    return it == by_ids_.end() ? nullptr : &states_[it->second];
}

// Looks up the state for `inter`, creating it from `generator` if absent.
// Generators reaching a state created earlier in the same step union their
// frames in, so the new state's frame set is complete no matter which
// generator got there first. Pre-existing states already carry every frame.
std::size_t FlatEngine::resolve_target(const IdSet& inter, std::size_t generator,
                                       Fid, std::vector<char>& fresh) {
    auto it = by_ids_.find(inter);
    if (it != by_ids_.end()) {
        std::size_t idx = it->second;
        if (fresh[idx]) states_[idx].frames.merge_from(states_[generator].frames);
        return idx;
    }
    if (prune_ && prune_(inter)) return kDropped;
    State ns;
    ns.ids = inter;
    if (mode_ == Mode::Mfs) {
        ns.frames = states_[generator].frames; // marks copied: they witness the subset too
    } else {
        for (const auto& e : states_[generator].frames.entries()) ns.frames.append(e.fid, false);
    }
    std::size_t idx = states_.size();
    states_.push_back(std::move(ns));
    by_ids_.emplace(inter, idx);
    fresh.push_back(1);
    return idx;
}

void FlatEngine::step(Fid i, const IdSet& frame_ids) {
    if (i != next_frame_)
        throw std::logic_error("FlatEngine::step: expected frame " +
                               std::to_string(next_frame_) + ", got " + std::to_string(i));
    next_frame_ = i + 1;
    if (frame_ids.empty()) return; // nothing to intersect, nothing to create

    const std::size_t snapshot = states_.size();
    std::vector<std::size_t> target_of(snapshot, kNone);
    std::vector<char> fresh(snapshot, 0); // grows as states are created this step

    for (std::size_t k = 0; k < snapshot; ++k) {
        IdSet inter = IdSet::intersect(states_[k].ids, frame_ids);
        ++intersections_;
        if (inter.empty()) continue;
        std::size_t target = resolve_target(inter, k, i, fresh);
        target_of[k] = target;
        if (target != kDropped) states_[target].frames.append(i, false);
    }

    // the arriving frame's own state: find or create, and mark the frame id
    std::size_t ns_idx;
    auto it = by_ids_.find(frame_ids);
    if (it != by_ids_.end()) {
        ns_idx = it->second;
    } else {
        if (prune_ && prune_(frame_ids)) return;
        State ns;
        ns.ids = frame_ids;
        ns_idx = states_.size();
        states_.push_back(std::move(ns));
        by_ids_.emplace(frame_ids, ns_idx);
    }
    states_[ns_idx].frames.append(i, mode_ == Mode::Mfs);
    if (mode_ == Mode::Mfs) {
        states_[ns_idx].creation_fids.push_back(i);

        // pairwise witness marks: a principal created by frame k pins the
        // state equal to its intersection with the arriving frame, since k
        // expires before i does
        for (std::size_t k = 0; k < snapshot; ++k) {
            std::size_t target = target_of[k];
            if (target == kNone || target == kDropped) continue;
            if (!states_[k].principal()) continue;
            for (Fid created : states_[k].creation_fids)
                states_[target].frames.mark(created);
        }
    }
}

void FlatEngine::expire(Fid expired_fid) {
    std::vector<State> kept;
    kept.reserve(states_.size());
    bool dropped = false;
    for (auto& s : states_) {
        s.frames.erase(expired_fid);
        while (!s.creation_fids.empty() && s.creation_fids.front() <= expired_fid)
            s.creation_fids.erase(s.creation_fids.begin());
        bool dead = mode_ == Mode::Naive ? s.frames.empty() : !s.frames.has_mark();
        if (dead)
            dropped = true;
        else
            kept.push_back(std::move(s));
    }
    states_ = std::move(kept);
    if (dropped) {
        by_ids_.clear();
        for (std::size_t k = 0; k < states_.size(); ++k) by_ids_.emplace(states_[k].ids, k);
    }
}

ResultStateSet FlatEngine::collect_results(Fid duration) const {
    std::vector<const State*> satisfied;
    for (const auto& s : states_) {
        if (s.frames.size() < duration) continue;
        if (mode_ == Mode::Mfs && !s.frames.has_mark()) continue;
        satisfied.push_back(&s);
    }
    ResultStateSet out;
    for (const State* s : satisfied) {
        bool suppressed = false;
        if (mode_ == Mode::Naive) {
            // two satisfied states sharing a frame set: only the largest
            // object set is a maximum co-occurrence set
            auto frames = s->frames.fids();
            for (const State* t : satisfied) {
                if (t == s) continue;
                if (s->ids.size() < t->ids.size() && s->ids.subset_of(t->ids) &&
                    frames == t->frames.fids()) {
                    suppressed = true;
                    break;
                }
            }
        }
        if (!suppressed) out.push_back({s->ids, s->frames.fids()});
    }
    canonicalize(out);
    return out;
}

} // namespace mcosq
