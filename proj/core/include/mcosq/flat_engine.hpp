#ifndef MCOSQ_FLAT_ENGINE_HPP
#define MCOSQ_FLAT_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcosq/feed.hpp"
#include "mcosq/state.hpp"

namespace mcosq {

/// Window-state maintenance over a flat state set. Two modes:
///  - Naive: plain frame sets, states die when their frame set empties,
///    non-maximal object sets are filtered out at collection time.
///  - Mfs: marked frame sets; a state dies as soon as its last marked
///    frame expires, so no maximality filter is needed.
class FlatEngine {
public:
    enum class Mode { Naive, Mfs };

    FlatEngine(Mode mode, Fid window, PruneHook prune = nullptr);

    /// expire + step for the next frame. Frames must arrive in order 0,1,2,...
    void process_frame(Fid i, const IdSet& frame_ids);

    /// Intersects every existing state with the arriving frame's object set,
    /// appending the frame id to matching states and creating states for new
    /// intersections. Throws std::logic_error on a non-monotone frame id.
    void step(Fid i, const IdSet& frame_ids);

    /// Removes expired_fid from every frame set and drops dead states.
    void expire(Fid expired_fid);

    /// Valid states spanning at least `duration` frames.
    ResultStateSet collect_results(Fid duration) const;

    const std::vector<State>& states() const { return states_; }
    const State* find(const IdSet& ids) const;

    std::size_t live_states() const { return states_.size(); }
    std::uint64_t intersections() const { return intersections_; }
    Fid window() const { return window_; }
    Mode mode() const { return mode_; }

private:
    std::size_t resolve_target(const IdSet& inter, std::size_t generator,
                               Fid i, std::vector<char>& fresh);

    Mode mode_;
    Fid window_;
    PruneHook prune_;
    Fid next_frame_ = 0;
    std::uint64_t intersections_ = 0;

    std::vector<State> states_; // creation order; index is stable within a frame
    std::unordered_map<IdSet, std::size_t, IdSetHash> by_ids_;
};

} // namespace mcosq

#endif
