#ifndef MCOSQ_ORACLE_HPP
#define MCOSQ_ORACLE_HPP

#include <utility>
#include <vector>

#include "mcosq/feed.hpp"
#include "mcosq/state.hpp"

namespace mcosq {

/// Brute-force reference: every maximum co-occurrence object set of the
/// given frames, with its full frame set, kept when it spans at least
/// `duration` frames. Candidates are the closure of the frame object sets
/// under pairwise intersection, so this is exponential in the worst case
/// and refuses windows longer than 24 frames.
ResultStateSet oracle_mcos(const std::vector<std::pair<Fid, IdSet>>& frames, Fid duration);

/// The oracle applied to the window of `anchor` over `relation`.
ResultStateSet oracle_window(const VideoRelation& relation, Fid anchor, Fid window,
                             Fid duration);

} // namespace mcosq

#endif
