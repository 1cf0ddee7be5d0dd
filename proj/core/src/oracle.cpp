#include "mcosq/oracle.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace mcosq {

ResultStateSet oracle_mcos(const std::vector<std::pair<Fid, IdSet>>& frames, Fid duration) {
    if (frames.size() > 24)
        throw std::invalid_argument("oracle_mcos: refusing a window of " +
                                    std::to_string(frames.size()) + " frames (max 24)");

    // intersection closure of the frames' object sets
    std::set<IdSet> candidates;
    for (const auto& [fid, ids] : frames)
        if (!ids.empty()) candidates.insert(ids);
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<IdSet> snapshot(candidates.begin(), candidates.end());
        for (std::size_t a = 0; a < snapshot.size(); ++a) {
            for (std::size_t b = a + 1; b < snapshot.size(); ++b) {
                IdSet inter = IdSet::intersect(snapshot[a], snapshot[b]);
                if (inter.empty()) continue;
                if (candidates.insert(inter).second) grew = true;
            }
        }
    }

    ResultStateSet out;
    for (const IdSet& cand : candidates) {
        std::vector<Fid> cooc_frames;
        bool first = true;
        IdSet meet;
        for (const auto& [fid, ids] : frames) {
            if (!cand.subset_of(ids)) continue;
            cooc_frames.push_back(fid);
            meet = first ? ids : IdSet::intersect(meet, ids);
            first = false;
        }
        if (cooc_frames.size() < duration) continue;
        if (meet != cand) continue; // a strict superset co-occurs on every frame
        out.push_back({cand, std::move(cooc_frames)});
    }
    canonicalize(out);
    return out;
}

ResultStateSet oracle_window(const VideoRelation& relation, Fid anchor, Fid window,
                             Fid duration) {
    WindowView view = window_of(anchor, window);
    std::vector<std::pair<Fid, IdSet>> frames;
    for (Fid f = view.lo; f <= view.anchor && f < relation.frame_count(); ++f)
        frames.emplace_back(f, relation.object_set_of(f));
    return oracle_mcos(frames, duration);
}

} // namespace mcosq
