#include "mcosq/feed.hpp"

#include <algorithm>
#include <stdexcept>

namespace mcosq {

std::uint32_t Interner::intern(std::string_view token) {
    auto it = index_.find(std::string(token));
    if (it != index_.end()) return it->second;
    auto value = static_cast<std::uint32_t>(tokens_.size());
    tokens_.emplace_back(token);
    index_.emplace(tokens_.back(), value);
    return value;
}

const std::string& Interner::token_of(std::uint32_t value) const {
    if (value >= tokens_.size()) throw std::out_of_range("Interner: value out of range");
    return tokens_[value];
}

bool Interner::contains(std::string_view token) const {
    return index_.find(std::string(token)) != index_.end();
}

std::uint32_t Interner::lookup(std::string_view token) const {
    auto it = index_.find(std::string(token));
    if (it == index_.end()) throw std::out_of_range("Interner: unknown token");
    return it->second;
}

IdSet::IdSet(std::vector<ObjId> members) : members_(std::move(members)) {
    std::sort(members_.begin(), members_.end());
    members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool IdSet::contains(ObjId id) const {
    return std::binary_search(members_.begin(), members_.end(), id);
}

bool IdSet::subset_of(const IdSet& other) const {
    return std::includes(other.members_.begin(), other.members_.end(),
                         members_.begin(), members_.end());
}

IdSet IdSet::intersect(const IdSet& a, const IdSet& b) {
    IdSet out;
    out.members_.reserve(std::min(a.size(), b.size()));
    std::set_intersection(a.members_.begin(), a.members_.end(),
                          b.members_.begin(), b.members_.end(),
                          std::back_inserter(out.members_));
    return out;
}

std::size_t IdSetHash::operator()(const IdSet& s) const {
    // FNV-1a over member words
    std::uint64_t h = 1469598103934665603ULL;
    for (ObjId id : s.members()) {
        h ^= id;
        h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
}

WindowView window_of(Fid anchor, Fid size) {
    if (size == 0) throw std::invalid_argument("window_of: window size must be >= 1");
    WindowView w;
    w.anchor = anchor;
    w.size = size;
    w.lo = anchor + 1 >= size ? anchor + 1 - size : 0;
    return w;
}

VideoRelation VideoRelation::from_records(const std::vector<ObjectRecord>& records,
                                          Fid min_frames) {
    VideoRelation rel;
    Fid n_frames = min_frames;
    for (const auto& r : records) n_frames = std::max(n_frames, r.fid + 1);

    std::vector<std::vector<ObjId>> frames(n_frames);
    for (const auto& r : records) {
        ObjId id = rel.ids_.intern(r.id);
        LabelId label = rel.labels_.intern(r.label);
        if (id == rel.class_of_.size()) {
            rel.class_of_.push_back(label);
        } else if (rel.class_of_[id] != label) {
            throw std::invalid_argument("VideoRelation: object '" + r.id +
                                        "' appears with two distinct classes");
        }
        frames[r.fid].push_back(id);
    }
    rel.frames_.reserve(frames.size());
    for (std::size_t f = 0; f < frames.size(); ++f) {
        auto& ids = frames[f];
        std::sort(ids.begin(), ids.end());
        if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
            throw std::invalid_argument("VideoRelation: duplicate (fid, id) at frame " +
                                        std::to_string(f));
        }
        rel.frames_.emplace_back(IdSet(std::move(ids)));
    }
    return rel;
}

const IdSet& VideoRelation::object_set_of(Fid fid) const {
    if (fid >= frames_.size()) throw std::out_of_range("object_set_of: fid out of range");
    return frames_[static_cast<std::size_t>(fid)];
}

bool VideoRelation::cooc(const IdSet& ids, Fid fid) const {
    if (ids.empty()) throw std::invalid_argument("cooc: id set must be non-empty");
    return ids.subset_of(object_set_of(fid));
}

} // namespace mcosq
