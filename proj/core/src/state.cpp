#include "mcosq/state.hpp"

#include <algorithm>

namespace mcosq {

void MarkedFrameSet::append(Fid fid, bool marked) {
    if (!entries_.empty() && entries_.back().fid == fid) {
        entries_.back().marked = entries_.back().marked || marked;
        return;
    }
    entries_.push_back({fid, marked});
}

void MarkedFrameSet::mark(Fid fid) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), fid,
                               [](const Entry& e, Fid f) { return e.fid < f; });
    if (it != entries_.end() && it->fid == fid) it->marked = true;
}

bool MarkedFrameSet::contains(Fid fid) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), fid,
                               [](const Entry& e, Fid f) { return e.fid < f; });
    return it != entries_.end() && it->fid == fid;
}

bool MarkedFrameSet::has_mark() const {
    for (const auto& e : entries_)
        if (e.marked) return true;
    return false;
}

std::size_t MarkedFrameSet::marked_count() const {
    std::size_t n = 0;
    for (const auto& e : entries_) n += e.marked ? 1 : 0;
    return n;
}

std::vector<Fid> MarkedFrameSet::fids() const {
    std::vector<Fid> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.fid);
    return out;
}

std::vector<Fid> MarkedFrameSet::marked_fids() const {
    std::vector<Fid> out;
    for (const auto& e : entries_)
        if (e.marked) out.push_back(e.fid);
    return out;
}

void MarkedFrameSet::merge_from(const MarkedFrameSet& other) {
    std::vector<Entry> merged;
    merged.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
        if (b == other.entries_.end() || (a != entries_.end() && a->fid < b->fid)) {
            merged.push_back(*a++);
        } else if (a == entries_.end() || b->fid < a->fid) {
            merged.push_back(*b++);
        } else {
            merged.push_back({a->fid, a->marked || b->marked});
            ++a;
            ++b;
        }
    }
    entries_ = std::move(merged);
}

void MarkedFrameSet::expire_below(Fid lo) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), lo,
                               [](const Entry& e, Fid f) { return e.fid < f; });
    entries_.erase(entries_.begin(), it);
}

void MarkedFrameSet::erase(Fid fid) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), fid,
                               [](const Entry& e, Fid f) { return e.fid < f; });
    if (it != entries_.end() && it->fid == fid) entries_.erase(it);
}

void canonicalize(ResultStateSet& results) {
    std::sort(results.begin(), results.end());
    results.erase(std::unique(results.begin(), results.end()), results.end());
}

} // namespace mcosq
