#include "mcosq/ssg.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace mcosq {

SsgEngine::SsgEngine(Fid window, PruneHook prune)
    : window_(window), prune_(std::move(prune)) {
    if (window == 0) throw std::invalid_argument("SsgEngine: window must be >= 1");
}

SsgEngine::~SsgEngine() = default;

GraphNode* SsgEngine::make_node(const IdSet& ids) {
    auto node = std::make_unique<GraphNode>();
    node->ids = ids;
    node->seq = seq_counter_++;
    GraphNode* raw = node.get();
    nodes_[ids] = std::move(node);
    return raw;
}

GraphNode* SsgEngine::lookup(const IdSet& ids) {
    auto it = nodes_.find(ids);
    return it == nodes_.end() ? nullptr : it->second.get();
}

const GraphNode* SsgEngine::find(const IdSet& ids) const {
    auto it = nodes_.find(ids);
    return it == nodes_.end() ? nullptr : it->second.get();
}

void SsgEngine::drop_from(std::vector<GraphNode*>& list, GraphNode* node) {
    list.erase(std::remove(list.begin(), list.end(), node), list.end());
}

void SsgEngine::remove_edge(GraphNode* parent, GraphNode* child) {
    bool removed = false;
    for (auto& slot : parent->children) {
        if (slot == child) {
            slot = nullptr;
            removed = true;
            break;
        }
    }
    for (auto& slot : child->parents) {
        if (slot == parent) {
            slot = nullptr;
            break;
        }
    }
    if (removed) --edges_;
}

namespace {
bool strict_subset(const IdSet& a, const IdSet& b) {
    return a.size() < b.size() && a.subset_of(b);
}
bool has_live_parent(const GraphNode* n) {
    for (const GraphNode* p : n->parents)
        if (p && !p->dead) return true;
    return false;
}
} // namespace

// Adds (parent -> child) while keeping the sibling property: the edge is
// skipped when a sibling (or an existing tighter parent) already contains
// the child, and siblings the child engulfs are re-parented under it.
void SsgEngine::add_edge_guarded(GraphNode* parent, GraphNode* child) {
    if (parent == child || parent->dead || child->dead) return;
    assert(strict_subset(child->ids, parent->ids));

    for (GraphNode* q : child->parents) {
        if (!q || q->dead) continue;
        if (q == parent) return; // already linked
        if (strict_subset(q->ids, parent->ids)) return; // a tighter parent exists
    }
    for (GraphNode* q : std::vector<GraphNode*>(child->parents)) {
        if (!q || q->dead) continue;
        if (strict_subset(parent->ids, q->ids)) remove_edge(q, child);
    }
    for (GraphNode* sib : parent->children) {
        if (!sib || sib->dead || sib == child) continue;
        if (child->ids.subset_of(sib->ids)) return; // child belongs deeper
    }

    parent->children.push_back(child);
    child->parents.push_back(parent);
    ++edges_;
    if (child->is_orphan) {
        child->is_orphan = false;
        drop_from(orphans_, child);
    }

    // siblings contained in the new child move under it
    const std::size_t limit = parent->children.size() - 1;
    for (std::size_t k = 0; k < limit; ++k) {
        GraphNode* sib = parent->children[k];
        if (!sib || sib->dead || sib == child) continue;
        if (strict_subset(sib->ids, child->ids)) {
            remove_edge(parent, sib);
            add_edge_guarded(child, sib);
        }
    }
}

bool SsgEngine::prune_node(GraphNode* s, Fid lo) {
    auto compact = [](std::vector<GraphNode*>& v) {
        v.erase(std::remove_if(v.begin(), v.end(),
                               [](GraphNode* n) { return !n || n->dead; }),
                v.end());
    };
    compact(s->children);
    compact(s->parents);
    s->frames.expire_below(lo);
    while (!s->creation_fids.empty() && s->creation_fids.front() < lo)
        s->creation_fids.erase(s->creation_fids.begin());
    if (!s->frames.has_mark()) {
        kill(s);
        return false;
    }
    return true;
}

void SsgEngine::kill(GraphNode* s) {
    s->dead = true;
    std::vector<GraphNode*> parents;
    for (GraphNode* p : s->parents)
        if (p && !p->dead) parents.push_back(p);
    std::vector<GraphNode*> children;
    for (GraphNode* c : s->children)
        if (c && !c->dead) children.push_back(c);

    for (GraphNode* p : parents) remove_edge(p, s);
    for (GraphNode* c : children) remove_edge(s, c);
    for (GraphNode* c : children) {
        for (GraphNode* p : parents) add_edge_guarded(p, c);
        if (!has_live_parent(c) && !c->is_principal && !c->is_orphan) {
            c->is_orphan = true;
            orphans_.push_back(c);
        }
    }

    if (s->is_principal) {
        s->is_principal = false;
        drop_from(principals_, s);
    }
    if (s->is_orphan) {
        s->is_orphan = false;
        drop_from(orphans_, s);
    }
    auto it = nodes_.find(s->ids);
    if (it != nodes_.end() && it->second.get() == s) {
        graveyard_.push_back(std::move(it->second));
        nodes_.erase(it);
    }
}

void SsgEngine::record_candidate(const IdSet& ids, std::uint32_t rank) {
    if (rank == kNoRank) return; // orphan-rooted traversals contribute none
    candidates_.push_back({ids, rank});
}

// Finds or creates the state for `inter`, generated from `generator`, and
// restores the sibling property around the generator. When a live child of
// the generator already contains `inter`, that child's subtree owns the
// state and nothing is linked here.
void SsgEngine::create_state(const IdSet& inter, GraphNode* generator, GraphNode* ns,
                             std::uint32_t rank, Fid i, Fid lo) {
    assert(!inter.empty());
    assert(inter != generator->ids && inter != ns->ids);

    for (GraphNode* ch : generator->children) {
        if (!ch || ch->dead) continue;
        if (inter.subset_of(ch->ids)) {
            record_candidate(inter, rank);
            return;
        }
    }

    GraphNode* node = lookup(inter);
    if (node && !node->dead) {
        // retrieved after losing adjacency (or created by another branch):
        // refresh it and link it back under this generator
        bool fresh = node->visit_flag != i;
        if (fresh) {
            node->visit_flag = i;
            if (!prune_node(node, lo)) {
                node = nullptr;
            } else {
                touched_.push_back(node);
            }
        }
        if (node) {
            node->frames.merge_from(generator->frames);
            node->frames.append(i, false);
            node->last_inter = node->ids;
            add_edge_guarded(generator, node);
            record_candidate(inter, rank);
            if (fresh) visit_children(i, lo, node, ns, node->ids, rank);
            return;
        }
    }

    node = make_node(inter);
    node->frames = generator->frames; // marks witness the subset as well
    node->frames.append(i, false);
    if (prune_ && prune_(inter)) node->terminated = true;
    add_edge_guarded(generator, node);
    touched_.push_back(node);
    record_candidate(inter, rank);
}

bool SsgEngine::visit_children(Fid i, Fid lo, GraphNode* s, GraphNode* ns,
                               const IdSet& inter, std::uint32_t rank) {
    bool any = false;
    // the list may grow while we walk it (splices, created states)
    for (std::size_t k = 0; k < s->children.size(); ++k) {
        GraphNode* ch = s->children[k];
        if (!ch || ch->dead) continue;
        any = st_visit(i, lo, ch, s, ns, &inter, rank) || any;
    }
    return any;
}

bool SsgEngine::st_visit(Fid i, Fid lo, GraphNode* s, GraphNode* ps, GraphNode* ns,
                         const IdSet* p_inter, std::uint32_t rank) {
    if (s->dead) return false;
    if (s->terminated) { // failed queries once, fails them forever: skip subtree
        s->visit_flag = i;
        return false;
    }
    if (s->visit_flag == i) return false; // visit each state only once
    s->visit_flag = i;
    if (!prune_node(s, lo)) return false;
    touched_.push_back(s);

    IdSet inter = IdSet::intersect(s->ids, ns->ids);
    ++intersections_;
    s->last_inter = inter;

    const bool have_p = p_inter && !p_inter->empty();
    if (inter.empty()) {
        // nothing below s can intersect the frame either; materialize the
        // parent's intersection if no sibling will
        if (have_p && p_inter->size() != ps->ids.size() && p_inter->size() != ns->ids.size())
            create_state(*p_inter, ps, ns, rank, i, lo);
        return true;
    }

    if (have_p && p_inter->size() > inter.size() && p_inter->size() != ps->ids.size() &&
        p_inter->size() != ns->ids.size())
        create_state(*p_inter, ps, ns, rank, i, lo);

    if (inter.size() == s->ids.size()) { // s is contained in the frame
        if (have_p && p_inter->size() == inter.size() && ps) s->frames.merge_from(ps->frames);
        s->frames.append(i, false);
        visit_children(i, lo, s, ns, inter, rank);
        return true;
    }
    if (inter.size() == ns->ids.size()) { // the frame's set is contained in s
        ns->frames.merge_from(s->frames);
        add_edge_guarded(s, ns);
        visit_children(i, lo, s, ns, inter, rank);
        return true;
    }

    bool has_next = visit_children(i, lo, s, ns, inter, rank);
    if (!has_next) create_state(inter, s, ns, rank, i, lo);
    return true;
}

ResultStateSet SsgEngine::process_frame(Fid i, const IdSet& frame_ids, Fid duration) {
    if (i != next_frame_)
        throw std::logic_error("SsgEngine::process_frame: expected frame " +
                               std::to_string(next_frame_) + ", got " + std::to_string(i));
    next_frame_ = i + 1;
    const Fid lo = i + 1 >= window_ ? i + 1 - window_ : 0;
    last_lo_ = lo;

    candidates_.clear();
    deferred_marks_.clear();
    touched_.clear();

    // principals whose creating frames all expired cease being principals
    for (GraphNode* p : std::vector<GraphNode*>(principals_)) {
        while (!p->creation_fids.empty() && p->creation_fids.front() < lo)
            p->creation_fids.erase(p->creation_fids.begin());
        if (p->creation_fids.empty()) {
            p->is_principal = false;
            drop_from(principals_, p);
        }
    }

    GraphNode* ns = nullptr;
    if (!frame_ids.empty()) {
        ns = lookup(frame_ids);
        if (ns && !prune_node(ns, lo)) ns = nullptr; // stale and markless: rebuild
        if (!ns) {
            ns = make_node(frame_ids);
            if (prune_ && prune_(frame_ids)) ns->terminated = true;
        }
        ns->frames.append(i, true); // the creating frame is always a key frame
        ns->creation_fids.push_back(i);
        touched_.push_back(ns);
        if (ns->is_orphan) {
            ns->is_orphan = false;
            drop_from(orphans_, ns);
        }

        const std::vector<GraphNode*> roots(principals_);
        for (std::size_t r = 0; r < roots.size(); ++r) {
            GraphNode* root = roots[r];
            if (root == ns || root->dead) continue;
            st_visit(i, lo, root, nullptr, ns, nullptr, static_cast<std::uint32_t>(r));
            if (root->dead || root->terminated || root->visit_flag != i) continue;
            if (!root->last_inter.empty()) {
                record_candidate(root->last_inter, static_cast<std::uint32_t>(r));
                // the frames that created this principal pin the state equal
                // to its intersection with the arriving frame
                deferred_marks_.emplace_back(root->creation_fids, root->last_inter);
            }
        }
        for (GraphNode* o : std::vector<GraphNode*>(orphans_)) {
            if (o->dead || o == ns) continue;
            st_visit(i, lo, o, nullptr, ns, nullptr, kNoRank);
        }

        for (const auto& [fids, target_ids] : deferred_marks_) {
            GraphNode* target = lookup(target_ids);
            if (!target || target->dead) continue;
            for (Fid k : fids) target->frames.mark(k);
        }

        // connect the new principal: largest candidates first, skipping any
        // already reachable from an accepted one
        std::stable_sort(candidates_.begin(), candidates_.end(),
                         [](const CandidateRec& a, const CandidateRec& b) {
                             if (a.ids.size() != b.ids.size()) return a.ids.size() > b.ids.size();
                             if (a.rank != b.rank) return a.rank < b.rank;
                             return a.ids < b.ids;
                         });
        std::vector<GraphNode*> reach;
        std::unordered_map<const GraphNode*, char> in_reach;
        for (const auto& cand : candidates_) {
            GraphNode* node = lookup(cand.ids);
            if (!node || node->dead || node->terminated || node == ns) continue;
            if (in_reach.count(node)) continue;
            add_edge_guarded(ns, node);
            reach.clear();
            reach_dfs(node, reach);
            for (GraphNode* n : reach) in_reach.emplace(n, 1);
        }

        if (!ns->is_principal) {
            ns->is_principal = true;
            principals_.push_back(ns);
        }
    }

    // result recurrence: states touched on the graph this frame, plus the
    // previous results re-checked after expiry
    ResultStateSet out;
    std::vector<GraphNode*> next_prev;
    auto consider = [&](GraphNode* s) {
        if (!s || s->dead || s->terminated) return;
        if (s->result_stamp == i) return;
        if (!s->frames.has_mark() || s->frames.size() < duration) return;
        s->result_stamp = i;
        next_prev.push_back(s);
        out.push_back({s->ids, s->frames.fids()});
    };
    for (GraphNode* s : touched_) consider(s);
    for (GraphNode* s : std::vector<GraphNode*>(prev_results_)) {
        if (!s || s->dead) continue;
        if (s->visit_flag != i) { // untouched this frame: expire lazily now
            s->visit_flag = i;
            if (!prune_node(s, lo)) continue;
        }
        consider(s);
    }
    prev_results_ = std::move(next_prev);
    graveyard_.clear();
    canonicalize(out);
    return out;
}

void SsgEngine::reach_dfs(GraphNode* from, std::vector<GraphNode*>& out) const {
    std::vector<GraphNode*> stack{from};
    std::unordered_map<const GraphNode*, char> seen;
    while (!stack.empty()) {
        GraphNode* n = stack.back();
        stack.pop_back();
        if (!n || n->dead || seen.count(n)) continue;
        seen.emplace(n, 1);
        out.push_back(n);
        for (GraphNode* c : n->children)
            if (c && !c->dead) stack.push_back(c);
    }
}

SsgEngine::Counters SsgEngine::counters() {
    std::vector<GraphNode*> all;
    all.reserve(nodes_.size());
    for (auto& [ids, node] : nodes_) all.push_back(node.get());
    for (GraphNode* n : all) {
        if (n->dead) continue;
        prune_node(n, last_lo_);
    }
    graveyard_.clear();
    Counters c;
    c.n_states = nodes_.size();
    c.n_edges = edges_;
    c.principals = principals_.size();
    return c;
}

std::vector<const GraphNode*> SsgEngine::nodes() const {
    std::vector<const GraphNode*> out;
    out.reserve(nodes_.size());
    for (const auto& [ids, node] : nodes_)
        if (!node->dead) out.push_back(node.get());
    std::sort(out.begin(), out.end(),
              [](const GraphNode* a, const GraphNode* b) { return a->seq < b->seq; });
    return out;
}

std::vector<const GraphNode*> SsgEngine::principals() const {
    return {principals_.begin(), principals_.end()};
}

std::vector<std::pair<IdSet, IdSet>> SsgEngine::edge_list() const {
    std::vector<std::pair<IdSet, IdSet>> out;
    for (const GraphNode* n : nodes())
        for (const GraphNode* c : n->children)
            if (c && !c->dead) out.emplace_back(n->ids, c->ids);
    std::sort(out.begin(), out.end());
    return out;
}

std::string SsgEngine::debug_dump(const std::function<std::string(ObjId)>* namer) const {
    auto show_ids = [&](const IdSet& ids) {
        std::string s = "{";
        bool first = true;
        for (ObjId id : ids.members()) {
            if (!first) s += ",";
            first = false;
            s += namer ? (*namer)(id) : std::to_string(id);
        }
        return s + "}";
    };
    std::ostringstream os;
    for (const GraphNode* n : nodes()) {
        os << "node " << show_ids(n->ids) << " frames {";
        bool first = true;
        for (const auto& e : n->frames.entries()) {
            if (!first) os << ",";
            first = false;
            if (e.marked) os << "*";
            os << e.fid;
        }
        os << "} creation {";
        first = true;
        for (Fid f : n->creation_fids) {
            if (!first) os << ",";
            first = false;
            os << f;
        }
        os << "}\n";
    }
    for (const GraphNode* n : nodes())
        for (const GraphNode* c : n->children)
            if (c && !c->dead) os << "edge " << show_ids(n->ids) << " -> " << show_ids(c->ids) << "\n";
    return os.str();
}

} // namespace mcosq
