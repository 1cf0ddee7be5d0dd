#ifndef MCOSQ_SSG_HPP
#define MCOSQ_SSG_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "mcosq/feed.hpp"
#include "mcosq/state.hpp"

namespace mcosq {

/// Node of the strict state graph. Every edge (parent, child) has
/// child.ids strictly contained in parent.ids, and no two children of a
/// node contain one another.
struct GraphNode {
    IdSet ids;
    MarkedFrameSet frames;
    std::vector<Fid> creation_fids; // in-window frames whose object set == ids
    std::uint32_t seq = 0;          // creation order, for deterministic dumps
    Fid visit_flag = kNoVisit;
    Fid result_stamp = kNoVisit;
    IdSet last_inter;               // intersection with the current frame's set
    bool terminated = false;        // failed all >=-only queries; subtree skipped
    bool dead = false;
    bool is_principal = false;
    bool is_orphan = false;

    std::vector<GraphNode*> children; // entries may be nulled mid-frame
    std::vector<GraphNode*> parents;

    static constexpr Fid kNoVisit = std::numeric_limits<Fid>::max();

    bool principal() const { return !creation_fids.empty(); }
};

/// Incremental window-state maintenance over a strict state graph.
/// Traversal starts from principal states in arrival order; states whose
/// intersection with the arriving frame is empty cut off their whole
/// subtree. Expiry is lazy: a state drops expired frames when first
/// touched, and dies once its last marked frame expires.
class SsgEngine {
public:
    SsgEngine(Fid window, PruneHook prune = nullptr);
    ~SsgEngine();

    /// Slides the window to frame i, maintains the graph, and returns the
    /// valid states spanning at least `duration` frames. Frames must arrive
    /// in order 0,1,2,...
    ResultStateSet process_frame(Fid i, const IdSet& frame_ids, Fid duration);

    struct Counters {
        std::size_t n_states = 0;
        std::size_t n_edges = 0;
        std::size_t principals = 0; // the x of the state/edge bounds
    };

    /// Live node / edge / unique-principal counts. Runs a full prune sweep
    /// first so values reflect only states the window can still validate.
    /// Call between frames, not during processing.
    Counters counters();

    std::size_t live_states() const { return nodes_.size(); }
    std::size_t live_edges() const { return edges_; }
    std::size_t principal_count() const { return principals_.size(); }
    std::uint64_t intersections() const { return intersections_; }
    Fid window() const { return window_; }

    /// One line per node ("node {ids} frames {...} creation {...}") and per
    /// edge ("edge {parent} -> {child}"), in creation order. `namer` maps
    /// object ids to display tokens; nullptr prints raw numbers.
    std::string debug_dump(const std::function<std::string(ObjId)>* namer = nullptr) const;

    /// Edge list as (parent ids, child ids) pairs, for structural checks.
    std::vector<std::pair<IdSet, IdSet>> edge_list() const;

    const GraphNode* find(const IdSet& ids) const;
    std::vector<const GraphNode*> nodes() const; // live nodes in creation order
    std::vector<const GraphNode*> principals() const;

private:
    struct CandidateRec {
        IdSet ids;
        std::uint32_t rank; // arrival rank of the generating principal
    };
    static constexpr std::uint32_t kNoRank = std::numeric_limits<std::uint32_t>::max();

    GraphNode* make_node(const IdSet& ids);
    GraphNode* lookup(const IdSet& ids);
    bool prune_node(GraphNode* s, Fid lo);
    void kill(GraphNode* s);
    void remove_edge(GraphNode* parent, GraphNode* child);
    void add_edge_guarded(GraphNode* parent, GraphNode* child);
    bool st_visit(Fid i, Fid lo, GraphNode* s, GraphNode* ps, GraphNode* ns,
                  const IdSet* p_inter, std::uint32_t rank);
    bool visit_children(Fid i, Fid lo, GraphNode* s, GraphNode* ns, const IdSet& inter,
                        std::uint32_t rank);
    void create_state(const IdSet& inter, GraphNode* generator, GraphNode* ns,
                      std::uint32_t rank, Fid i, Fid lo);
    void record_candidate(const IdSet& ids, std::uint32_t rank);
    void reach_dfs(GraphNode* from, std::vector<GraphNode*>& out) const;
    void drop_from(std::vector<GraphNode*>& list, GraphNode* node);

    Fid window_;
    PruneHook prune_;
    Fid next_frame_ = 0;
    Fid last_lo_ = 0;
    std::uint64_t intersections_ = 0;
    std::size_t edges_ = 0;
    std::uint32_t seq_counter_ = 0;

    std::unordered_map<IdSet, std::unique_ptr<GraphNode>, IdSetHash> nodes_;
    std::vector<GraphNode*> principals_; // arrival order
    std::vector<GraphNode*> orphans_;    // parentless non-principals, traversed as roots
    std::vector<GraphNode*> prev_results_;
    std::vector<std::unique_ptr<GraphNode>> graveyard_; // dead nodes, freed per frame

    // per-frame scratch
    std::vector<CandidateRec> candidates_;
    std::vector<std::pair<std::vector<Fid>, IdSet>> deferred_marks_;
    std::vector<GraphNode*> touched_;
};

} // namespace mcosq

#endif
