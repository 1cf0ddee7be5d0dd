#ifndef MCOSQ_CNF_HPP
#define MCOSQ_CNF_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mcosq/feed.hpp"

namespace mcosq {

enum class Theta { Le, Eq, Ge };

/// One condition of the form `label theta n`, e.g. car >= 2.
struct Condition {
    std::string label;
    Theta theta = Theta::Ge;
    std::uint32_t n = 0;
};

using Clause = std::vector<Condition>; // a disjunction

/// A CNF of count conditions evaluated over a sliding window of `window`
/// frames; a match must span at least `duration` frames.
struct Query {
    std::string qid;
    std::vector<Clause> clauses;
    Fid window = 1;
    Fid duration = 0;
};

/// Grammar (one query per line):
///   query  := clause ( "AND" clause )* "WINDOW" int "DURATION" int
///   clause := "(" cond ( "OR" cond )* ")"
///   cond   := label op int ;  op := "<=" | ">=" | "="
/// Throws std::runtime_error with a character position on syntax errors and
/// std::invalid_argument when duration exceeds window.
Query parse_query(const std::string& text);

/// Loads one query per line; qids are 1-based line numbers.
std::vector<Query> parse_query_file(const std::string& path);

struct PostingEntry {
    std::string qid;
    std::uint32_t query_pos; // position in the query list handed to build_indexes
    std::uint32_t disj_id;   // zero-based clause index
};

/// Per-label posting lists ordered by threshold value: ascending for >=,
/// descending for <=, exact-probe for =.
struct ValuePostings {
    std::uint32_t value;
    std::vector<PostingEntry> postings;
};

class IndexSet {
public:
    /// Throws std::invalid_argument on duplicate qids.
    static IndexSet build(const std::vector<Query>& queries);

    /// qids whose every clause has a satisfied condition under the counts.
    /// Labels indexed but absent from `counts` are probed with count 0.
    std::vector<std::string> evaluate(
        const std::vector<std::pair<std::string, std::uint32_t>>& counts) const;

    bool empty() const { return ge_.empty() && le_.empty() && eq_.empty(); }
    const std::vector<Query>& queries() const { return queries_; }

    const std::map<std::string, std::vector<ValuePostings>>& ge_index() const { return ge_; }
    const std::map<std::string, std::vector<ValuePostings>>& le_index() const { return le_; }
    const std::map<std::string, std::vector<ValuePostings>>& eq_index() const { return eq_; }

    /// The >= and <= tables, one "label: value -> (qid,disjId); ..." line per
    /// key, in index order. Golden-tested byte for byte.
    std::string debug_dump() const;

private:
    std::vector<Query> queries_;
    std::vector<std::uint32_t> clause_counts_;
    std::map<std::string, std::vector<ValuePostings>> ge_; // values ascending
    std::map<std::string, std::vector<ValuePostings>> le_; // values descending
    std::map<std::string, std::vector<ValuePostings>> eq_;
};

/// Class-label counts for the objects of a state.
std::vector<std::pair<std::string, std::uint32_t>> aggregate(const IdSet& mcos,
                                                             const VideoRelation& relation);

/// TRUE iff every condition of every query uses >= (the only shape where a
/// failing object set can never be revived by a subset).
bool is_prunable(const std::vector<Query>& queries);

/// TRUE when the object set fails every query; the caller then terminates
/// the state and skips everything derived from it. Only meaningful when
/// is_prunable holds; throws std::logic_error otherwise.
bool prune_check(const IndexSet& indexes, const IdSet& mcos, const VideoRelation& relation);

} // namespace mcosq

#endif
