#include "mcosq/cnf.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mcosq {

namespace {

struct Lexer {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }
    bool eof() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
    [[noreturn]] void fail(const std::string& what) {
        throw std::runtime_error("parse_query: at position " + std::to_string(pos) + ": " + what);
    }
    void expect(char c) {
        skip_ws();
        if (pos >= text.size() || text[pos] != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }
    std::string ident() {
        skip_ws();
        std::size_t start = pos;
        if (pos < text.size() &&
            (std::isalpha(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
            ++pos;
            while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) ||
                                         text[pos] == '_'))
                ++pos;
        }
        if (start == pos) fail("expected identifier");
        return text.substr(start, pos - start);
    }
    std::uint64_t integer() {
        skip_ws();
        std::size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) fail("expected integer");
        return std::stoull(text.substr(start, pos - start));
    }
    Theta op() {
        skip_ws();
        if (pos + 1 < text.size() && text[pos] == '<' && text[pos + 1] == '=') {
            pos += 2;
            return Theta::Le;
        }
        if (pos + 1 < text.size() && text[pos] == '>' && text[pos + 1] == '=') {
            pos += 2;
            return Theta::Ge;
        }
        if (pos < text.size() && text[pos] == '=') {
            ++pos;
            return Theta::Eq;
        }
        fail("expected one of <=, >=, =");
    }
};

} // namespace

Query parse_query(const std::string& text) {
    Lexer lx{text};
    Query q;
    while (true) {
        lx.expect('(');
        Clause clause;
        while (true) {
            Condition c;
            c.label = lx.ident();
            c.theta = lx.op();
            c.n = static_cast<std::uint32_t>(lx.integer());
            clause.push_back(std::move(c));
            if (lx.peek() == ')') {
                lx.expect(')');
                break;
            }
            std::string kw = lx.ident();
            if (kw != "OR") lx.fail("expected OR or ')'");
        }
        q.clauses.push_back(std::move(clause));
        std::string kw = lx.ident();
        if (kw == "AND") continue;
        if (kw == "WINDOW") break;
        lx.fail("expected AND or WINDOW");
    }
    q.window = lx.integer();
    std::string kw = lx.ident();
    if (kw != "DURATION") lx.fail("expected DURATION");
    q.duration = lx.integer();
    if (!lx.eof()) lx.fail("trailing input");
    if (q.window == 0) throw std::invalid_argument("parse_query: window must be >= 1");
    if (q.duration > q.window)
        throw std::invalid_argument("parse_query: duration " + std::to_string(q.duration) +
                                    " exceeds window " + std::to_string(q.window));
    return q;
}

std::vector<Query> parse_query_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_query_file: cannot open " + path);
    std::vector<Query> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        bool blank = true;
        for (char ch : line)
            if (!std::isspace(static_cast<unsigned char>(ch))) {
                blank = false;
                break;
            }
        if (blank || line[line.find_first_not_of(" \t")] == '#') continue;
        Query q;
        try {
            q = parse_query(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("query file line " + std::to_string(line_no) + ": " +
                                     e.what());
        }
        q.qid = std::to_string(line_no);
        out.push_back(std::move(q));
    }
    return out;
}

IndexSet IndexSet::build(const std::vector<Query>& queries) {
    IndexSet idx;
    idx.queries_ = queries;
    {
        std::vector<std::string> qids;
        for (const Query& q : queries) qids.push_back(q.qid);
        std::sort(qids.begin(), qids.end());
        if (std::adjacent_find(qids.begin(), qids.end()) != qids.end())
            throw std::invalid_argument("IndexSet::build: duplicate qid");
    }
    for (std::uint32_t qp = 0; qp < queries.size(); ++qp) {
        const Query& q = queries[qp];
        idx.clause_counts_.push_back(static_cast<std::uint32_t>(q.clauses.size()));
        for (std::uint32_t d = 0; d < q.clauses.size(); ++d) {
            for (const Condition& c : q.clauses[d]) {
                auto& table = c.theta == Theta::Ge ? idx.ge_
                              : c.theta == Theta::Le ? idx.le_
                                                     : idx.eq_;
                auto& list = table[c.label];
                auto it = std::find_if(list.begin(), list.end(),
                                       [&](const ValuePostings& vp) { return vp.value == c.n; });
                if (it == list.end()) {
                    list.push_back({c.n, {}});
                    it = std::prev(list.end());
                }
                it->postings.push_back({q.qid, qp, d});
            }
        }
    }
    for (auto& [label, list] : idx.ge_)
        std::sort(list.begin(), list.end(),
                  [](const ValuePostings& a, const ValuePostings& b) { return a.value < b.value; });
    for (auto& [label, list] : idx.le_)
        std::sort(list.begin(), list.end(),
                  [](const ValuePostings& a, const ValuePostings& b) { return a.value > b.value; });
    for (auto& [label, list] : idx.eq_)
        std::sort(list.begin(), list.end(),
                  [](const ValuePostings& a, const ValuePostings& b) { return a.value < b.value; });
    return idx;
}

std::vector<std::string> IndexSet::evaluate(
    const std::vector<std::pair<std::string, std::uint32_t>>& counts) const {
    if (queries_.empty()) return {};
    // per-query set of satisfied clause indices
    std::vector<std::vector<char>> hit(queries_.size());
    for (std::size_t qp = 0; qp < queries_.size(); ++qp)
        hit[qp].assign(clause_counts_[qp], 0);

    auto count_of = [&](const std::string& label) -> std::uint32_t {
        for (const auto& [l, v] : counts)
            if (l == label) return v;
        return 0; // an absent label counts zero objects
    };
    auto probe = [&](const std::vector<PostingEntry>& postings) {
        for (const PostingEntry& p : postings) hit[p.query_pos][p.disj_id] = 1;
    };

    for (const auto& [label, list] : ge_) {
        std::uint32_t v = count_of(label);
        for (const ValuePostings& vp : list) {
            if (vp.value > v) break; // ascending: the rest are larger
            probe(vp.postings);
        }
    }
    for (const auto& [label, list] : le_) {
        std::uint32_t v = count_of(label);
        for (const ValuePostings& vp : list) {
            if (vp.value < v) break; // descending: the rest are smaller
            probe(vp.postings);
        }
    }
    for (const auto& [label, list] : eq_) {
        std::uint32_t v = count_of(label);
        auto it = std::lower_bound(list.begin(), list.end(), v,
                                   [](const ValuePostings& vp, std::uint32_t x) {
                                       return vp.value < x;
                                   });
        if (it != list.end() && it->value == v) probe(it->postings);
    }

    std::vector<std::string> out;
    for (std::size_t qp = 0; qp < queries_.size(); ++qp) {
        bool all = true;
        for (char h : hit[qp])
            if (!h) {
                all = false;
                break;
            }
        if (all) out.push_back(queries_[qp].qid);
    }
    return out;
}

std::string IndexSet::debug_dump() const {
    auto dump_table = [](std::ostringstream& os, const char* name,
                         const std::map<std::string, std::vector<ValuePostings>>& table) {
        os << name << " Index\n";
        for (const auto& [label, list] : table) {
            os << label << ":";
            bool first_v = true;
            for (const ValuePostings& vp : list) {
                os << (first_v ? " " : "; ") << vp.value << " ->";
                first_v = false;
                for (const PostingEntry& p : vp.postings)
                    os << " (" << p.qid << "," << p.disj_id << ")";
            }
            os << "\n";
        }
    };
    std::ostringstream os;
    dump_table(os, ">=", ge_);
    dump_table(os, "<=", le_);
    if (!eq_.empty()) dump_table(os, "=", eq_);
    return os.str();
}

std::vector<std::pair<std::string, std::uint32_t>> aggregate(const IdSet& mcos,
                                                             const VideoRelation& relation) {
    std::vector<std::uint32_t> counts(relation.label_count(), 0);
    for (ObjId id : mcos.members()) {
        if (id >= relation.object_count())
            throw std::invalid_argument("aggregate: unknown object id");
        ++counts[relation.class_of(id)];
    }
    std::vector<std::pair<std::string, std::uint32_t>> out;
    for (LabelId l = 0; l < counts.size(); ++l)
        if (counts[l] > 0) out.emplace_back(relation.label_token(l), counts[l]);
    return out;
}

bool is_prunable(const std::vector<Query>& queries) {
    for (const Query& q : queries)
        for (const Clause& clause : q.clauses)
            for (const Condition& c : clause)
                if (c.theta != Theta::Ge) return false;
    return true;
}

bool prune_check(const IndexSet& indexes, const IdSet& mcos, const VideoRelation& relation) {
    if (!is_prunable(indexes.queries()))
        throw std::logic_error("prune_check: query set contains non->= conditions");
    return indexes.evaluate(aggregate(mcos, relation)).empty();
}

} // namespace mcosq
