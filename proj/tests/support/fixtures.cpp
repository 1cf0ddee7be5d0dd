#include "support/fixtures.hpp"

#include <algorithm>
#include <sstream>

namespace mcosq::testing {

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}
} // namespace

VideoRelation letters_relation(const std::vector<std::string>& frames, const std::string& label) {
    std::vector<ObjectRecord> records;
    for (Fid f = 0; f < frames.size(); ++f)
        for (char ch : frames[f]) records.push_back({f, std::string(1, ch), label});
    return VideoRelation::from_records(records, frames.size());
}

VideoRelation example_feed() {
    return letters_relation({"B", "ABC", "ABDF", "ABCF", "ABD"});
}

IdSet ids_of(const VideoRelation& relation, const std::string& letters) {
    std::vector<ObjId> members;
    for (char ch : letters) members.push_back(relation.ids().lookup(std::string(1, ch)));
    return IdSet(std::move(members));
}

std::string show(const VideoRelation& relation, const ResultStateSet& results) {
    std::ostringstream os;
    for (const ResultState& rs : results) {
        os << "(";
        std::vector<std::string> tokens;
        for (ObjId id : rs.ids.members()) tokens.push_back(relation.id_token(id));
        std::sort(tokens.begin(), tokens.end());
        for (const auto& t : tokens) os << t;
        os << ",{";
        for (std::size_t k = 0; k < rs.frames.size(); ++k)
            os << (k ? "," : "") << rs.frames[k];
        os << "}) ";
    }
    return os.str();
}

VideoRelation random_feed(std::uint64_t seed, Fid n_frames, unsigned n_ids, double density,
                          unsigned n_labels) {
    std::vector<ObjectRecord> records;
    std::uint64_t s = splitmix64(seed ^ 0xabcdef1234567890ULL);
    for (Fid f = 0; f < n_frames; ++f) {
        for (unsigned id = 0; id < n_ids; ++id) {
            s = splitmix64(s);
            double u = static_cast<double>(s >> 11) * 0x1.0p-53;
            if (u < density) {
                std::string token(1, static_cast<char>('A' + id));
                std::string label = "l" + std::to_string(id % n_labels);
                records.push_back({f, token, label});
            }
        }
    }
    return VideoRelation::from_records(records, n_frames);
}

} // namespace mcosq::testing
