#include <doctest.h>

#include <stdexcept>

#include "mcosq/feed.hpp"
#include "support/fixtures.hpp"

using namespace mcosq;
using namespace mcosq::testing;

TEST_CASE("object_set_of returns the recorded per-frame sets") {
    auto rel = example_feed();
    CHECK(rel.object_set_of(2) == ids_of(rel, "ABDF"));
    CHECK(rel.object_set_of(0) == ids_of(rel, "B"));
    CHECK_THROWS_AS(rel.object_set_of(5), std::out_of_range);

    auto with_gap = letters_relation({"AB", "", "C"});
    CHECK(with_gap.object_set_of(1).empty());
    CHECK(with_gap.frame_count() == 3);
}

TEST_CASE("cooc is subset containment in one frame") {
    auto rel = example_feed();
    CHECK(rel.cooc(ids_of(rel, "AB"), 2));
    CHECK_FALSE(rel.cooc(ids_of(rel, "ABC"), 2));
    CHECK(rel.cooc(ids_of(rel, "B"), 0));
    CHECK_THROWS_AS(rel.cooc(IdSet{}, 0), std::invalid_argument);
}

TEST_CASE("window_of clips at the stream start") {
    auto w = window_of(4, 4);
    CHECK(w.lo == 1);
    CHECK(w.frame_count() == 4);

    w = window_of(0, 4);
    CHECK(w.lo == 0);
    CHECK(w.frame_count() == 1);

    w = window_of(9, 300);
    CHECK(w.lo == 0);
    CHECK(w.frame_count() == 10);

    CHECK_THROWS_AS(window_of(3, 0), std::invalid_argument);
}

TEST_CASE("cooc agrees with subset structure exhaustively on small windows") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto rel = random_feed(seed, 4, 6, 0.5);
        for (Fid f = 0; f < rel.frame_count(); ++f) {
            const IdSet& frame = rel.object_set_of(f);
            unsigned n = rel.ids().size();
            for (unsigned mask = 1; mask < (1u << n); ++mask) {
                std::vector<ObjId> members;
                for (unsigned b = 0; b < n; ++b)
                    if (mask & (1u << b)) members.push_back(b);
                IdSet x(members);
                bool expected = x.subset_of(frame);
                CHECK(rel.cooc(x, f) == expected);
            }
        }
    }
}

TEST_CASE("interning is bijective") {
    Interner in;
    auto a = in.intern("car");
    auto b = in.intern("person");
    CHECK(in.intern("car") == a);
    CHECK(in.token_of(a) == "car");
    CHECK(in.token_of(b) == "person");
    CHECK(in.lookup("person") == b);
    CHECK(in.size() == 2);
    CHECK_THROWS_AS(in.lookup("bus"), std::out_of_range);
}

TEST_CASE("IdSet canonicalizes and intersects") {
    IdSet a({3, 1, 2, 3});
    CHECK(a.size() == 3);
    IdSet b({2, 3, 4});
    CHECK(IdSet::intersect(a, b) == IdSet({2, 3}));
    CHECK(IdSet({2, 3}).subset_of(a));
    CHECK_FALSE(a.subset_of(b));
    CHECK(IdSetHash{}(a) == IdSetHash{}(IdSet({1, 2, 3})));
}

TEST_CASE("relations reject inconsistent records") {
    CHECK_THROWS_AS(VideoRelation::from_records(
                        {{0, "B", "car"}, {0, "B", "car"}}),
                    std::invalid_argument);
    CHECK_THROWS_AS(VideoRelation::from_records(
                        {{0, "B", "car"}, {1, "B", "person"}}),
                    std::invalid_argument);
}
