#ifndef MCOSQ_TESTS_FIXTURES_HPP
#define MCOSQ_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "mcosq/feed.hpp"
#include "mcosq/state.hpp"

namespace mcosq::testing {

/// Relation built from one token per object, one string per frame:
/// {"B", "ABC", "ABDF"} gives frames {B}, {A,B,C}, {A,B,D,F}, all of one
/// class ("car" by default).
VideoRelation letters_relation(const std::vector<std::string>& frames,
                               const std::string& label = "car");

/// The five-frame example feed used throughout: B, ABC, ABDF, ABCF, ABD.
VideoRelation example_feed();

IdSet ids_of(const VideoRelation& relation, const std::string& letters);

std::string show(const VideoRelation& relation, const ResultStateSet& results);

/// Small random feed for equivalence fuzzing: `n_ids` objects over
/// `n_frames` frames, each present per-frame with the given density.
VideoRelation random_feed(std::uint64_t seed, Fid n_frames, unsigned n_ids, double density,
                          unsigned n_labels = 1);

} // namespace mcosq::testing

#endif
