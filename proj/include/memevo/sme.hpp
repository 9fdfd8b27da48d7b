#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include "memevo/semnet.hpp"

namespace memevo {

/// Candidate correspondence between a base and a target relation with the
/// same label. Mapping is driven by relation structure only.
struct MatchHypothesis {
    Relation base;
    Relation target;

    friend bool operator==(const MatchHypothesis&, const MatchHypothesis&) = default;
    friend auto operator<=>(const MatchHypothesis&, const MatchHypothesis&) = default;
};

/// Systematicity weights: each matched relation earns `base`, plus
/// `connectivity` for every other matched relation it shares a concept with.
struct ScoreWeights {
    double base = 0.3;
    double connectivity = 0.1;
};

/// A maximal, structurally consistent set of hypotheses and the one-to-one
/// concept mapping (base -> target) it induces.
struct GMap {
    std::vector<MatchHypothesis> hypotheses;  ///< sorted
    std::map<Concept, Concept> concept_map;
    double score = 0.0;
};

/// Hypothesis counts above this are merged greedily instead of enumerated.
inline constexpr std::size_t kExactGmapLimit = 24;

/// All label-equal (base, target) relation pairs, sorted.
std::vector<MatchHypothesis> match_hypotheses(const SemanticNetwork& base, const SemanticNetwork& target);

/// True when the two hypotheses imply a functional, injective concept map.
bool consistent(const MatchHypothesis& a, const MatchHypothesis& b);

/// Scores a consistent hypothesis set; order does not matter.
double score_hypotheses(std::span<const MatchHypothesis> hypotheses, const ScoreWeights& weights = {});
double score_gmap(const GMap& gmap, const ScoreWeights& weights = {});

/// Maximal consistent hypothesis sets, best first (score descending, then
/// lexicographically smallest hypothesis list). Exhaustive up to
/// kExactGmapLimit hypotheses; beyond that, greedy seeded merging.
std::vector<GMap> build_gmaps(std::span<const MatchHypothesis> hypotheses, const ScoreWeights& weights = {});

struct AnalogyResult {
    double fitness = 0.0;
    GMap best;  ///< empty when nothing matches
};

/// Best gmap of `target` against `base`. Fitness is 0 for empty or
/// label-disjoint inputs.
AnalogyResult analogy(const SemanticNetwork& base, const SemanticNetwork& target, const ScoreWeights& weights = {});
double analogy_fitness(const SemanticNetwork& base, const SemanticNetwork& target, const ScoreWeights& weights = {});

}  // namespace memevo
