#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "memevo/kb.hpp"
#include "memevo/random.hpp"
#include "memevo/semnet.hpp"

namespace memevo {

struct VariationParams {
    std::size_t c_max = 5;      ///< max concepts in a freshly generated network
    std::size_t timeout_t = 10;  ///< feasibility trials before giving up

    void validate() const;
};

/// Grows a network from one random KB concept by repeatedly attaching a
/// random KB relation of a random member concept. Stops when the network
/// holds `c_max` concepts or after `timeout_t` consecutive expansions that
/// added nothing.
SemanticNetwork random_network(const KnowledgeBase& kb, const VariationParams& params, Rng& rng);

using ConceptPair = std::pair<Concept, Concept>;

/// Pairs (a in net_a, b in net_b), a != b, where some relation of a stays
/// licensed with b in its place and some relation of b stays licensed with a
/// in its place. Sorted.
std::vector<ConceptPair> interchangeable_pairs(const SemanticNetwork& net_a, const SemanticNetwork& net_b,
                                               const KnowledgeBase& kb);

enum class CrossoverKind { subgraph, merge, cluster_merge };
std::string_view to_string(CrossoverKind kind);

struct CrossoverOutcome {
    std::array<SemanticNetwork, 2> children;
    CrossoverKind kind = CrossoverKind::cluster_merge;
    /// Crossover concepts (subgraph) or nothing (merge kinds).
    std::optional<ConceptPair> pair;
    /// Parent relations dropped because they tied a moved subgraph to the
    /// rest of its network without passing through the crossover concept.
    std::vector<Relation> severed;
};

/// The part of a parent that travels in a subgraph crossover.
struct CrossoverSubgraph {
    /// Concepts moved with the crossover concept (excludes the concept itself).
    std::set<Concept> members;
    /// Relations moved: non-common relations of the crossover concept plus
    /// relations internal to `members`.
    std::vector<Relation> relations;
    /// Relations of the crossover concept shared with the other side.
    std::vector<Relation> common;
    std::vector<Relation> severed;
};

/// Splits `net` around `pivot` given the other parent's crossover concept.
CrossoverSubgraph extract_subgraph(const SemanticNetwork& net, const Concept& pivot,
                                   const SemanticNetwork& other, const Concept& other_pivot);

/// Subgraph crossover on a fixed pair (a in parent_a, b in parent_b).
CrossoverOutcome crossover_subgraph_at(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b,
                                       const ConceptPair& pair);

/// Subgraph crossover on a random interchangeable pair; nullopt when none exists.
std::optional<CrossoverOutcome> crossover_type1(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b,
                                                const KnowledgeBase& kb, Rng& rng);

/// Licensed relations joining a concept of `a` to a concept of `b` that are
/// not already in either network. Sorted.
std::vector<Relation> bridging_relations(const SemanticNetwork& a, const SemanticNetwork& b, const KnowledgeBase& kb);

/// Graph merging crossover. Each child is the union of both parents plus an
/// independently drawn bridge, or the plain union when no bridge exists.
CrossoverOutcome crossover_type2(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b,
                                 const KnowledgeBase& kb, Rng& rng);

/// Subgraph crossover when possible, otherwise graph merging.
CrossoverOutcome crossover(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b, const KnowledgeBase& kb,
                           Rng& rng);

enum class MutationType {
    concept_attachment,    // I
    relation_addition,     // IIa
    relation_deletion,     // IIb
    concept_addition,      // IIIa
    concept_deletion,      // IIIb
    concept_replacement,   // IV
};
inline constexpr std::size_t kMutationTypeCount = 6;
std::string_view to_string(MutationType type);

/// Applies one mutation of the given type, or nullopt if it is infeasible on `parent`.
std::optional<SemanticNetwork> mutate_as(MutationType type, const SemanticNetwork& parent, const KnowledgeBase& kb,
                                         Rng& rng);

struct MutationOutcome {
    SemanticNetwork child;
    std::optional<MutationType> applied;  ///< nullopt: parent returned after timeout
    std::size_t trials = 0;
};

/// Draws mutation types uniformly until one is feasible, giving up after
/// `timeout_t` trials and returning the parent unchanged.
MutationOutcome mutate_traced(const SemanticNetwork& parent, const KnowledgeBase& kb, const VariationParams& params,
                              Rng& rng);

SemanticNetwork mutate(const SemanticNetwork& parent, const KnowledgeBase& kb, const VariationParams& params,
                       Rng& rng);

/// Replacement candidates for `target` in `net`: concepts outside the network
/// that keep at least one of its relations licensed. Sorted, capped.
std::vector<Concept> replacement_candidates(const SemanticNetwork& net, const Concept& target,
                                            const KnowledgeBase& kb);
inline constexpr std::size_t kReplacementCandidateCap = 256;

}  // namespace memevo
