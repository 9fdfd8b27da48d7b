#include "memevo/variation.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <map>
#include <set>
#include <stdexcept>

namespace memevo {

void VariationParams::validate() const {
    if (c_max < 1) throw std::invalid_argument("c_max must be at least 1");
    if (timeout_t < 1) throw std::invalid_argument("timeout must be at least 1");
}

namespace {

template <typename Set>
const auto& nth(const Set& s, std::size_t i) {
    return *std::next(s.begin(), static_cast<std::ptrdiff_t>(i));
}

/// Concepts that can stand in for `c` in at least one of its relations in
/// `net`, according to the KB. Never contains `c`.
std::set<Concept> substitutes(const SemanticNetwork& net, const Concept& c, const KnowledgeBase& kb) {
    std::set<Concept> out;
    for (const auto& r : net.relations_of(c)) {
        const bool outgoing = r.from == c;
        const auto& partner = r.partner(c);
        for (const auto& a : kb.relations_involving(partner)) {
            if (a.label != r.label) continue;
            if (outgoing && a.to == partner) out.insert(a.from);
            if (!outgoing && a.from == partner) out.insert(a.to);
        }
    }
    out.erase(c);
    return out;
}

SemanticNetwork union_of(const SemanticNetwork& a, const SemanticNetwork& b) {
    SemanticNetwork u = a;
    for (const auto& c : b.concepts()) u.add_concept(c);
    for (const auto& r : b.relations()) u.add_relation(r);
    return u;
}

/// `host` without `pivot` and its departing subgraph, with the incoming
/// subgraph and re-attached common relations grafted on.
SemanticNetwork graft(const SemanticNetwork& host, const Concept& pivot, const CrossoverSubgraph& outgoing,
                      const Concept& incoming_pivot, const CrossoverSubgraph& incoming) {
    SemanticNetwork child;
    for (const auto& c : host.concepts())
        if (c != pivot && !outgoing.members.contains(c)) child.add_concept(c);
    for (const auto& r : host.relations()) {
        if (r.involves(pivot) || outgoing.members.contains(r.from) || outgoing.members.contains(r.to)) continue;
        child.add_relation(r);
    }
    child.add_concept(incoming_pivot);
    for (const auto& c : incoming.members) child.add_concept(c);
    for (const auto& r : incoming.relations) child.add_relation(r);
    for (const auto& r : incoming.common) child.add_relation(r);
    return child;
}

}  // namespace

SemanticNetwork random_network(const KnowledgeBase& kb, const VariationParams& params, Rng& rng) {
    params.validate();
    SemanticNetwork net;
    net.add_concept(kb.random_concept(rng));
    std::size_t failures = 0;
    while (net.concepts().size() < params.c_max && failures < params.timeout_t) {
        const auto& picked = nth(net.concepts(), rng.index(net.concepts().size()));
        const auto options = kb.relations_involving(picked);
        if (options.empty()) {
            ++failures;
            continue;
        }
        const Relation r(options[rng.index(options.size())]);
        if (net.contains(r)) {
            ++failures;
            continue;
        }
        net.add_relation(r);
        failures = 0;
    }
    return net;
}

std::vector<ConceptPair> interchangeable_pairs(const SemanticNetwork& net_a, const SemanticNetwork& net_b,
                                               const KnowledgeBase& kb) {
    std::vector<ConceptPair> out;
    std::map<Concept, std::set<Concept>> subs_b;
    for (const auto& a : net_a.concepts()) {
        for (const auto& b : substitutes(net_a, a, kb)) {
            if (!net_b.contains(b)) continue;
            auto it = subs_b.find(b);
            if (it == subs_b.end()) it = subs_b.emplace(b, substitutes(net_b, b, kb)).first;
            if (it->second.contains(a)) out.emplace_back(a, b);
        }
    }
    return out;
}

std::string_view to_string(CrossoverKind kind) {
    switch (kind) {
        case CrossoverKind::subgraph: return "subgraph";
        case CrossoverKind::merge: return "merge";
        case CrossoverKind::cluster_merge: return "cluster-merge";
    }
    return "?";
}

CrossoverSubgraph extract_subgraph(const SemanticNetwork& net, const Concept& pivot, const SemanticNetwork& other,
                                   const Concept& other_pivot) {
    CrossoverSubgraph sub;
    std::set<Concept> common_partners;
    std::vector<Relation> specific;
    for (const auto& r : net.relations_of(pivot)) {
        const auto& partner = r.partner(pivot);
        if (partner != other_pivot && other.contains(r.substituted(pivot, other_pivot))) {
            sub.common.push_back(r);
            common_partners.insert(partner);
        } else {
            specific.push_back(r);
        }
    }

    std::deque<Concept> frontier;
    for (const auto& r : specific) {
        const auto& partner = r.partner(pivot);
        if (!common_partners.contains(partner) && sub.members.insert(partner).second) frontier.push_back(partner);
    }
    while (!frontier.empty()) {
        const Concept c = frontier.front();
        frontier.pop_front();
        for (const auto& r : net.relations_of(c)) {
            const auto& next = r.partner(c);
            if (next == pivot || common_partners.contains(next)) continue;
            if (sub.members.insert(next).second) frontier.push_back(next);
        }
    }

    sub.relations = std::move(specific);
    for (const auto& r : net.relations()) {
        if (r.involves(pivot)) continue;
        const bool from_in = sub.members.contains(r.from);
        const bool to_in = sub.members.contains(r.to);
        if (from_in && to_in)
            sub.relations.push_back(r);
        else if (from_in || to_in)
            sub.severed.push_back(r);
    }
    std::sort(sub.relations.begin(), sub.relations.end());
    return sub;
}

CrossoverOutcome crossover_subgraph_at(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b,
                                       const ConceptPair& pair) {
    const auto& [a, b] = pair;
    if (!parent_a.contains(a) || !parent_b.contains(b))
        throw std::invalid_argument("crossover concepts must belong to their parents");
    const auto sub_a = extract_subgraph(parent_a, a, parent_b, b);
    const auto sub_b = extract_subgraph(parent_b, b, parent_a, a);

    CrossoverOutcome out;
    out.kind = CrossoverKind::subgraph;
    out.pair = pair;
    out.children[0] = graft(parent_a, a, sub_a, b, sub_b);
    out.children[1] = graft(parent_b, b, sub_b, a, sub_a);
    out.severed = sub_a.severed;
    out.severed.insert(out.severed.end(), sub_b.severed.begin(), sub_b.severed.end());
    return out;
}

std::optional<CrossoverOutcome> crossover_type1(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b,
                                                const KnowledgeBase& kb, Rng& rng) {
    const auto pairs = interchangeable_pairs(parent_a, parent_b, kb);
    if (pairs.empty()) return std::nullopt;
    return crossover_subgraph_at(parent_a, parent_b, rng.pick(pairs));
}

std::vector<Relation> bridging_relations(const SemanticNetwork& a, const SemanticNetwork& b, const KnowledgeBase& kb) {
    std::set<Relation> found;
    for (const auto& c : a.concepts()) {
        for (const auto& asr : kb.relations_involving(c)) {
            if (!b.contains(asr.from == c ? asr.to : asr.from)) continue;
            Relation r(asr);
            if (!a.contains(r) && !b.contains(r)) found.insert(std::move(r));
        }
    }
    return {found.begin(), found.end()};
}

CrossoverOutcome crossover_type2(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b,
                                 const KnowledgeBase& kb, Rng& rng) {
    CrossoverOutcome out;
    const auto merged = union_of(parent_a, parent_b);
    const auto bridges = bridging_relations(parent_a, parent_b, kb);
    out.children = {merged, merged};
    if (bridges.empty()) {
        out.kind = CrossoverKind::cluster_merge;
        return out;
    }
    out.kind = CrossoverKind::merge;
    for (auto& child : out.children) child.add_relation(rng.pick(bridges));
    return out;
}

CrossoverOutcome crossover(const SemanticNetwork& parent_a, const SemanticNetwork& parent_b, const KnowledgeBase& kb,
                           Rng& rng) {
    if (auto sub = crossover_type1(parent_a, parent_b, kb, rng)) return std::move(*sub);
    return crossover_type2(parent_a, parent_b, kb, rng);
}

std::string_view to_string(MutationType type) {
    switch (type) {
        case MutationType::concept_attachment: return "concept-attachment";
        case MutationType::relation_addition: return "relation-addition";
        case MutationType::relation_deletion: return "relation-deletion";
        case MutationType::concept_addition: return "concept-addition";
        case MutationType::concept_deletion: return "concept-deletion";
        case MutationType::concept_replacement: return "concept-replacement";
    }
    return "?";
}

std::vector<Concept> replacement_candidates(const SemanticNetwork& net, const Concept& target,
                                            const KnowledgeBase& kb) {
    std::vector<Concept> out;
    for (const auto& c : substitutes(net, target, kb)) {
        if (net.contains(c)) continue;
        out.push_back(c);
        if (out.size() == kReplacementCandidateCap) break;
    }
    return out;
}

namespace {

std::optional<SemanticNetwork> attach_concept(const SemanticNetwork& parent, const KnowledgeBase& kb, Rng& rng) {
    std::map<Concept, std::vector<Relation>> attachable;
    for (const auto& c : parent.concepts()) {
        for (const auto& a : kb.relations_involving(c)) {
            const auto& partner = a.from == c ? a.to : a.from;
            if (!parent.contains(partner)) attachable[partner].emplace_back(a);
        }
    }
    if (attachable.empty()) return std::nullopt;
    auto links = nth(attachable, rng.index(attachable.size())).second;
    std::sort(links.begin(), links.end());
    SemanticNetwork child = parent;
    child.add_relation(rng.pick(links));
    return child;
}

std::optional<SemanticNetwork> add_relation(const SemanticNetwork& parent, const KnowledgeBase& kb, Rng& rng) {
    std::set<Relation> options;
    for (const auto& c : parent.concepts()) {
        for (const auto& a : kb.relations_involving(c)) {
            if (a.from != c || !parent.contains(a.to)) continue;
            Relation r(a);
            if (!parent.contains(r)) options.insert(std::move(r));
        }
    }
    if (options.empty()) return std::nullopt;
    SemanticNetwork child = parent;
    child.add_relation(nth(options, rng.index(options.size())));
    return child;
}

std::optional<SemanticNetwork> delete_relation(const SemanticNetwork& parent, Rng& rng) {
    if (parent.relations().empty()) return std::nullopt;
    SemanticNetwork child = parent;
    child.remove_relation(nth(parent.relations(), rng.index(parent.relations().size())));
    return child;
}

std::optional<SemanticNetwork> add_concept(const SemanticNetwork& parent, const KnowledgeBase& kb, Rng& rng) {
    const auto pool = kb.concepts();
    if (pool.empty()) return std::nullopt;
    constexpr int kRejectionTries = 32;
    for (int i = 0; i < kRejectionTries; ++i) {
        const auto& c = pool[rng.index(pool.size())];
        if (!parent.contains(c)) {
            SemanticNetwork child = parent;
            child.add_concept(c);
            return child;
        }
    }
    std::vector<Concept> outside;
    for (const auto& c : pool)
        if (!parent.contains(c)) outside.push_back(c);
    if (outside.empty()) return std::nullopt;
    SemanticNetwork child = parent;
    child.add_concept(rng.pick(outside));
    return child;
}

std::optional<SemanticNetwork> delete_concept(const SemanticNetwork& parent, Rng& rng) {
    if (parent.empty()) return std::nullopt;
    SemanticNetwork child = parent;
    child.remove_concept(nth(parent.concepts(), rng.index(parent.concepts().size())));
    return child;
}

std::optional<SemanticNetwork> replace_concept(const SemanticNetwork& parent, const KnowledgeBase& kb, Rng& rng) {
    std::vector<std::pair<Concept, std::vector<Concept>>> targets;
    for (const auto& c : parent.concepts()) {
        auto candidates = replacement_candidates(parent, c, kb);
        if (!candidates.empty()) targets.emplace_back(c, std::move(candidates));
    }
    if (targets.empty()) return std::nullopt;
    const auto& [target, candidates] = rng.pick(targets);
    const auto& replacement = rng.pick(candidates);

    SemanticNetwork child = parent;
    child.remove_concept(target);
    child.add_concept(replacement);
    for (const auto& r : parent.relations_of(target)) {
        auto moved = r.substituted(target, replacement);
        if (kb.is_licensed(moved.label, moved.from, moved.to)) child.add_relation(moved);
    }
    return child;
}

}  // namespace

std::optional<SemanticNetwork> mutate_as(MutationType type, const SemanticNetwork& parent, const KnowledgeBase& kb,
                                         Rng& rng) {
    switch (type) {
        case MutationType::concept_attachment: return attach_concept(parent, kb, rng);
        case MutationType::relation_addition: return add_relation(parent, kb, rng);
        case MutationType::relation_deletion: return delete_relation(parent, rng);
        case MutationType::concept_addition: return add_concept(parent, kb, rng);
        case MutationType::concept_deletion: return delete_concept(parent, rng);
        case MutationType::concept_replacement: return replace_concept(parent, kb, rng);
    }
    return std::nullopt;
}

MutationOutcome mutate_traced(const SemanticNetwork& parent, const KnowledgeBase& kb, const VariationParams& params,
                              Rng& rng) {
    params.validate();
    MutationOutcome out;
    while (out.trials < params.timeout_t) {
        ++out.trials;
        const auto type = static_cast<MutationType>(rng.index(kMutationTypeCount));
        if (auto child = mutate_as(type, parent, kb, rng)) {
            out.child = std::move(*child);
            out.applied = type;
            return out;
        }
    }
    out.child = parent;
    return out;
}

SemanticNetwork mutate(const SemanticNetwork& parent, const KnowledgeBase& kb, const VariationParams& params,
                       Rng& rng) {
    return mutate_traced(parent, kb, params, rng).child;
}

}  // namespace memevo
