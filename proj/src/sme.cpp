#include "memevo/sme.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <utility>

namespace memevo {

namespace {

/// Adding base->target to a map must keep it functional and injective.
bool compatible_pair(const Concept& b1, const Concept& t1, const Concept& b2, const Concept& t2) {
    return (b1 == b2) == (t1 == t2);
}

std::size_t shared_concepts(const Relation& a, const Relation& b) {
    return static_cast<std::size_t>(a.involves(b.from) || a.involves(b.to));
}

GMap make_gmap(std::vector<MatchHypothesis> hyps, const ScoreWeights& weights) {
    GMap g;
    std::sort(hyps.begin(), hyps.end());
    g.hypotheses = std::move(hyps);
    for (const auto& h : g.hypotheses) {
        g.concept_map.emplace(h.base.from, h.target.from);
        g.concept_map.emplace(h.base.to, h.target.to);
    }
    g.score = score_hypotheses(g.hypotheses, weights);
    return g;
}

bool better(const GMap& a, const GMap& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.hypotheses < b.hypotheses;
}

/// Exhaustive maximal-clique enumeration on the compatibility graph
/// (Bron-Kerbosch with pivoting). n <= 32.
std::vector<std::uint32_t> maximal_consistent_sets(std::span<const MatchHypothesis> hyps) {
    const std::size_t n = hyps.size();
    std::vector<std::uint32_t> adj(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (consistent(hyps[i], hyps[j])) {
                adj[i] |= 1u << j;
                adj[j] |= 1u << i;
            }

    std::vector<std::uint32_t> found;
    auto recurse = [&](auto&& self, std::uint32_t r, std::uint32_t p, std::uint32_t x) -> void {
        if (p == 0) {
            if (x == 0) found.push_back(r);
            return;
        }
        std::uint32_t pivot_nbrs = 0;
        int best = -1;
        for (std::uint32_t ux = p | x; ux; ux &= ux - 1) {
            const auto u = std::countr_zero(ux);
            const int cover = std::popcount(p & adj[u]);
            if (cover > best) {
                best = cover;
                pivot_nbrs = adj[u];
            }
        }
        for (std::uint32_t cand = p & ~pivot_nbrs; cand; cand &= cand - 1) {
            const auto v = std::countr_zero(cand);
            const std::uint32_t bit = 1u << v;
            self(self, r | bit, p & adj[v], x & adj[v]);
            p &= ~bit;
            x |= bit;
        }
    };
    const std::uint32_t all = n == 32 ? ~0u : (1u << n) - 1;
    recurse(recurse, 0u, all, 0u);
    return found;
}

std::vector<GMap> exact_gmaps(std::span<const MatchHypothesis> hyps, const ScoreWeights& weights) {
    std::vector<GMap> out;
    for (const auto mask : maximal_consistent_sets(hyps)) {
        std::vector<MatchHypothesis> members;
        for (std::size_t i = 0; i < hyps.size(); ++i)
            if (mask & (1u << i)) members.push_back(hyps[i]);
        out.push_back(make_gmap(std::move(members), weights));
    }
    std::sort(out.begin(), out.end(), better);
    return out;
}

/// Grows a gmap from `seed`, always adding the consistent hypothesis with the
/// largest marginal score (ties: lowest index). Result is maximal.
std::vector<std::size_t> grow_from(std::size_t seed, std::span<const MatchHypothesis> hyps,
                                   const ScoreWeights& weights) {
    std::map<Concept, Concept> forward, backward;
    std::vector<std::size_t> members;
    std::vector<bool> used(hyps.size(), false);

    auto fits = [&](const MatchHypothesis& h) {
        for (const auto& [b, t] : {std::pair{&h.base.from, &h.target.from}, std::pair{&h.base.to, &h.target.to}}) {
            if (auto f = forward.find(*b); f != forward.end() && f->second != *t) return false;
            if (auto r = backward.find(*t); r != backward.end() && r->second != *b) return false;
        }
        return true;
    };
    auto neighbours = [&](const MatchHypothesis& h) {
        std::size_t k = 0;
        for (const auto m : members) k += shared_concepts(h.base, hyps[m].base);
        return k;
    };
    auto take = [&](std::size_t i) {
        const auto& h = hyps[i];
        forward.emplace(h.base.from, h.target.from);
        forward.emplace(h.base.to, h.target.to);
        backward.emplace(h.target.from, h.base.from);
        backward.emplace(h.target.to, h.base.to);
        members.push_back(i);
        used[i] = true;
    };

    take(seed);
    for (;;) {
        std::optional<std::size_t> pick;
        double best_gain = -1.0;
        for (std::size_t i = 0; i < hyps.size(); ++i) {
            if (used[i] || !fits(hyps[i])) continue;
            const double gain = weights.base + 2.0 * weights.connectivity * static_cast<double>(neighbours(hyps[i]));
            if (gain > best_gain) {
                best_gain = gain;
                pick = i;
            }
        }
        if (!pick) break;
        take(*pick);
    }
    return members;
}

GMap greedy_gmap(std::span<const MatchHypothesis> hyps, const ScoreWeights& weights) {
    constexpr std::size_t kSeeds = 16;
    const std::size_t n = hyps.size();
    std::vector<std::size_t> support(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && shared_concepts(hyps[i].base, hyps[j].base) && consistent(hyps[i], hyps[j])) ++support[i];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return support[a] > support[b]; });

    std::optional<GMap> best;
    for (std::size_t s = 0; s < std::min(kSeeds, n); ++s) {
        std::vector<MatchHypothesis> members;
        for (const auto i : grow_from(order[s], hyps, weights)) members.push_back(hyps[i]);
        auto g = make_gmap(std::move(members), weights);
        if (!best || better(g, *best)) best = std::move(g);
    }
    return best ? std::move(*best) : GMap{};
}

/// Groups of hypotheses linked through shared base or target concepts. Groups
/// never conflict or earn connectivity with one another.
std::vector<std::vector<MatchHypothesis>> interaction_groups(std::span<const MatchHypothesis> hyps) {
    const std::size_t n = hyps.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (shared_concepts(hyps[i].base, hyps[j].base) || shared_concepts(hyps[i].target, hyps[j].target)) {
                const auto a = find(i), b = find(j);
                if (a != b) parent[std::max(a, b)] = std::min(a, b);
            }
    std::map<std::size_t, std::vector<MatchHypothesis>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(hyps[i]);
    std::vector<std::vector<MatchHypothesis>> out;
    for (auto& [_, g] : groups) out.push_back(std::move(g));
    return out;
}

}  // namespace

std::vector<MatchHypothesis> match_hypotheses(const SemanticNetwork& base, const SemanticNetwork& target) {
    std::map<RelationLabel, std::vector<const Relation*>> by_label;
    for (const auto& t : target.relations()) by_label[t.label].push_back(&t);
    std::vector<MatchHypothesis> out;
    for (const auto& b : base.relations()) {
        const auto it = by_label.find(b.label);
        if (it == by_label.end()) continue;
        for (const auto* t : it->second) out.push_back({b, *t});
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool consistent(const MatchHypothesis& a, const MatchHypothesis& b) {
    const std::pair<const Concept*, const Concept*> ends_a[] = {{&a.base.from, &a.target.from},
                                                                {&a.base.to, &a.target.to}};
    const std::pair<const Concept*, const Concept*> ends_b[] = {{&b.base.from, &b.target.from},
                                                                {&b.base.to, &b.target.to}};
    for (const auto& [ba, ta] : ends_a)
        for (const auto& [bb, tb] : ends_b)
            if (!compatible_pair(*ba, *ta, *bb, *tb)) return false;
    return true;
}

double score_hypotheses(std::span<const MatchHypothesis> hypotheses, const ScoreWeights& weights) {
    std::size_t links = 0;
    for (std::size_t i = 0; i < hypotheses.size(); ++i)
        for (std::size_t j = 0; j < hypotheses.size(); ++j)
            if (i != j) links += shared_concepts(hypotheses[i].base, hypotheses[j].base);
    return weights.base * static_cast<double>(hypotheses.size()) + weights.connectivity * static_cast<double>(links);
}

double score_gmap(const GMap& gmap, const ScoreWeights& weights) { return score_hypotheses(gmap.hypotheses, weights); }

std::vector<GMap> build_gmaps(std::span<const MatchHypothesis> hypotheses, const ScoreWeights& weights) {
    if (hypotheses.empty()) return {};
    if (hypotheses.size() <= kExactGmapLimit) return exact_gmaps(hypotheses, weights);

    std::vector<MatchHypothesis> merged;
    for (const auto& group : interaction_groups(hypotheses)) {
        const auto part = group.size() <= kExactGmapLimit ? exact_gmaps(group, weights).front()
                                                           : greedy_gmap(group, weights);
        merged.insert(merged.end(), part.hypotheses.begin(), part.hypotheses.end());
    }
    return {make_gmap(std::move(merged), weights)};
}

AnalogyResult analogy(const SemanticNetwork& base, const SemanticNetwork& target, const ScoreWeights& weights) {
    const auto hyps = match_hypotheses(base, target);
    auto gmaps = build_gmaps(hyps, weights);
    if (gmaps.empty()) return {};
    AnalogyResult out;
    out.fitness = gmaps.front().score;
    out.best = std::move(gmaps.front());
    return out;
}

double analogy_fitness(const SemanticNetwork& base, const SemanticNetwork& target, const ScoreWeights& weights) {
    return analogy(base, target, weights).fitness;
}

}  // namespace memevo
