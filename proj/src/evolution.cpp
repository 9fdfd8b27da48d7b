#include "memevo/evolution.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <thread>

namespace memevo {

void EvolutionConfig::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (pop_size < 1) fail("pop_size must be at least 1");
    if (!(p_c >= 0.0 && p_c <= 1.0)) fail("p_c must lie in [0, 1]");
    if (!(p_m >= 0.0 && p_m <= 1.0)) fail("p_m must lie in [0, 1]");
    if (std::abs(p_c + p_m - 1.0) > 1e-9) fail("p_c + p_m must equal 1");
    if (c_max < 1) fail("c_max must be at least 1");
    if (!(r_min >= 0.0) || !std::isfinite(r_min)) fail("r_min must be a non-negative number");
    if (timeout_t < 1) fail("timeout must be at least 1");
    if (tournament_size < 1) fail("tournament_size must be at least 1");
    if (tournament_size > pop_size) fail("tournament_size must not exceed pop_size");
    if (!(win_prob > 0.5 && win_prob <= 1.0)) fail("win_prob must lie in (0.5, 1]");
    if (target_fitness && !std::isfinite(*target_fitness)) fail("target_fitness must be finite");
    if (!(weights.base >= 0.0) || !(weights.connectivity >= 0.0)) fail("score weights must be non-negative");
}

Population initialize(const KnowledgeBase& kb, const EvolutionConfig& config, Rng& rng) {
    const auto params = config.variation();
    Population pop;
    pop.individuals.reserve(config.pop_size);
    for (std::size_t i = 0; i < config.pop_size; ++i) pop.individuals.push_back({random_network(kb, params, rng), {}});
    return pop;
}

void evaluate(Population& pop, const SemanticNetwork& base, const ScoreWeights& weights, std::size_t threads) {
    std::vector<std::size_t> pending;
    for (std::size_t i = 0; i < pop.individuals.size(); ++i)
        if (!pop.individuals[i].fitness) pending.push_back(i);
    if (pending.empty()) return;

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, pending.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < pending.size(); k = next++) {
            auto& ind = pop.individuals[pending[k]];
            ind.fitness = analogy_fitness(base, ind.net, weights);
        }
    };
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
}

std::size_t best_index(const Population& pop) {
    if (pop.individuals.empty()) throw std::invalid_argument("empty population");
    std::size_t best = 0;
    for (std::size_t i = 0; i < pop.individuals.size(); ++i) {
        if (!pop.individuals[i].fitness) throw std::logic_error("population is not evaluated");
        if (*pop.individuals[i].fitness > *pop.individuals[best].fitness) best = i;
    }
    return best;
}

GenerationStats compute_stats(const Population& pop) {
    GenerationStats s;
    s.generation = pop.generation;
    const auto best = best_index(pop);
    s.best_fitness = *pop.individuals[best].fitness;
    s.best_size = pop.individuals[best].net.size().relations;
    double fit_sum = 0.0, size_sum = 0.0;
    for (const auto& ind : pop.individuals) {
        fit_sum += *ind.fitness;
        size_sum += static_cast<double>(ind.net.size().relations);
    }
    const auto n = static_cast<double>(pop.individuals.size());
    s.avg_fitness = fit_sum / n;
    s.avg_size = size_sum / n;
    return s;
}

std::size_t tournament_select(std::span<const double> fitness, std::size_t size, double win_prob, Rng& rng) {
    if (fitness.empty()) throw std::invalid_argument("tournament over empty population");
    if (size < 1) throw std::invalid_argument("tournament size must be at least 1");
    std::vector<std::size_t> round;
    round.reserve(size);
    for (std::size_t i = 0; i < size; ++i) round.push_back(rng.index(fitness.size()));

    while (round.size() > 1) {
        std::vector<std::size_t> next;
        next.reserve((round.size() + 1) / 2);
        for (std::size_t i = 0; i + 1 < round.size(); i += 2) {
            const auto a = round[i], b = round[i + 1];
            const double u = rng.uniform();
            if (fitness[a] == fitness[b]) {
                next.push_back(u < 0.5 ? a : b);
            } else {
                const auto fitter = fitness[a] > fitness[b] ? a : b;
                const auto weaker = fitter == a ? b : a;
                next.push_back(u < win_prob ? fitter : weaker);
            }
        }
        if (round.size() % 2 == 1) next.push_back(round.back());
        round = std::move(next);
    }
    return round.front();
}

OffspringBudget offspring_budget(std::size_t pop_size, double p_c) {
    const auto cx = static_cast<std::size_t>(std::nearbyint(static_cast<double>(pop_size) * p_c));
    const auto crossover = std::min(cx, pop_size);
    return {crossover, pop_size - crossover};
}

Population vary(const Population& pop, const KnowledgeBase& kb, const EvolutionConfig& config, Rng& rng) {
    std::vector<double> fitness;
    fitness.reserve(pop.individuals.size());
    for (const auto& ind : pop.individuals) {
        if (!ind.fitness) throw std::logic_error("vary requires an evaluated population");
        fitness.push_back(*ind.fitness);
    }
    auto select = [&]() -> const SemanticNetwork& {
        return pop.individuals[tournament_select(fitness, config.tournament_size, config.win_prob, rng)].net;
    };

    const auto budget = offspring_budget(config.pop_size, config.p_c);
    const auto params = config.variation();
    Population next;
    next.generation = pop.generation + 1;
    next.individuals.reserve(config.pop_size);

    while (next.individuals.size() < budget.crossover) {
        const auto& mother = select();
        const auto& father = select();
        auto outcome = crossover(mother, father, kb, rng);
        next.individuals.push_back({std::move(outcome.children[0]), {}});
        if (next.individuals.size() < budget.crossover) next.individuals.push_back({std::move(outcome.children[1]), {}});
    }
    for (std::size_t i = 0; i < budget.mutation; ++i) next.individuals.push_back({mutate(select(), kb, params, rng), {}});

    if (config.elitism && !next.individuals.empty())
        next.individuals[rng.index(next.individuals.size())] = pop.individuals[best_index(pop)];
    return next;
}

std::pair<Population, GenerationStats> step(Population pop, const SemanticNetwork& base, const KnowledgeBase& kb,
                                            const EvolutionConfig& config, Rng& rng) {
    evaluate(pop, base, config.weights, config.threads);
    auto stats = compute_stats(pop);
    return {vary(pop, kb, config, rng), stats};
}

RunResult run(const KnowledgeBase& kb, const SemanticNetwork& base, const EvolutionConfig& config,
              const GenerationObserver& observer) {
    config.validate();
    Rng rng(config.seed);
    RunResult result;
    Population pop = initialize(kb, config, rng);
    std::optional<double> best_seen;

    for (;;) {
        evaluate(pop, base, config.weights, config.threads);
        const auto stats = compute_stats(pop);
        result.history.push_back(stats);
        if (observer) observer(stats);

        if (!best_seen || stats.best_fitness > *best_seen) {
            best_seen = stats.best_fitness;
            result.best = pop.individuals[best_index(pop)];
            result.best_generation = pop.generation;
        }
        const bool reached = config.target_fitness && stats.best_fitness >= *config.target_fitness;
        if (pop.generation >= config.max_generations || reached) break;
        pop = vary(pop, kb, config, rng);
    }

    result.best_mapping = analogy(base, result.best.net, config.weights).best;
    result.final_population = std::move(pop);
    return result;
}

std::string stats_csv_row(const GenerationStats& s) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%zu,%.6f", s.generation, s.best_fitness, s.avg_fitness, s.best_size,
                  s.avg_size);
    return buf;
}

void write_stats_csv(std::ostream& out, std::span<const GenerationStats> history) {
    out << kStatsCsvHeader << '\n';
    for (const auto& s : history) out << stats_csv_row(s) << '\n';
}

}  // namespace memevo
