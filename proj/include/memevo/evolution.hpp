#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "memevo/kb.hpp"
#include "memevo/random.hpp"
#include "memevo/semnet.hpp"
#include "memevo/sme.hpp"
#include "memevo/variation.hpp"

namespace memevo {

struct EvolutionConfig {
    std::size_t pop_size = 200;
    double p_c = 0.85;
    double p_m = 0.15;
    std::size_t c_max = 5;
    double r_min = 2.0;
    std::size_t timeout_t = 10;
    std::size_t tournament_size = 8;
    double win_prob = 0.8;
    bool elitism = true;
    std::size_t max_generations = 50;
    std::optional<double> target_fitness;
    std::uint64_t seed = 0;
    /// Fitness evaluation workers; 0 means one per hardware thread.
    std::size_t threads = 1;
    ScoreWeights weights;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
    VariationParams variation() const { return {c_max, timeout_t}; }
};

struct Individual {
    SemanticNetwork net;
    std::optional<double> fitness;
};

struct Population {
    std::vector<Individual> individuals;
    std::size_t generation = 0;
};

struct GenerationStats {
    std::size_t generation = 0;
    double best_fitness = 0.0;
    double avg_fitness = 0.0;
    std::size_t best_size = 0;  ///< relation count of the best individual
    double avg_size = 0.0;
};

/// `pop_size` independent random networks, unevaluated.
Population initialize(const KnowledgeBase& kb, const EvolutionConfig& config, Rng& rng);

/// Fills in every missing fitness. Parallel over individuals; consumes no randomness.
void evaluate(Population& pop, const SemanticNetwork& base, const ScoreWeights& weights, std::size_t threads = 1);

/// Index of the fittest individual; lowest index on ties. Population must be evaluated.
std::size_t best_index(const Population& pop);
GenerationStats compute_stats(const Population& pop);

/// Tournament of `size` entrants drawn uniformly with replacement, reduced by
/// a single-elimination bracket of pairwise contests. The fitter entrant of a
/// pair wins with probability `win_prob`; equal fitnesses toss a fair coin.
/// An unpaired entrant advances to the next round unopposed.
std::size_t tournament_select(std::span<const double> fitness, std::size_t size, double win_prob, Rng& rng);

struct OffspringBudget {
    std::size_t crossover = 0;
    std::size_t mutation = 0;
};
/// round(pop_size * p_c) crossover children, halves to even; mutation supplies the rest.
OffspringBudget offspring_budget(std::size_t pop_size, double p_c);

/// Selection, variation and elitism on an evaluated population. The result
/// is generation + 1 with only the elite's fitness carried over.
Population vary(const Population& pop, const KnowledgeBase& kb, const EvolutionConfig& config, Rng& rng);

/// One iteration: evaluate `pop`, record its stats, produce the next population.
std::pair<Population, GenerationStats> step(Population pop, const SemanticNetwork& base, const KnowledgeBase& kb,
                                            const EvolutionConfig& config, Rng& rng);

struct RunResult {
    Population final_population;
    std::vector<GenerationStats> history;
    Individual best;
    std::size_t best_generation = 0;
    GMap best_mapping;
};

using GenerationObserver = std::function<void(const GenerationStats&)>;

/// Runs until `max_generations` or `target_fitness` is reached. The history
/// holds one row per evaluated generation, starting at generation 0.
RunResult run(const KnowledgeBase& kb, const SemanticNetwork& base, const EvolutionConfig& config,
              const GenerationObserver& observer = {});

inline constexpr const char* kStatsCsvHeader = "generation,best_fitness,avg_fitness,best_size,avg_size";
std::string stats_csv_row(const GenerationStats& s);
void write_stats_csv(std::ostream& out, std::span<const GenerationStats> history);

}  // namespace memevo
