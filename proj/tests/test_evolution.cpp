#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "memevo/evolution.hpp"
#include "oracles.hpp"

using namespace memevo;
using memevo::oracle::fixture_kb;
using memevo::oracle::fixture_net;

namespace {

EvolutionConfig small_config(std::uint64_t seed) {
    EvolutionConfig c;
    c.pop_size = 30;
    c.max_generations = 8;
    c.tournament_size = 4;
    c.seed = seed;
    return c;
}

bool all_licensed(const Population& pop) {
    for (const auto& ind : pop.individuals)
        for (const auto& r : ind.net.relations())
            if (!fixture_kb().is_licensed(r.label, r.from, r.to)) return false;
    return true;
}

}  // namespace

TEST(OffspringBudget, Rounding) {
    EXPECT_EQ(offspring_budget(50, 0.85).crossover, 42u);
    EXPECT_EQ(offspring_budget(50, 0.85).mutation, 8u);
    EXPECT_EQ(offspring_budget(200, 0.85).crossover, 170u);
    EXPECT_EQ(offspring_budget(10, 0.0).crossover, 0u);
    EXPECT_EQ(offspring_budget(10, 1.0).mutation, 0u);
    for (std::size_t n = 1; n < 40; ++n) {
        const auto b = offspring_budget(n, 0.37);
        EXPECT_EQ(b.crossover + b.mutation, n);
    }
}

TEST(TournamentSelect, DegenerateCases) {
    const std::vector<double> f{0.1, 0.9, 0.5, 0.2};
    Rng rng(3);
    std::vector<std::size_t> counts(4, 0);
    for (int i = 0; i < 4000; ++i) ++counts[tournament_select(f, 1, 0.8, rng)];
    for (auto c : counts) EXPECT_NEAR(static_cast<double>(c), 1000.0, 5 * std::sqrt(4000 * 0.25 * 0.75));

    // with win_prob 1 and every entrant present, the best always wins
    const std::vector<double> two{0.3, 0.7};
    for (int i = 0; i < 200; ++i) {
        const auto w = tournament_select(two, 16, 1.0, rng);
        EXPECT_TRUE(w == 1 || w == 0);
    }
    std::size_t best = 0;
    for (int i = 0; i < 500; ++i) best += tournament_select(f, 64, 1.0, rng) == 1;
    EXPECT_EQ(best, 500u);
}

TEST(TournamentSelect, MatchesIndependentSimulationAndExactLaw) {
    const std::vector<double> f{0.1, 0.4, 0.4, 0.9, 0.6, 0.2};
    const std::size_t draws = 20000;
    for (const std::size_t size : {2u, 4u, 8u}) {
        Rng rng(41 + size);
        std::vector<double> freq(f.size(), 0.0);
        for (std::size_t i = 0; i < draws; ++i) freq[tournament_select(f, size, 0.8, rng)] += 1.0 / draws;
        const auto sim = oracle::simulate_tournament(f, size, 0.8, draws, 97 + size);
        const int rounds = size == 2 ? 1 : size == 4 ? 2 : 3;
        const auto exact = oracle::exact_tournament(f, rounds, 0.8);
        for (std::size_t i = 0; i < f.size(); ++i) {
            const double sigma = std::sqrt(exact[i] * (1 - exact[i]) / draws);
            EXPECT_NEAR(freq[i], exact[i], 3 * sigma + 1e-9) << "size " << size << " index " << i;
            EXPECT_NEAR(sim[i], exact[i], 4 * sigma + 1e-9);
        }
    }
}

TEST(Initialize, SizeAndLicensing) {
    const auto config = small_config(1);
    Rng rng(config.seed);
    const auto pop = initialize(fixture_kb(), config, rng);
    EXPECT_EQ(pop.individuals.size(), config.pop_size);
    EXPECT_EQ(pop.generation, 0u);
    EXPECT_TRUE(all_licensed(pop));
    for (const auto& ind : pop.individuals) {
        EXPECT_LE(ind.net.concepts().size(), config.c_max);
        EXPECT_FALSE(ind.fitness);
    }
}

TEST(Evaluate, ThreadCountDoesNotChangeFitness) {
    const auto base = fixture_net("exp1_base.semnet");
    auto config = small_config(5);
    Rng rng(config.seed);
    const auto pop = initialize(fixture_kb(), config, rng);
    auto serial = pop, parallel = pop;
    evaluate(serial, base, config.weights, 1);
    evaluate(parallel, base, config.weights, 4);
    for (std::size_t i = 0; i < pop.individuals.size(); ++i) {
        ASSERT_TRUE(serial.individuals[i].fitness);
        EXPECT_EQ(*serial.individuals[i].fitness, *parallel.individuals[i].fitness);
        EXPECT_EQ(*serial.individuals[i].fitness, analogy_fitness(base, pop.individuals[i].net));
    }
}

TEST(Run, HistoryRowsAndInvariantsEveryGeneration) {
    const auto base = fixture_net("exp1_base.semnet");
    auto config = small_config(17);
    std::vector<GenerationStats> seen;
    const auto result = run(fixture_kb(), base, config, [&](const GenerationStats& s) { seen.push_back(s); });
    ASSERT_EQ(result.history.size(), config.max_generations + 1);
    EXPECT_EQ(seen.size(), result.history.size());
    for (std::size_t g = 0; g < result.history.size(); ++g) {
        EXPECT_EQ(result.history[g].generation, g);
        if (g > 0) EXPECT_GE(result.history[g].best_fitness, result.history[g - 1].best_fitness);
        EXPECT_LE(result.history[g].avg_fitness, result.history[g].best_fitness + 1e-12);
    }
    EXPECT_EQ(result.final_population.individuals.size(), config.pop_size);
    EXPECT_TRUE(all_licensed(result.final_population));
    ASSERT_TRUE(result.best.fitness);
    EXPECT_EQ(*result.best.fitness, result.history.back().best_fitness);
    EXPECT_EQ(result.best_mapping.score, *result.best.fitness);
}

TEST(Step, LicensingAndPopulationSizeHoldEachGeneration) {
    const auto base = fixture_net("exp1_base.semnet");
    auto config = small_config(23);
    Rng rng(config.seed);
    auto pop = initialize(fixture_kb(), config, rng);
    for (int g = 0; g < 6; ++g) {
        auto [next, stats] = step(pop, base, fixture_kb(), config, rng);
        EXPECT_EQ(stats.generation, static_cast<std::size_t>(g));
        ASSERT_EQ(next.individuals.size(), config.pop_size);
        ASSERT_TRUE(all_licensed(next));
        for (const auto& ind : next.individuals) ASSERT_TRUE(ind.net.is_well_formed());
        pop = std::move(next);
    }
}

TEST(Run, ZeroGenerationsGivesOneRow) {
    auto config = small_config(2);
    config.max_generations = 0;
    const auto result = run(fixture_kb(), fixture_net("exp1_base.semnet"), config);
    EXPECT_EQ(result.history.size(), 1u);
}

TEST(Run, TargetFitnessStopsEarly) {
    auto config = small_config(2);
    config.max_generations = 30;
    config.target_fitness = 0.0;
    const auto result = run(fixture_kb(), fixture_net("exp1_base.semnet"), config);
    EXPECT_EQ(result.history.size(), 1u);
}

TEST(Run, DeterministicForSeedAndThreads) {
    const auto base = fixture_net("exp1_base.semnet");
    auto config = small_config(99);
    const auto a = run(fixture_kb(), base, config);
    config.threads = 3;
    const auto b = run(fixture_kb(), base, config);
    std::ostringstream ca, cb;
    write_stats_csv(ca, a.history);
    write_stats_csv(cb, b.history);
    EXPECT_EQ(ca.str(), cb.str());
    EXPECT_EQ(a.best.net, b.best.net);
    for (std::size_t i = 0; i < a.final_population.individuals.size(); ++i)
        EXPECT_EQ(a.final_population.individuals[i].net, b.final_population.individuals[i].net);
}

TEST(Vary, AllMutationWhenCrossoverProbabilityIsZero) {
    auto config = small_config(4);
    config.p_c = 0.0;
    config.p_m = 1.0;
    config.elitism = false;
    Rng rng(config.seed);
    auto pop = initialize(fixture_kb(), config, rng);
    evaluate(pop, fixture_net("exp1_base.semnet"), config.weights);
    const auto next = vary(pop, fixture_kb(), config, rng);
    EXPECT_EQ(next.individuals.size(), config.pop_size);
    EXPECT_EQ(next.generation, 1u);
    for (const auto& ind : next.individuals) {
        EXPECT_FALSE(ind.fitness);
        EXPECT_TRUE(ind.net.is_well_formed());
    }
}

TEST(Vary, ElitistCopySurvives) {
    auto config = small_config(6);
    Rng rng(config.seed);
    auto pop = initialize(fixture_kb(), config, rng);
    evaluate(pop, fixture_net("exp1_base.semnet"), config.weights);
    const auto& elite = pop.individuals[best_index(pop)];
    const auto next = vary(pop, fixture_kb(), config, rng);
    const auto carried = std::count_if(next.individuals.begin(), next.individuals.end(), [&](const Individual& i) {
        return i.fitness && *i.fitness == *elite.fitness && i.net == elite.net;
    });
    EXPECT_EQ(carried, 1);
}

TEST(ElitismProperty, BestNeverDecreasesAcrossSeeds) {
    const auto base = fixture_net("exp1_base.semnet");
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        auto config = small_config(seed);
        config.pop_size = 16;
        config.max_generations = 6;
        const auto result = run(fixture_kb(), base, config);
        for (std::size_t g = 1; g < result.history.size(); ++g)
            ASSERT_GE(result.history[g].best_fitness, result.history[g - 1].best_fitness) << "seed " << seed;
    }
}

TEST(EvolutionConfig, Validation) {
    EvolutionConfig c;
    EXPECT_NO_THROW(c.validate());
    auto bad = [](auto edit) {
        EvolutionConfig c;
        edit(c);
        EXPECT_THROW(c.validate(), std::invalid_argument);
    };
    bad([](EvolutionConfig& c) { c.p_c = 0.5; });
    bad([](EvolutionConfig& c) { c.pop_size = 0; });
    bad([](EvolutionConfig& c) { c.tournament_size = 0; });
    bad([](EvolutionConfig& c) { c.win_prob = 1.5; });
    bad([](EvolutionConfig& c) { c.c_max = 0; });
    bad([](EvolutionConfig& c) { c.timeout_t = 0; });
}

TEST(StatsCsv, Format) {
    GenerationStats s{3, 1.25, 0.5, 4, 2.0};
    EXPECT_EQ(stats_csv_row(s), "3,1.250000,0.500000,4,2.000000");
    std::ostringstream out;
    const std::vector<GenerationStats> rows{s};
    write_stats_csv(out, rows);
    EXPECT_EQ(out.str(), std::string(kStatsCsvHeader) + "\n3,1.250000,0.500000,4,2.000000\n");
}
