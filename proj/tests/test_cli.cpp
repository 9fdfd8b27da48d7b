#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "memevo/cli.hpp"
#include "oracles.hpp"

using namespace memevo;
using memevo::oracle::fixture;

namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "memevo");
    std::ostringstream out, err;
    const int code = cli::main(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("memevo_cli_test_" + name);
    fs::remove_all(dir);
    return dir;
}

std::vector<std::string> small_run(const fs::path& out, const std::string& seed, const std::string& generations) {
    return {"run",           "--kb",   fixture("kb.tsv"), "--base", fixture("exp1_base.semnet"),
            "--seed",        seed,     "--pop-size",      "20",     "--generations",
            generations,     "--out",  out.string(),      "--quiet"};
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(Cli, RunZeroGenerationsWritesOneRow) {
    const auto dir = scratch("zero");
    const auto r = invoke(small_run(dir, "3", "0"));
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    const auto csv = slurp(dir / "generations.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), kStatsCsvHeader);
    EXPECT_EQ(count_lines(csv), 2u);
    for (const char* f : {"manifest", "best.semnet", "best.dot", "mapping.txt"}) EXPECT_TRUE(fs::exists(dir / f)) << f;
    EXPECT_TRUE(oracle::DotGrammar::accepts(slurp(dir / "best.dot")));
    EXPECT_NO_THROW(load_network_file((dir / "best.semnet").string()));
}

TEST(Cli, SameSeedGivesByteIdenticalCsv) {
    const auto a = scratch("seed_a"), b = scratch("seed_b");
    ASSERT_EQ(invoke(small_run(a, "77", "4")).code, cli::kExitOk);
    ASSERT_EQ(invoke(small_run(b, "77", "4")).code, cli::kExitOk);
    EXPECT_EQ(slurp(a / "generations.csv"), slurp(b / "generations.csv"));
    EXPECT_EQ(count_lines(slurp(a / "generations.csv")), 6u);
    EXPECT_EQ(slurp(a / "best.semnet"), slurp(b / "best.semnet"));
}

TEST(Cli, ManifestReproducesRun) {
    const auto first = scratch("manifest_a"), second = scratch("manifest_b");
    ASSERT_EQ(invoke(small_run(first, "12", "3")).code, cli::kExitOk);
    const auto r = invoke({"run", "--config", (first / "manifest").string(), "--out", second.string(), "--quiet"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(slurp(first / "generations.csv"), slurp(second / "generations.csv"));
}

TEST(Cli, ConfigFileAndFlagOverride) {
    const auto dir = scratch("config");
    fs::create_directories(dir);
    {
        std::ofstream conf(dir / "run.conf");
        conf << "# test\nkb = " << fixture("kb.tsv") << "\nbase = " << fixture("exp1_base.semnet")
             << "\nseed = 5\npop-size = 10\ngenerations = 9\n";
    }
    const auto r = invoke({"run", "--config", (dir / "run.conf").string(), "--generations", "1", "--out",
                           (dir / "out").string(), "--quiet"});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(count_lines(slurp(dir / "out" / "generations.csv")), 3u);
}

TEST(Cli, InvalidProbabilitiesExitWithUsage) {
    const auto dir = scratch("badp");
    auto args = small_run(dir, "1", "1");
    args.insert(args.end(), {"--pc", "0.5", "--pm", "0.4"});
    const auto r = invoke(args);
    EXPECT_EQ(r.code, cli::kExitUsage);
    EXPECT_FALSE(r.err.empty());
}

TEST(Cli, UnknownConfigKeyIsRejected) {
    const auto dir = scratch("badkey");
    fs::create_directories(dir);
    std::ofstream(dir / "bad.conf") << "population = 4\n";
    EXPECT_EQ(invoke({"run", "--config", (dir / "bad.conf").string()}).code, cli::kExitUsage);
}

TEST(Cli, ScoreCommand) {
    const auto solar = fixture("solar.semnet"), atom = fixture("atom.semnet");
    const auto r = invoke({"score", solar, atom});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "fitness 2.400000");
    EXPECT_NE(r.out.find("sun -> nucleus"), std::string::npos);
    EXPECT_NE(r.out.find("planet -> electron"), std::string::npos);

    const auto self = invoke({"score", solar, solar});
    EXPECT_NE(self.out.find("sun -> sun"), std::string::npos);

    const auto dir = scratch("disjoint");
    fs::create_directories(dir);
    std::ofstream(dir / "x.semnet") << "Foo(p, q)\n";
    const auto none = invoke({"score", solar, (dir / "x.semnet").string()});
    EXPECT_EQ(none.out, "fitness 0.000000\n");
}

TEST(Cli, GenRespectsConceptCap) {
    for (const char* seed : {"1", "2", "3", "4"}) {
        const auto r = invoke({"gen", "--kb", fixture("kb.tsv"), "--cmax", "1", "--seed", seed});
        ASSERT_EQ(r.code, cli::kExitOk) << r.err;
        EXPECT_EQ(parse_network(r.out).concepts().size(), 1u);
    }
    const auto a = invoke({"gen", "--kb", fixture("kb.tsv"), "--seed", "9"});
    const auto b = invoke({"gen", "--kb", fixture("kb.tsv"), "--seed", "9"});
    EXPECT_EQ(a.out, b.out);
    EXPECT_LE(parse_network(a.out).concepts().size(), 5u);
}

TEST(Cli, KbStats) {
    const auto r = invoke({"kb-stats", "--kb", fixture("kb.tsv")});
    ASSERT_EQ(r.code, cli::kExitOk) << r.err;
    EXPECT_NE(r.out.find("assertions 113\n"), std::string::npos);
    EXPECT_NE(r.out.find("concepts 56\n"), std::string::npos);
    EXPECT_NE(r.out.find("labels 10\n"), std::string::npos);
    EXPECT_NE(r.out.find("below_min_score 7\n"), std::string::npos);

    EXPECT_EQ(invoke({"kb-stats", "--kb", fixture("kb.tsv"), "--rmin", "1000"}).code, cli::kExitUsage);
    const auto dir = scratch("emptykb");
    fs::create_directories(dir);
    std::ofstream(dir / "empty.tsv") << "";
    EXPECT_EQ(invoke({"kb-stats", "--kb", (dir / "empty.tsv").string()}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"kb-stats", "--kb", (dir / "missing.tsv").string()}).code, cli::kExitUsage);
}

TEST(Cli, MutateAndCrossover) {
    const auto m = invoke({"mutate", "--kb", fixture("kb.tsv"), "--net", fixture("fig1.semnet"), "--seed", "4"});
    ASSERT_EQ(m.code, cli::kExitOk) << m.err;
    EXPECT_EQ(m.out.rfind("# mutation: ", 0), 0u);
    EXPECT_NO_THROW(parse_network(m.out));

    const auto c = invoke({"crossover", "--kb", fixture("kb.tsv"), "--a", fixture("fig2_parent1.semnet"), "--b",
                           fixture("fig2_parent2.semnet"), "--seed", "1"});
    ASSERT_EQ(c.code, cli::kExitOk) << c.err;
    EXPECT_EQ(c.out.rfind("# crossover: subgraph on bird / airplane", 0), 0u);
    EXPECT_NE(c.out.find("# severed: UsedFor(wing, fly)"), std::string::npos);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(invoke({}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"frobnicate"}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"score", fixture("solar.semnet")}).code, cli::kExitUsage);
    EXPECT_EQ(invoke({"--help"}).code, cli::kExitOk);
    EXPECT_EQ(invoke({"run", "--kb", fixture("kb.tsv")}).code, cli::kExitUsage);
}
