#include "memevo/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#ifndef MEMEVO_VERSION
#define MEMEVO_VERSION "0.0.0"
#endif

namespace memevo::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || text.empty())
        throw ConfigError("invalid value '" + text + "' for " + key);
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError("non-finite value for " + key);
    }
    return value;
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
    if (text == "false" || text == "0" || text == "no" || text == "off") return false;
    throw ConfigError("invalid boolean '" + text + "' for " + key);
}

std::string format_real(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

void write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << body;
    if (!f) throw std::runtime_error("failed writing " + path.string());
}

std::string render_mapping(const GMap& gmap) {
    std::string out = "# matched relations: " + std::to_string(gmap.hypotheses.size()) + "\n";
    for (const auto& h : gmap.hypotheses) out += "# " + to_string(h.base) + " ~ " + to_string(h.target) + "\n";
    for (const auto& [b, t] : gmap.concept_map) out += b.text() + " -> " + t.text() + "\n";
    return out;
}

/// Config-bearing flags shared by `run`; every one maps onto a config key.
const std::vector<std::pair<std::string, std::string>> kRunFlags = {
    {"kb", "Knowledge base TSV"},
    {"base", "Base semantic network (.semnet)"},
    {"seed", "64-bit seed; drawn from system entropy when absent"},
    {"pop-size", "Population size"},
    {"pc", "Crossover probability"},
    {"pm", "Mutation probability"},
    {"cmax", "Max concepts of an initial network"},
    {"rmin", "Minimum assertion score"},
    {"timeout", "Feasibility trials before giving up"},
    {"tournament-size", "Tournament size"},
    {"win-prob", "Probability that the fitter entrant wins a contest"},
    {"generations", "Maximum number of generations"},
    {"target-fitness", "Stop once the best fitness reaches this value"},
    {"threads", "Fitness evaluation workers (0 = hardware threads)"},
    {"w-base", "Score per matched relation"},
    {"w-conn", "Score per shared-concept link between matched relations"},
};

struct Session {
    std::ostream& out;
    std::ostream& err;
};

int cmd_run(Session& io, const std::map<std::string, std::string>& flags, const std::string& config_path,
            const std::string& out_dir, bool no_elitism, bool quiet) {
    EvolutionConfig config;
    config.max_generations = 50;
    RunInputs inputs;
    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw ConfigError("cannot open config file '" + config_path + "'");
            for (const auto& [k, v] : parse_key_values(in)) apply_config_key(config, inputs, k, v);
        }
        for (const auto& [k, v] : flags) apply_config_key(config, inputs, k, v);
        if (no_elitism) config.elitism = false;
        if (inputs.kb_path.empty()) throw ConfigError("--kb is required");
        if (inputs.base_path.empty()) throw ConfigError("--base is required");
        if (!inputs.seed_given) config.seed = entropy_seed();
        config.validate();
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    std::optional<KnowledgeBase> kb;
    SemanticNetwork base;
    try {
        kb.emplace(KnowledgeBase::load_file(inputs.kb_path, config.r_min));
        base = load_network_file(inputs.base_path);
        std::filesystem::create_directories(out_dir);
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (kb->report().self_loops_dropped > 0)
        io.err << "warning: dropped " << kb->report().self_loops_dropped << " self-loop assertion(s)\n";

    const auto started = utc_now();
    const auto result = run(*kb, base, config, [&](const GenerationStats& s) {
        if (!quiet) io.out << stats_csv_row(s) << '\n';
    });
    const auto finished = utc_now();

    const std::filesystem::path dir(out_dir);
    std::ostringstream csv;
    write_stats_csv(csv, result.history);
    write_file(dir / "generations.csv", csv.str());
    write_file(dir / "manifest", render_manifest(config, inputs, kb->assertions().size(), started, finished));
    write_file(dir / "best.semnet", render_network(result.best.net));
    write_file(dir / "best.dot", to_dot(result.best.net));
    write_file(dir / "mapping.txt", render_mapping(result.best_mapping));
    char best[32];
    std::snprintf(best, sizeof best, "%.6f", result.best.fitness.value_or(0.0));
    io.out << "best fitness " << best << " at generation "
           << result.best_generation << ", " << result.best_mapping.hypotheses.size() << " relations mapped\n";
    return kExitOk;
}

int cmd_score(Session& io, const std::string& base_path, const std::string& target_path, const ScoreWeights& w) {
    try {
        const auto base = load_network_file(base_path);
        const auto target = load_network_file(target_path);
        const auto result = analogy(base, target, w);
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.6f", result.fitness);
        io.out << "fitness " << buf << '\n';
        for (const auto& [b, t] : result.best.concept_map) io.out << b.text() << " -> " << t.text() << '\n';
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_gen(Session& io, const std::string& kb_path, double r_min, const VariationParams& params,
            std::optional<std::uint64_t> seed) {
    try {
        params.validate();
        const auto kb = KnowledgeBase::load_file(kb_path, r_min);
        Rng rng(seed.value_or(entropy_seed()));
        io.out << render_network(random_network(kb, params, rng));
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_kb_stats(Session& io, const std::string& kb_path, double r_min) {
    try {
        const auto kb = KnowledgeBase::load_file(kb_path, r_min);
        const auto& rep = kb.report();
        io.out << "assertions " << kb.assertions().size() << '\n'
               << "concepts " << kb.concepts().size() << '\n'
               << "labels " << kb.labels().size() << '\n'
               << "below_min_score " << rep.below_min_score << '\n'
               << "self_loops_dropped " << rep.self_loops_dropped << '\n'
               << "duplicates_collapsed " << rep.duplicates_collapsed << '\n';
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_mutate(Session& io, const std::string& kb_path, double r_min, const std::string& net_path,
               const VariationParams& params, std::optional<std::uint64_t> seed) {
    try {
        params.validate();
        const auto kb = KnowledgeBase::load_file(kb_path, r_min);
        const auto parent = load_network_file(net_path);
        Rng rng(seed.value_or(entropy_seed()));
        const auto outcome = mutate_traced(parent, kb, params, rng);
        io.out << "# mutation: " << (outcome.applied ? to_string(*outcome.applied) : "none (parent returned)")
               << '\n'
               << render_network(outcome.child);
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

int cmd_crossover(Session& io, const std::string& kb_path, double r_min, const std::string& a_path,
                  const std::string& b_path, std::optional<std::uint64_t> seed) {
    try {
        const auto kb = KnowledgeBase::load_file(kb_path, r_min);
        const auto a = load_network_file(a_path);
        const auto b = load_network_file(b_path);
        Rng rng(seed.value_or(entropy_seed()));
        const auto outcome = crossover(a, b, kb, rng);
        io.out << "# crossover: " << to_string(outcome.kind);
        if (outcome.pair) io.out << " on " << outcome.pair->first.text() << " / " << outcome.pair->second.text();
        io.out << '\n';
        for (const auto& r : outcome.severed) io.out << "# severed: " << to_string(r) << '\n';
        for (std::size_t i = 0; i < outcome.children.size(); ++i)
            io.out << "# child " << (i + 1) << '\n' << render_network(outcome.children[i]);
    } catch (const std::exception& e) {
        io.err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitOk;
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& in) {
    std::map<std::string, std::string> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(line_no) + ": expected key = value");
        auto key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("config line " + std::to_string(line_no) + ": empty key");
        out[key] = trim(line.substr(eq + 1));
    }
    return out;
}

void apply_config_key(EvolutionConfig& c, RunInputs& inputs, const std::string& key, const std::string& value) {
    if (key == "kb") inputs.kb_path = value;
    else if (key == "base") inputs.base_path = value;
    else if (key == "seed") {
        c.seed = parse_number<std::uint64_t>(key, value);
        inputs.seed_given = true;
    }
    else if (key == "pop-size") c.pop_size = parse_number<std::size_t>(key, value);
    else if (key == "pc") c.p_c = parse_number<double>(key, value);
    else if (key == "pm") c.p_m = parse_number<double>(key, value);
    else if (key == "cmax") c.c_max = parse_number<std::size_t>(key, value);
    else if (key == "rmin") c.r_min = parse_number<double>(key, value);
    else if (key == "timeout") c.timeout_t = parse_number<std::size_t>(key, value);
    else if (key == "tournament-size") c.tournament_size = parse_number<std::size_t>(key, value);
    else if (key == "win-prob") c.win_prob = parse_number<double>(key, value);
    else if (key == "generations") c.max_generations = parse_number<std::size_t>(key, value);
    else if (key == "target-fitness") {
        if (value.empty() || value == "none") c.target_fitness.reset();
        else c.target_fitness = parse_number<double>(key, value);
    }
    else if (key == "elitism") c.elitism = parse_bool(key, value);
    else if (key == "threads") c.threads = parse_number<std::size_t>(key, value);
    else if (key == "w-base") c.weights.base = parse_number<double>(key, value);
    else if (key == "w-conn") c.weights.connectivity = parse_number<double>(key, value);
    else if (key == "engine-version" || key == "kb-assertions" || key == "started" || key == "finished") {
        // manifest metadata
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

std::string render_manifest(const EvolutionConfig& c, const RunInputs& inputs, std::size_t kb_assertions,
                            const std::string& started, const std::string& finished) {
    std::ostringstream m;
    m << "# memevo run manifest; rerun with: memevo run --config <this file> --out <dir>\n"
      << "engine-version = " << MEMEVO_VERSION << '\n'
      << "kb = " << inputs.kb_path << '\n'
      << "kb-assertions = " << kb_assertions << '\n'
      << "base = " << inputs.base_path << '\n'
      << "seed = " << c.seed << '\n'
      << "pop-size = " << c.pop_size << '\n'
      << "pc = " << format_real(c.p_c) << '\n'
      << "pm = " << format_real(c.p_m) << '\n'
      << "cmax = " << c.c_max << '\n'
      << "rmin = " << format_real(c.r_min) << '\n'
      << "timeout = " << c.timeout_t << '\n'
      << "tournament-size = " << c.tournament_size << '\n'
      << "win-prob = " << format_real(c.win_prob) << '\n'
      << "elitism = " << (c.elitism ? "true" : "false") << '\n'
      << "generations = " << c.max_generations << '\n'
      << "target-fitness = " << (c.target_fitness ? format_real(*c.target_fitness) : "none") << '\n'
      << "threads = " << c.threads << '\n'
      << "w-base = " << format_real(c.weights.base) << '\n'
      << "w-conn = " << format_real(c.weights.connectivity) << '\n'
      << "started = " << started << '\n'
      << "finished = " << finished << '\n';
    return m.str();
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Session io{out, err};
    CLI::App app{"Evolves semantic networks toward analogies of a base network", "memevo"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(MEMEVO_VERSION));

    // run
    auto* run_cmd = app.add_subcommand("run", "Run the memetic algorithm and write a run directory");
    std::map<std::string, std::string> run_values;
    std::map<std::string, CLI::Option*> run_opts;
    for (const auto& [name, help] : kRunFlags) run_opts[name] = run_cmd->add_option("--" + name, run_values[name], help);
    std::string config_path, out_dir = "run";
    bool no_elitism = false, quiet = false;
    run_cmd->add_option("--config", config_path, "key = value config file (flags override it)");
    run_cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    run_cmd->add_flag("--no-elitism", no_elitism, "Disable elitism");
    run_cmd->add_flag("--quiet", quiet, "Do not echo per-generation stats");

    // score
    auto* score_cmd = app.add_subcommand("score", "Analogy fitness of a target network against a base network");
    std::string score_base, score_target;
    ScoreWeights weights;
    score_cmd->add_option("base", score_base, "Base network")->required();
    score_cmd->add_option("target", score_target, "Target network")->required();
    score_cmd->add_option("--w-base", weights.base, "Score per matched relation")->capture_default_str();
    score_cmd->add_option("--w-conn", weights.connectivity, "Score per shared-concept link")->capture_default_str();

    // shared KB / variation flags for the generator and debug commands
    std::string kb_path;
    double r_min = 2.0;
    VariationParams params;
    std::optional<std::uint64_t> seed;
    auto add_kb_flags = [&](CLI::App* cmd) {
        cmd->add_option("--kb", kb_path, "Knowledge base TSV")->required();
        cmd->add_option("--rmin", r_min, "Minimum assertion score")->capture_default_str();
    };
    auto add_variation_flags = [&](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "64-bit seed");
        cmd->add_option("--timeout", params.timeout_t, "Feasibility trials")->capture_default_str();
    };

    auto* gen_cmd = app.add_subcommand("gen", "Emit one random network grown from the knowledge base");
    add_kb_flags(gen_cmd);
    add_variation_flags(gen_cmd);
    gen_cmd->add_option("--cmax", params.c_max, "Max concepts")->capture_default_str();

    auto* stats_cmd = app.add_subcommand("kb-stats", "Counts after score filtering");
    add_kb_flags(stats_cmd);

    auto* mutate_cmd = app.add_subcommand("mutate", "Apply one mutation to a network");
    std::string net_path;
    add_kb_flags(mutate_cmd);
    add_variation_flags(mutate_cmd);
    mutate_cmd->add_option("--net", net_path, "Parent network")->required();

    auto* cross_cmd = app.add_subcommand("crossover", "Cross two networks");
    std::string a_path, b_path;
    add_kb_flags(cross_cmd);
    cross_cmd->add_option("--seed", seed, "64-bit seed");
    cross_cmd->add_option("--a", a_path, "First parent")->required();
    cross_cmd->add_option("--b", b_path, "Second parent")->required();

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    if (*run_cmd) {
        std::map<std::string, std::string> given;
        for (const auto& [name, opt] : run_opts)
            if (opt->count() > 0) given[name] = run_values[name];
        return cmd_run(io, given, config_path, out_dir, no_elitism, quiet);
    }
    if (*score_cmd) return cmd_score(io, score_base, score_target, weights);
    if (*gen_cmd) return cmd_gen(io, kb_path, r_min, params, seed);
    if (*stats_cmd) return cmd_kb_stats(io, kb_path, r_min);
    if (*mutate_cmd) return cmd_mutate(io, kb_path, r_min, net_path, params, seed);
    if (*cross_cmd) return cmd_crossover(io, kb_path, r_min, a_path, b_path, seed);
    return kExitUsage;
}

}  // namespace memevo::cli
