#pragma once

#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "memevo/evolution.hpp"

namespace memevo::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat `key = value` text; '#' starts a comment. Later keys win.
std::map<std::string, std::string> parse_key_values(std::istream& in);

/// Settings for `run` that live outside EvolutionConfig.
struct RunInputs {
    std::string kb_path;
    std::string base_path;
    bool seed_given = false;
};

/// Applies one config key (same spelling as the long flag, e.g. "pop-size")
/// to `config` or `inputs`. Manifest-only keys are accepted and ignored;
/// anything else throws ConfigError.
void apply_config_key(EvolutionConfig& config, RunInputs& inputs, const std::string& key, const std::string& value);

/// The manifest body: every config key plus run metadata. Readable back
/// through --config to repeat the run.
std::string render_manifest(const EvolutionConfig& config, const RunInputs& inputs, std::size_t kb_assertions,
                            const std::string& started, const std::string& finished);

/// Entry point shared by the executable and the tests. `args[0]` is the
/// program name. Returns the process exit code.
int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace memevo::cli
