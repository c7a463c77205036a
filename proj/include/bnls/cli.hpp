#pragma once

#include <map>
#include <string>

namespace bnls {

/// Validated run configuration: an experiment name plus numeric/string
/// settings with defaults, overridable from a JSON file and from flags
/// (flags win). Every field is checked before any compute or output starts.
struct RunConfig {
    std::string experiment;
    std::string output_dir = "bnls-out";
    int workers = 0;

    std::map<std::string, double> numbers;  // experiment-specific numerics
    std::map<std::string, std::string> strings;

    double num(const std::string& key) const;
    double num_or(const std::string& key, double fallback) const;
    std::string str_or(const std::string& key, const std::string& fallback) const;

    std::string canonical() const; // deterministic serialization for hashing
};

RunConfig load_config(const std::string& experiment, const std::string& json_path,
                      const std::map<std::string, std::string>& overrides);

/// Execute one experiment: writes CSV data, report.json and summary.txt under
/// the output directory. Returns the process exit status (0 iff every check
/// in the run passed).
int run_experiment(const RunConfig& config);

} // namespace bnls
