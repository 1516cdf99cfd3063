#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "korsum/korovkin.hpp"

namespace korsum {

/// Rejected config input; the message names the offending key.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Values of the key-value run-configuration format: numbers, strings,
/// booleans, and homogeneous arrays of numbers or strings.
using ConfigValue =
    std::variant<double, std::string, bool, std::vector<double>, std::vector<std::string>>;

struct ParsedConfig {
    // section -> key -> value; top-level keys live under ""
    std::map<std::string, std::map<std::string, ConfigValue>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const ConfigValue* find(const std::string& section, const std::string& key) const;
};

ParsedConfig parse_config_text(const std::string& text);
ParsedConfig load_config_file(const std::string& path);

/// Builds a validated experiment; unknown sections/keys are rejected with
/// the offending name.
ExperimentConfig experiment_from_config(const ParsedConfig& cfg);

struct RatesSetup {
    LimitFunction phi;
    RateCandidate rate_error;   // sigma (power series) / pi_1 (integral)
    RateCandidate rate_modulus; // lambda / pi_2
};

RatesSetup rates_from_config(const ParsedConfig& cfg);

/// [output] paths; empty when absent.  Relative paths are resolved against
/// KORSUM_OUT_DIR when that variable is set.
std::string config_output_path(const ParsedConfig& cfg, const std::string& key);
std::string resolve_output_path(const std::string& path);

} // namespace korsum
