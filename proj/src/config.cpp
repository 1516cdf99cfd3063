#include "korsum/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace korsum {

bool ParsedConfig::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const ConfigValue* ParsedConfig::find(const std::string& section, const std::string& key) const {
    const auto sit = sections.find(section);
    if (sit == sections.end()) {
        return nullptr;
    }
    const auto kit = sit->second.find(key);
    return kit == sit->second.end() ? nullptr : &kit->second;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// strips a trailing comment that is not inside a quoted string
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') {
            quoted = !quoted;
        } else if (line[i] == '#' && !quoted) {
            return line.substr(0, i);
        }
    }
    return line;
}

ConfigValue parse_scalar(const std::string& token, int lineno) {
    if (token.size() >= 2 && token.front() == '"' && token.back() == '"') {
        return token.substr(1, token.size() - 2);
    }
    if (token == "true") return true;
    if (token == "false") return false;
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used == token.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw config_error("config line " + std::to_string(lineno) + ": cannot parse value '" +
                       token + "'");
}

ConfigValue parse_value(const std::string& text, int lineno) {
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') {
            throw config_error("config line " + std::to_string(lineno) + ": unterminated array");
        }
        std::vector<double> numbers;
        std::vector<std::string> strings;
        const std::string inner = text.substr(1, text.size() - 2);
        std::string item;
        bool quoted = false;
        std::vector<std::string> items;
        for (char c : inner) {
            if (c == '"') quoted = !quoted;
            if (c == ',' && !quoted) {
                items.push_back(item);
                item.clear();
            } else {
                item += c;
            }
        }
        if (!trim(item).empty()) {
            items.push_back(item);
        }
        for (auto& raw : items) {
            const ConfigValue v = parse_scalar(trim(raw), lineno);
            if (std::holds_alternative<double>(v)) {
                numbers.push_back(std::get<double>(v));
            } else if (std::holds_alternative<std::string>(v)) {
                strings.push_back(std::get<std::string>(v));
            } else {
                throw config_error("config line " + std::to_string(lineno) +
                                   ": arrays may hold numbers or strings only");
            }
        }
        if (!numbers.empty() && !strings.empty()) {
            throw config_error("config line " + std::to_string(lineno) +
                               ": mixed-type array");
        }
        if (!strings.empty()) {
            return strings;
        }
        return numbers;
    }
    return parse_scalar(text, lineno);
}

} // namespace

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        line = trim(strip_comment(line));
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw config_error("config line " + std::to_string(lineno) +
                                   ": malformed section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty()) {
                throw config_error("config line " + std::to_string(lineno) + ": empty section");
            }
            cfg.sections[section]; // record even if empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw config_error("config line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw config_error("config line " + std::to_string(lineno) + ": empty key or value");
        }
        if (cfg.sections[section].count(key)) {
            throw config_error("config line " + std::to_string(lineno) + ": duplicate key '" +
                               key + "'");
        }
        cfg.sections[section][key] = parse_value(value, lineno);
    }
    return cfg;
}

ParsedConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

namespace {

const std::map<std::string, std::set<std::string>>& allowed_keys() {
    static const std::map<std::string, std::set<std::string>> allowed = {
        {"experiment", {"family", "mode", "method", "kernel", "route"}},
        {"schedule", {"points", "classical_horizon"}},
        {"grid", {"cutoff", "nodes", "include_infinity", "refine"}},
        {"controls",
         {"tail_tolerance", "max_terms", "quad_tolerance", "max_subdivisions", "y_cutoff"}},
        {"functions", {"include"}},
        {"rates", {"function", "rate_error", "rate_modulus"}},
        {"output", {"csv", "svg"}},
    };
    return allowed;
}

void reject_unknown(const ParsedConfig& cfg) {
    for (const auto& [section, keys] : cfg.sections) {
        const auto it = allowed_keys().find(section);
        if (it == allowed_keys().end()) {
            throw config_error("unknown config section '" + section + "'");
        }
        for (const auto& [key, value] : keys) {
            (void)value;
            if (!it->second.count(key)) {
                throw config_error("unknown config key '" + section + "." + key + "'");
            }
        }
    }
    if (cfg.sections.count("") && !cfg.sections.at("").empty()) {
        throw config_error("unknown config key '" + cfg.sections.at("").begin()->first +
                           "' outside any section");
    }
}

double get_number(const ParsedConfig& cfg, const std::string& section, const std::string& key,
                  double fallback) {
    const ConfigValue* v = cfg.find(section, key);
    if (!v) {
        return fallback;
    }
    if (!std::holds_alternative<double>(*v)) {
        throw config_error("config key '" + section + "." + key + "' must be a number");
    }
    return std::get<double>(*v);
}

bool get_bool(const ParsedConfig& cfg, const std::string& section, const std::string& key,
              bool fallback) {
    const ConfigValue* v = cfg.find(section, key);
    if (!v) {
        return fallback;
    }
    if (!std::holds_alternative<bool>(*v)) {
        throw config_error("config key '" + section + "." + key + "' must be true or false");
    }
    return std::get<bool>(*v);
}

std::string get_string(const ParsedConfig& cfg, const std::string& section,
                       const std::string& key, const std::string& fallback) {
    const ConfigValue* v = cfg.find(section, key);
    if (!v) {
        return fallback;
    }
    if (!std::holds_alternative<std::string>(*v)) {
        throw config_error("config key '" + section + "." + key + "' must be a string");
    }
    return std::get<std::string>(*v);
}

} // namespace

ExperimentConfig experiment_from_config(const ParsedConfig& cfg) {
    reject_unknown(cfg);

    ExperimentConfig exp;
    try {
        const std::string family = get_string(cfg, "experiment", "family", "szasz_shifted");
        exp.family = family_by_name(family);

        const std::string mode = get_string(cfg, "experiment", "mode", "power_series");
        if (mode == "classical") {
            exp.mode = ExperimentMode::classical;
        } else if (mode == "power_series") {
            exp.mode = ExperimentMode::power_series;
        } else if (mode == "integral") {
            exp.mode = ExperimentMode::integral;
        } else {
            throw config_error("experiment.mode must be classical, power_series or integral");
        }

        exp.method = method_by_name(get_string(cfg, "experiment", "method", "borel"));
        const std::string kernel = get_string(cfg, "experiment", "kernel", "abel");
        if (kernel == "abel") {
            exp.kernel = preset_abel_kernel();
        } else if (kernel == "zero") {
            exp.kernel = zero_kernel();
        } else {
            throw config_error("experiment.kernel must be abel or zero");
        }
        const std::string route = get_string(cfg, "experiment", "route", "auto");
        if (route == "auto") {
            exp.route = TransformRoute::automatic;
        } else if (route == "closed") {
            exp.route = TransformRoute::closed;
        } else if (route == "quadrature") {
            exp.route = TransformRoute::quadrature;
        } else {
            throw config_error("experiment.route must be auto, closed or quadrature");
        }

        if (const ConfigValue* pts = cfg.find("schedule", "points")) {
            if (!std::holds_alternative<std::vector<double>>(*pts)) {
                throw config_error("schedule.points must be a numeric array");
            }
            exp.schedule = std::get<std::vector<double>>(*pts);
        } else if (exp.mode == ExperimentMode::power_series) {
            exp.schedule = default_schedule(exp.method).points;
        } else if (exp.mode == ExperimentMode::integral) {
            exp.schedule = default_s_schedule();
        }
        exp.classical_horizon =
            static_cast<std::size_t>(get_number(cfg, "schedule", "classical_horizon", 64.0));

        const double cutoff = get_number(cfg, "grid", "cutoff", 40.0);
        const auto nodes = static_cast<std::size_t>(get_number(cfg, "grid", "nodes", 2001.0));
        const bool include_inf = get_bool(cfg, "grid", "include_infinity", true);
        exp.grid = HalfLineGrid::uniform(cutoff, nodes, include_inf);
        exp.refine_grid = get_bool(cfg, "grid", "refine", false);

        const double tail = get_number(cfg, "controls", "tail_tolerance", 1e-12);
        const auto max_terms =
            static_cast<std::size_t>(get_number(cfg, "controls", "max_terms", 1e6));
        exp.ctl = SummationControl(tail, max_terms);
        exp.quad.abs_tolerance = get_number(cfg, "controls", "quad_tolerance", 1e-8);
        exp.quad.max_subdivisions =
            static_cast<int>(get_number(cfg, "controls", "max_subdivisions", 4000.0));
        exp.quad.y_cutoff = get_number(cfg, "controls", "y_cutoff", 0.0);
        exp.quad.validate();

        if (const ConfigValue* inc = cfg.find("functions", "include")) {
            if (!std::holds_alternative<std::vector<std::string>>(*inc)) {
                throw config_error("functions.include must be an array of names");
            }
            for (const auto& name : std::get<std::vector<std::string>>(*inc)) {
                exp.test_set.push_back(builtin_function(name));
            }
        }

        exp.validate();
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return exp;
}

RatesSetup rates_from_config(const ParsedConfig& cfg) {
    RatesSetup setup;
    try {
        setup.phi = builtin_function(get_string(cfg, "rates", "function", "phi0"));
        setup.rate_error = parse_candidate(get_string(cfg, "rates", "rate_error", "power(0.25)"));
        setup.rate_modulus =
            parse_candidate(get_string(cfg, "rates", "rate_modulus", "power(0.25)"));
    } catch (const config_error&) {
        throw;
    } catch (const std::exception& e) {
        throw config_error(e.what());
    }
    return setup;
}

std::string config_output_path(const ParsedConfig& cfg, const std::string& key) {
    return get_string(cfg, "output", key, "");
}

std::string resolve_output_path(const std::string& path) {
    if (path.empty()) {
        return path;
    }
    const char* base = std::getenv("KORSUM_OUT_DIR");
    if (!base || *base == '\0' || std::filesystem::path(path).is_absolute()) {
        return path;
    }
    return (std::filesystem::path(base) / path).string();
}

} // namespace korsum
