#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "korsum/config.hpp"
#include "korsum/csv.hpp"
#include "korsum/svg.hpp"

using namespace korsum;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerdict = 1;
constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        const double v = std::stod(item, &used);
        if (used != item.size()) {
            throw config_error("cannot parse number '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw config_error("empty number list");
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw config_error("cannot open output file '" + path + "'");
    }
    out << content;
}

int cmd_regularity(const std::string& method_name, const std::string& rho_spec,
                   std::size_t m_max, const std::string& schedule_spec) {
    PowerSeriesMethod method;
    try {
        if (!rho_spec.empty()) {
            method = inline_method(parse_number_list(rho_spec));
        } else {
            method = method_by_name(method_name);
        }
        ApproachSchedule schedule;
        if (!schedule_spec.empty()) {
            schedule.points = parse_number_list(schedule_spec);
        } else {
            schedule = default_schedule(method);
        }
        const RegularityReport report = regularity_check(method, m_max, schedule);

        std::printf("# regularity of method '%s' (threshold 1e-3 on the final ratio)\n",
                    method.label.c_str());
        std::printf("%6s  %14s  %14s  %6s\n", "m", "ratio(first y)", "ratio(last y)", "pass");
        for (const auto& row : report.rows) {
            std::printf("%6zu  %14.6e  %14.6e  %6s\n", row.m, row.ratios.front(),
                        row.ratios.back(), row.pass ? "yes" : "NO");
        }
        std::printf("result: %s\n", report.all_pass ? "regular" : "not regular");
        return report.all_pass ? kExitOk : kExitVerdict;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }
}

int cmd_run(const std::string& config_path, std::string csv_path, std::string svg_path) {
    ExperimentConfig exp;
    ParsedConfig parsed;
    try {
        parsed = load_config_file(config_path);
        exp = experiment_from_config(parsed);
        if (csv_path.empty()) {
            csv_path = config_output_path(parsed, "csv");
        }
        if (svg_path.empty()) {
            svg_path = config_output_path(parsed, "svg");
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }

    ErrorTable table;
    try {
        table = run_experiment(exp);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "numerical failure: %s\n", e.what());
        return kExitNumerical;
    }

    for (std::size_t i = 0; i < table.functions.size(); ++i) {
        std::printf("%-12s %s\n", table.functions[i].c_str(),
                    verdict_name(table.verdicts[i]));
    }
    for (const auto& row : table.rows) {
        if (row.failed) {
            std::printf("row %.6g failed: %s\n", row.parameter, row.note.c_str());
        }
    }

    try {
        if (!csv_path.empty()) {
            const std::string path = resolve_output_path(csv_path);
            write_file(path, error_table_to_csv(table));
            std::printf("csv: %s\n", path.c_str());
        }
        if (!svg_path.empty()) {
            const std::string path = resolve_output_path(svg_path);
            const AxisTransform axis = axis_for_mode(exp.mode, exp.method);
            const std::string title = exp.family.label + " family";
            write_file(path, render_error_table_svg(table, axis, exp.method.radius, title));
            std::printf("svg: %s\n", path.c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    }

    if (table.any_failed()) {
        return kExitNumerical;
    }
    return table.all_converging() ? kExitOk : kExitVerdict;
}

int cmd_rates(const std::string& config_path, std::string csv_path) {
    RateReport report;
    try {
        const ParsedConfig parsed = load_config_file(config_path);
        const ExperimentConfig exp = experiment_from_config(parsed);
        const RatesSetup setup = rates_from_config(parsed);
        if (csv_path.empty()) {
            csv_path = config_output_path(parsed, "csv");
        }

        if (exp.mode == ExperimentMode::power_series) {
            ApproachSchedule schedule{exp.schedule};
            report = rate_report_power_series(exp.method, exp.family, setup.phi,
                                              setup.rate_error, setup.rate_modulus, schedule,
                                              exp.grid, exp.ctl, exp.exec);
        } else if (exp.mode == ExperimentMode::integral) {
            report = rate_report_integral(exp.kernel, exp.method, exp.family, setup.phi,
                                          setup.rate_error, setup.rate_modulus, exp.schedule,
                                          exp.grid, exp.quad, exp.ctl, exp.exec);
        } else {
            throw config_error("rates need power_series or integral mode");
        }
        if (!csv_path.empty()) {
            const std::string path = resolve_output_path(csv_path);
            write_file(path, rate_report_to_csv(report));
            std::printf("csv: %s\n", path.c_str());
        }
    } catch (const config_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitConfig;
    }

    std::fputs(rate_report_to_csv(report).c_str(), stdout);
    std::printf("error candidate:   %s\n", report.pass_error ? "pass" : "fail");
    std::printf("modulus candidate: %s\n", report.pass_modulus ? "pass" : "fail");
    std::printf("overall:           %s\n", report.pass_overall ? "pass" : "fail");
    return report.pass() ? kExitOk : kExitVerdict;
}

int cmd_check(bool bounds, bool mu, bool modulus, std::size_t m_max) {
    bool ok = true;
    if (bounds) {
        std::vector<std::size_t> ms;
        for (std::size_t m = 1; m <= m_max; ++m) {
            ms.push_back(m);
        }
        const auto violations = holhos_bound_check(ms, HalfLineGrid::default_grid());
        std::printf("bounds: %zu violation(s) over m in [1,%zu]\n", violations.size(), m_max);
        for (std::size_t i = 0; i < violations.size() && i < 5; ++i) {
            const auto& v = violations[i];
            std::printf("  m=%zu xi=%.6g %s lhs=%.17g rhs=%.17g\n", v.m, v.xi, v.which.c_str(),
                        v.lhs, v.rhs);
        }
        ok = ok && violations.empty();
    }
    if (mu) {
        double worst = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double t = 0.1 * i;
            double brute = 0.0;
            for (int j = 0; j <= 60000; ++j) {
                const double xi = j * 1e-3;
                const double d = std::exp(-t) - std::exp(-xi);
                brute = std::max(brute, d * d);
            }
            worst = std::max(worst, std::abs(mu_sup(t) - brute));
        }
        std::printf("mu: worst |closed - brute| = %.3e\n", worst);
        ok = ok && worst < 1e-6;
    }
    if (modulus) {
        double worst = 0.0;
        for (const char* name : {"phi1", "phi2", "inv_linear"}) {
            const LimitFunction f = builtin_function(name);
            for (double delta : {0.1, 0.3, 0.5}) {
                worst = std::max(worst,
                                 std::abs(modulus_hat(f, delta, false) -
                                          modulus_hat(f, delta, true)));
            }
        }
        std::printf("modulus: worst |fast - brute| = %.3e\n", worst);
        ok = ok && worst < 1e-3;
    }
    return ok ? kExitOk : kExitVerdict;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Korovkin-type approximation under power-series and integral summability"};
    app.require_subcommand(1);

    auto* reg = app.add_subcommand("regularity", "power-series regularity diagnostic");
    std::string method_name = "borel";
    std::string rho_spec;
    std::string schedule_spec;
    std::size_t m_max = 10;
    reg->add_option("--method", method_name, "preset method: abel or borel");
    reg->add_option("--rho", rho_spec, "inline coefficients, e.g. 1,0,0");
    reg->add_option("--m-max", m_max, "largest coefficient index to test");
    reg->add_option("--schedule", schedule_spec, "comma-separated y values approaching R");

    auto* run = app.add_subcommand("run", "run a convergence experiment from a config file");
    std::string run_config, run_csv, run_svg;
    run->add_option("config", run_config, "experiment config file")->required();
    run->add_option("--csv", run_csv, "error table output (CSV)");
    run->add_option("--svg", run_svg, "convergence plot output (SVG)");

    auto* rates = app.add_subcommand("rates", "rate-of-convergence report from a config file");
    std::string rates_config, rates_csv;
    rates->add_option("config", rates_config, "experiment config with a [rates] section")
        ->required();
    rates->add_option("--csv", rates_csv, "rate report output (CSV)");

    auto* check = app.add_subcommand("check", "built-in property suites");
    bool check_bounds = false, check_mu = false, check_modulus = false;
    std::size_t check_m_max = 1000;
    check->add_flag("--bounds", check_bounds, "inequality chains for beta_m and eth_m");
    check->add_flag("--mu", check_mu, "mu(t) closed form against grid brute force");
    check->add_flag("--modulus", check_modulus, "fast modulus against the double-grid oracle");
    check->add_option("--m-max", check_m_max, "bounds sweep upper index");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    if (reg->parsed()) {
        return cmd_regularity(method_name, rho_spec, m_max, schedule_spec);
    }
    if (run->parsed()) {
        return cmd_run(run_config, run_csv, run_svg);
    }
    if (rates->parsed()) {
        return cmd_rates(rates_config, rates_csv);
    }
    if (check->parsed()) {
        if (!check_bounds && !check_mu && !check_modulus) {
            std::fprintf(stderr, "error: pick at least one of --bounds, --mu, --modulus\n");
            return kExitConfig;
        }
        return cmd_check(check_bounds, check_mu, check_modulus, check_m_max);
    }
    return kExitConfig;
}
