#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

#include "korsum/config.hpp"
#include "korsum/csv.hpp"
#include "korsum/svg.hpp"

using namespace korsum;

namespace {

const char* kExampleConfig = R"(
# alternating family under the Borel transform
[experiment]
family = "alternating"
mode = "power_series"
method = "borel"

[schedule]
points = [1, 5, 10, 20]

[grid]
cutoff = 40.0
nodes = 201
include_infinity = true

[controls]
tail_tolerance = 1e-12
max_terms = 1000000
)";

ErrorTable tiny_table() {
    ExperimentConfig cfg = experiment_from_config(parse_config_text(kExampleConfig));
    cfg.exec = Exec::serial;
    return run_experiment(cfg);
}

} // namespace

TEST_CASE("config parsing and experiment construction") {
    const ParsedConfig cfg = parse_config_text(kExampleConfig);
    CHECK(cfg.has("experiment", "family"));
    ExperimentConfig exp = experiment_from_config(cfg);
    CHECK(exp.mode == ExperimentMode::power_series);
    CHECK(exp.schedule == std::vector<double>{1.0, 5.0, 10.0, 20.0});
    CHECK(exp.grid.nodes.size() == 201);
    CHECK(exp.test_set.size() == 3);
}

TEST_CASE("unknown keys are rejected by name") {
    const char* bad = "[grid]\ncutofff = 40\n";
    try {
        experiment_from_config(parse_config_text(bad));
        FAIL("expected config_error");
    } catch (const config_error& e) {
        CHECK(std::string(e.what()).find("grid.cutofff") != std::string::npos);
    }

    CHECK_THROWS_AS(experiment_from_config(parse_config_text("[grd]\ncutoff = 40\n")),
                    config_error);
    CHECK_THROWS_AS(experiment_from_config(parse_config_text("cutoff = 40\n")), config_error);
}

TEST_CASE("config syntax errors") {
    CHECK_THROWS_AS(parse_config_text("[grid\nnodes = 3\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[grid]\nnodes\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[grid]\nnodes = \n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[grid]\nnodes = 3\nnodes = 4\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[functions]\ninclude = [1, \"phi0\"]\n"), config_error);
    CHECK_THROWS_AS(parse_config_text("[schedule]\npoints = [1, 2\n"), config_error);
    CHECK_NOTHROW(parse_config_text("[grid]\nnodes = 3 # trailing comment\n"));
}

TEST_CASE("config value validation") {
    CHECK_THROWS_AS(
        experiment_from_config(parse_config_text("[controls]\ntail_tolerance = -1e-9\n")),
        config_error);
    CHECK_THROWS_AS(experiment_from_config(parse_config_text("[experiment]\nmode = \"modal\"\n")),
                    config_error);
    CHECK_THROWS_AS(
        experiment_from_config(parse_config_text("[functions]\ninclude = [\"phi9\"]\n")),
        config_error);
    // schedule beyond the Abel radius
    const char* bad_sched = "[experiment]\nmethod = \"abel\"\n[schedule]\npoints = [0.5, 2.0]\n";
    CHECK_THROWS_AS(experiment_from_config(parse_config_text(bad_sched)), config_error);
}

TEST_CASE("rates section") {
    const char* text = "[rates]\nfunction = \"phi1\"\nrate_error = \"power(0.5)\"\n";
    const RatesSetup setup = rates_from_config(parse_config_text(text));
    CHECK(setup.phi.label == "phi1");
    CHECK(setup.rate_error.fn(3.0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_THROWS_AS(rates_from_config(parse_config_text("[rates]\nrate_error = \"hat(1)\"\n")),
                    config_error);
}

TEST_CASE("error table CSV round trip is lossless") {
    const ErrorTable table = tiny_table();
    const std::string csv = error_table_to_csv(table);
    CHECK(csv.rfind("parameter,function,sup_error,verdict\n", 0) == 0);

    const ErrorTable parsed = error_table_from_csv(csv);
    CHECK(error_table_to_csv(parsed) == csv);
    CHECK(parsed.functions == table.functions);
    REQUIRE(parsed.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        CHECK(parsed.rows[r].parameter == table.rows[r].parameter);
        for (std::size_t i = 0; i < table.functions.size(); ++i) {
            CHECK(parsed.rows[r].errors[i] == table.rows[r].errors[i]);
        }
    }
}

TEST_CASE("csv parser rejects malformed input") {
    CHECK_THROWS(error_table_from_csv("nonsense\n"));
    CHECK_THROWS(error_table_from_csv("parameter,function,sup_error,verdict\n1,phi0\n"));
    CHECK_THROWS(error_table_from_csv(
        "parameter,function,sup_error,verdict\n1,phi0,zero,converging\n"));
}

TEST_CASE("rate report CSV shape") {
    RateReport rep;
    rep.parameters = {9.0, 99.0};
    rep.error_phi0 = {0.3, 0.09};
    rep.delta_values = {0.9, 0.95};
    rep.modulus_values = {0.0, 0.0};
    rep.composite_bound = {0.3, 0.09};
    rep.empirical_error = {0.3, 0.09};
    rep.ratio_error = {0.5, 0.28};
    rep.ratio_modulus = {0.0, 0.0};
    rep.ratio_overall = {0.5, 0.28};
    const std::string csv = rate_report_to_csv(rep);
    CHECK(csv.rfind("parameter,delta,modulus,bound,error,ratio_to_candidate\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}

TEST_CASE("format_double round-trips doubles exactly") {
    for (double v : {0.1, 1.0 / 3.0, 4.53999e-5, 1e-300, 123456789.123456789}) {
        CHECK(std::stod(format_double(v)) == v);
    }
}

namespace {

// minimal well-formedness scan: every opened tag closes, in order
bool tags_balanced(const std::string& xml) {
    std::vector<std::string> stack;
    std::size_t pos = 0;
    while ((pos = xml.find('<', pos)) != std::string::npos) {
        const std::size_t end = xml.find('>', pos);
        if (end == std::string::npos) {
            return false;
        }
        std::string tag = xml.substr(pos + 1, end - pos - 1);
        pos = end + 1;
        if (tag.empty() || tag.front() == '?' || tag.front() == '!') {
            continue;
        }
        if (tag.back() == '/') {
            continue; // self-closing
        }
        if (tag.front() == '/') {
            if (stack.empty()) {
                return false;
            }
            if (stack.back() != tag.substr(1)) {
                return false;
            }
            stack.pop_back();
            continue;
        }
        const std::size_t space = tag.find_first_of(" \t\n");
        stack.push_back(space == std::string::npos ? tag : tag.substr(0, space));
    }
    return stack.empty();
}

} // namespace

TEST_CASE("svg output is self-contained and well-formed") {
    const ErrorTable table = tiny_table();
    const std::string svg = render_error_table_svg(table, AxisTransform::log10_param, 0.0,
                                                   "alternating & <Borel> test");
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(tags_balanced(svg));
    // one polyline per test function
    std::size_t count = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++count;
        ++pos;
    }
    CHECK(count == table.functions.size());
    // no external references; the xmlns URI is the only allowed URL
    CHECK(svg.find("href") == std::string::npos);
    CHECK(svg.find("url(") == std::string::npos);
    // escaped title made it through
    CHECK(svg.find("&lt;Borel&gt;") != std::string::npos);
    CHECK(svg.find("&amp;") != std::string::npos);
}

TEST_CASE("axis selection per mode") {
    CHECK(axis_for_mode(ExperimentMode::classical, preset_borel()) == AxisTransform::identity);
    CHECK(axis_for_mode(ExperimentMode::power_series, preset_abel()) ==
          AxisTransform::neg_log10_gap);
    CHECK(axis_for_mode(ExperimentMode::power_series, preset_borel()) ==
          AxisTransform::log10_param);
    CHECK(axis_for_mode(ExperimentMode::integral, preset_borel()) == AxisTransform::log10_param);
}

TEST_CASE("output path resolution honours KORSUM_OUT_DIR") {
    unsetenv("KORSUM_OUT_DIR");
    CHECK(resolve_output_path("x.csv") == "x.csv");
    setenv("KORSUM_OUT_DIR", "/tmp/korsum-test", 1);
    CHECK(resolve_output_path("x.csv") == "/tmp/korsum-test/x.csv");
    CHECK(resolve_output_path("/abs/x.csv") == "/abs/x.csv");
    unsetenv("KORSUM_OUT_DIR");
}
