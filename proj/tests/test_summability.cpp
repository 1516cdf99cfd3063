#include "doctest.h"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <random>

#include "korsum/summability.hpp"
#include "oracles.hpp"

using namespace korsum;

namespace {
const SummationControl ctl;

double alternating(std::size_t m) { return (m % 2 == 0) ? 1.0 : -1.0; }
} // namespace

TEST_CASE("preset coefficient values and sums") {
    const PowerSeriesMethod abel = preset_abel();
    CHECK(abel.rho(5) == 1.0);
    CHECK(abel.rho_sum(0.5) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(abel.rho_sum(0.9) == doctest::Approx(10.0).epsilon(1e-12));

    const PowerSeriesMethod borel = preset_borel();
    CHECK(borel.rho(3) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(borel.rho_sum(0.0) == 1.0);
    CHECK(borel.rho_sum(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-15));

    // rho_sum must agree with direct partial summation and dominate rho_0
    for (double y : {0.25, 0.5, 0.9}) {
        CHECK(abel.rho_sum(y) == doctest::Approx(rho_sum_partial(abel, y, ctl)).epsilon(1e-10));
        CHECK(abel.rho_sum(y) >= abel.rho(0));
    }
    for (double y : {0.5, 1.0, 3.0}) {
        CHECK(borel.rho_sum(y) == doctest::Approx(rho_sum_partial(borel, y, ctl)).epsilon(1e-10));
        CHECK(borel.rho_sum(y) >= borel.rho(0));
    }
}

TEST_CASE("ps_transform spec examples") {
    const PowerSeriesMethod abel = preset_abel();
    const PowerSeriesMethod borel = preset_borel();

    CHECK(ps_transform(abel, [](std::size_t) { return 1.0; }, 0.7, ctl, 1.0) ==
          doctest::Approx(1.0).epsilon(1e-11));

    // geometric oracle (1-y)/(1+y), plus direct summation
    const double geo = (1.0 - 0.9) / (1.0 + 0.9);
    CHECK(oracles::abel_transform_direct(alternating, 0.9) == doctest::Approx(geo).epsilon(1e-13));
    CHECK(ps_transform(abel, alternating, 0.9, ctl, 1.0) == doctest::Approx(geo).epsilon(1e-10));

    // e^{-y} * e^{-y} identity, cross-checked by direct summation
    const double borel_oracle = oracles::borel_transform_direct(alternating, 5.0, 200);
    CHECK(borel_oracle == doctest::Approx(std::exp(-10.0)).epsilon(1e-10));
    CHECK(ps_transform(borel, alternating, 5.0, ctl, 1.0) ==
          doctest::Approx(std::exp(-10.0)).epsilon(1e-9));
}

TEST_CASE("transform of a constant is the constant") {
    for (const PowerSeriesMethod& method : {preset_abel(), preset_borel()}) {
        const ApproachSchedule sched = default_schedule(method);
        for (double y : sched.points) {
            const double v =
                ps_transform(method, [](std::size_t) { return 3.25; }, y, ctl, 3.25);
            CHECK(std::abs(v - 3.25) < 8.0 * ctl.tail_tolerance);
        }
    }
}

TEST_CASE("alternating-sequence identities at the pinned y values") {
    const PowerSeriesMethod abel = preset_abel();
    for (double y : {0.5, 0.9, 0.99}) {
        const double target = (1.0 - y) / (1.0 + y);
        CHECK(std::abs(ps_transform(abel, alternating, y, ctl, 1.0) - target) < 1e-10);
    }
    const PowerSeriesMethod borel = preset_borel();
    for (double y : {1.0, 5.0, 10.0}) {
        // tolerance convention: absolute below magnitude 1 (see ledger)
        const double target = std::exp(-2.0 * y);
        CHECK(std::abs(ps_transform(borel, alternating, y, ctl, 1.0) - target) <
              1e-10 * std::max(1.0, target));
    }
}

TEST_CASE("ps_transform is linear in the sequence") {
    std::mt19937 rng(987654);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    const PowerSeriesMethod borel = preset_borel();
    const PowerSeriesMethod abel = preset_abel();
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> xs(4096), ys(4096);
        for (auto& v : xs) v = unit(rng);
        for (auto& v : ys) v = unit(rng);
        const double a = unit(rng), b = unit(rng);
        const auto x = [&xs](std::size_t m) { return xs[m % xs.size()]; };
        const auto yseq = [&ys](std::size_t m) { return ys[m % ys.size()]; };
        const auto combo = [&](std::size_t m) { return a * x(m) + b * yseq(m); };

        const double yb = 7.5;
        const double lhs_b = ps_transform(borel, combo, yb, ctl, 2.0);
        const double rhs_b = a * ps_transform(borel, x, yb, ctl, 1.0) +
                             b * ps_transform(borel, yseq, yb, ctl, 1.0);
        CHECK(lhs_b == doctest::Approx(rhs_b).epsilon(1e-10));

        const double ya = 0.875;
        const double lhs_a = ps_transform(abel, combo, ya, ctl, 2.0);
        const double rhs_a = a * ps_transform(abel, x, ya, ctl, 1.0) +
                             b * ps_transform(abel, yseq, ya, ctl, 1.0);
        CHECK(lhs_a == doctest::Approx(rhs_a).epsilon(1e-10));
    }
}

TEST_CASE("operator transforms against direct-summation oracles") {
    const PowerSeriesMethod borel = preset_borel();
    const PowerSeriesMethod abel = preset_abel();
    const OperatorFamily alt = make_family(FamilyKind::alternating);
    const OperatorFamily masked = make_family(FamilyKind::masked);
    const OperatorFamily shifted = make_family(FamilyKind::szasz_shifted);
    const LimitFunction phi0 = test_exponential(0);

    for (double y : {1.0, 5.0, 12.0}) {
        const double expect = 1.0 + std::exp(-2.0 * y);
        CHECK(ps_transform_operator(borel, alt, phi0, y, 3.3, ctl) ==
              doctest::Approx(expect).epsilon(1e-11));
    }

    const double masked_expect = 1.0 - oracles::masked_error(0.99);
    CHECK(masked_expect == doctest::Approx(0.90659951387791463).epsilon(1e-12));
    CHECK(ps_transform_operator(abel, masked, phi0, 0.99, 1.0, ctl) ==
          doctest::Approx(masked_expect).epsilon(1e-10));

    for (double y : {0.5, 0.99}) {
        CHECK(ps_transform_operator(abel, shifted, phi0, y, 2.0, ctl) ==
              doctest::Approx(1.0).epsilon(1e-11));
    }
    CHECK(ps_transform_operator(borel, shifted, phi0, 64.0, 2.0, ctl) ==
          doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("transform domain errors") {
    const PowerSeriesMethod abel = preset_abel();
    CHECK_THROWS_AS(ps_transform(abel, alternating, 1.5, ctl, 1.0), std::domain_error);
    CHECK_THROWS_AS(ps_transform(abel, alternating, 0.0, ctl, 1.0), std::domain_error);
    const SummationControl tiny(1e-12, 64);
    CHECK_THROWS_AS(ps_transform(abel, alternating, 0.9999, tiny, 1.0), truncation_error);
}

TEST_CASE("regularity of the presets and the degenerate method") {
    const PowerSeriesMethod abel = preset_abel();
    const PowerSeriesMethod borel = preset_borel();
    const RegularityReport ra = regularity_check(abel, 10, default_schedule(abel));
    CHECK(ra.all_pass);
    const RegularityReport rb = regularity_check(borel, 10, default_schedule(borel));
    CHECK(rb.all_pass);

    // ratio trajectories match the closed expressions
    const ApproachSchedule sched_a = default_schedule(abel);
    for (std::size_t j = 0; j < sched_a.points.size(); ++j) {
        const double y = sched_a.points[j];
        CHECK(ra.rows[3].ratios[j] ==
              doctest::Approx((1.0 - y) * std::pow(y, 3.0)).epsilon(1e-9));
    }
    const ApproachSchedule sched_b = default_schedule(borel);
    const double y_last = sched_b.points.back();
    CHECK(rb.rows[0].ratios.back() == doctest::Approx(std::exp(-y_last)).epsilon(1e-9));

    const PowerSeriesMethod degenerate = inline_method({1.0, 0.0, 0.0});
    ApproachSchedule sched{{1.0, 2.0, 4.0}};
    const RegularityReport rd = regularity_check(degenerate, 3, sched);
    CHECK_FALSE(rd.all_pass);
    CHECK_FALSE(rd.rows[0].pass); // ratio identically 1
    CHECK(rd.rows[1].pass);       // zero coefficient: ratio identically 0
}

TEST_CASE("single-point regularity ratios from the spec") {
    const PowerSeriesMethod borel = preset_borel();
    ApproachSchedule s20{{5.0, 10.0, 20.0}};
    const RegularityReport r = regularity_check(borel, 0, s20);
    CHECK(r.rows[0].ratios.back() == doctest::Approx(std::exp(-20.0)).epsilon(1e-12));
    CHECK(r.rows[0].pass);

    const PowerSeriesMethod abel = preset_abel();
    ApproachSchedule s999{{0.5, 0.9, 0.999}};
    const RegularityReport r2 = regularity_check(abel, 0, s999);
    CHECK(r2.rows[0].ratios.back() == doctest::Approx(1e-3).epsilon(1e-12));
}

TEST_CASE("limit_estimate values and trends") {
    const PowerSeriesMethod borel = preset_borel();
    ApproachSchedule sched{{5.0, 10.0, 20.0, 40.0}};
    const LimitEstimate est = limit_estimate(borel, alternating, sched, ctl, 1.0);
    CHECK(std::abs(est.value) < 1e-12); // e^{-80} below the tolerance floor
    CHECK(est.trend == Trend::decreasing);

    const PowerSeriesMethod abel = preset_abel();
    ApproachSchedule sched_c{{0.25, 0.5, 0.75}};
    const LimitEstimate est_c =
        limit_estimate(abel, [](std::size_t) { return 4.5; }, sched_c, ctl, 4.5);
    CHECK(est_c.value == doctest::Approx(4.5).epsilon(1e-10));
    CHECK(est_c.trend == Trend::decreasing);

    ApproachSchedule sched_a{{0.9, 0.99, 0.999}};
    const LimitEstimate est_a = limit_estimate(abel, alternating, sched_a, ctl, 1.0);
    CHECK(est_a.value == doctest::Approx(0.001 / 1.999).epsilon(1e-9));
    CHECK(est_a.trend == Trend::decreasing);
}

TEST_CASE("inline methods and certification flags") {
    const PowerSeriesMethod poly = inline_method({2.0, 1.0, 0.5});
    CHECK(poly.rho(0) == 2.0);
    CHECK(poly.rho(7) == 0.0);
    for (double y : {0.5, 2.0}) {
        CHECK(poly.rho_sum(y) ==
              doctest::Approx(rho_sum_partial(poly, y, ctl)).epsilon(1e-12));
    }
    const TransformResult r =
        ps_transform_detail(poly, [](std::size_t) { return 1.0; }, 2.0, ctl, 1.0);
    CHECK(r.certified);
    CHECK(r.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.terms == 3);

    // strip the tail information: heuristic stop, uncertified result
    PowerSeriesMethod blind = poly;
    blind.tail_ratio = nullptr;
    const TransformResult rb =
        ps_transform_detail(blind, [](std::size_t) { return 1.0; }, 0.5, ctl, 1.0);
    CHECK_FALSE(rb.certified);
    CHECK(rb.value == doctest::Approx(1.0).epsilon(1e-10));

    CHECK_THROWS_AS(inline_method({}), std::invalid_argument);
    CHECK_THROWS_AS(inline_method({0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(inline_method({1.0, -1.0}), std::invalid_argument);
}

TEST_CASE("schedules validate against the radius") {
    const PowerSeriesMethod abel = preset_abel();
    ApproachSchedule bad{{0.5, 1.5}};
    CHECK_THROWS_AS(bad.validate(abel.radius), std::invalid_argument);
    ApproachSchedule unordered{{0.5, 0.25}};
    CHECK_THROWS_AS(unordered.validate(abel.radius), std::invalid_argument);
    CHECK(default_schedule(abel).points.back() < 1.0);
    CHECK(default_schedule(preset_borel()).points.back() == 256.0);
}
