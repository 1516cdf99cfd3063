#include "korsum/summability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace korsum {

PowerSeriesMethod preset_abel() {
    PowerSeriesMethod p;
    p.label = "abel";
    p.kind = MethodKind::abel_like;
    p.rho = [](std::size_t) { return 1.0; };
    p.radius = 1.0;
    p.rho_sum = [](double y) { return 1.0 / (1.0 - y); };
    p.tail_ratio = [](std::size_t, double y) { return y; };
    return p;
}

PowerSeriesMethod preset_borel() {
    PowerSeriesMethod p;
    p.label = "borel";
    p.kind = MethodKind::borel;
    p.rho = [](std::size_t m) { return std::exp(-std::lgamma(static_cast<double>(m) + 1.0)); };
    p.radius = std::numeric_limits<double>::infinity();
    p.rho_sum = [](double y) { return std::exp(y); };
    p.tail_ratio = [](std::size_t m, double y) { return y / static_cast<double>(m + 1); };
    return p;
}

PowerSeriesMethod inline_method(std::vector<double> coefficients) {
    if (coefficients.empty() || !(coefficients.front() > 0.0)) {
        throw std::invalid_argument("inline_method: need rho_0 > 0");
    }
    for (double c : coefficients) {
        if (!(c >= 0.0) || !std::isfinite(c)) {
            throw std::invalid_argument("inline_method: coefficients must be finite and >= 0");
        }
    }
    auto coeffs = std::make_shared<std::vector<double>>(std::move(coefficients));
    PowerSeriesMethod p;
    p.label = "inline";
    p.kind = MethodKind::general;
    p.radius = std::numeric_limits<double>::infinity();
    p.rho = [coeffs](std::size_t m) { return m < coeffs->size() ? (*coeffs)[m] : 0.0; };
    p.rho_sum = [coeffs](double y) {
        double acc = 0.0;
        for (std::size_t i = coeffs->size(); i-- > 0;) {
            acc = acc * y + (*coeffs)[i];
        }
        return acc;
    };
    // polynomial: the series terminates, so the tail beyond the last
    // coefficient is identically zero
    p.tail_ratio = [coeffs](std::size_t m, double) {
        return m + 1 >= coeffs->size() ? 0.0 : std::numeric_limits<double>::infinity();
    };
    return p;
}

PowerSeriesMethod method_by_name(const std::string& name) {
    if (name == "abel") return preset_abel();
    if (name == "borel") return preset_borel();
    throw std::invalid_argument("unknown power-series method '" + name + "'");
}

double rho_sum_partial(const PowerSeriesMethod& method, double y, const SummationControl& ctl) {
    CompensatedSum acc;
    double yp = 1.0;
    std::size_t quiet = 0;
    for (std::size_t m = 0; m < ctl.max_terms; ++m) {
        const double t = method.rho(m) * yp;
        if (!std::isfinite(t)) {
            throw std::runtime_error("rho_sum_partial: non-finite term");
        }
        acc.add(t);
        yp *= y;
        const double scale = std::max(std::abs(acc.value()), 1.0);
        quiet = (std::abs(t) < 0.5 * ctl.tail_tolerance * scale) ? quiet + 1 : 0;
        if (quiet >= 8) {
            return acc.value();
        }
    }
    throw truncation_error("rho_sum_partial: max_terms reached");
}

void ApproachSchedule::validate(double radius) const {
    if (points.empty()) {
        throw std::invalid_argument("ApproachSchedule: empty");
    }
    double prev = 0.0;
    for (double y : points) {
        if (!(y > prev) || !(y < radius)) {
            throw std::invalid_argument(
                "ApproachSchedule: points must be strictly increasing inside (0, R)");
        }
        prev = y;
    }
}

ApproachSchedule default_schedule(const PowerSeriesMethod& method) {
    ApproachSchedule s;
    if (std::isfinite(method.radius)) {
        for (int j = 1; j <= 12; ++j) {
            s.points.push_back(method.radius * (1.0 - std::ldexp(1.0, -j)));
        }
    } else {
        for (int j = 0; j <= 8; ++j) {
            s.points.push_back(std::ldexp(1.0, j));
        }
    }
    return s;
}

std::vector<double> default_s_schedule() { return {9.0, 99.0, 999.0, 9999.0}; }

namespace {

TransformResult transform_series(const PowerSeriesMethod& method,
                                 const std::function<double(std::size_t)>& x, double y,
                                 const SummationControl& ctl, double envelope) {
    const bool have_envelope = envelope >= 0.0;
    const double env = std::max(envelope, 1.0);
    const double norm = method.rho_sum(y);
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::runtime_error("ps_transform: rho(y) must be positive and finite");
    }

    CompensatedSum acc;
    double yp = 1.0; // y^m
    std::size_t quiet = 0;
    for (std::size_t m = 0; m < ctl.max_terms; ++m) {
        const double weight = method.rho(m) * yp / norm;
        if (!std::isfinite(weight)) {
            throw std::runtime_error("ps_transform: non-finite weight");
        }
        if (weight != 0.0) {
            const double xm = x(m);
            if (!std::isfinite(xm)) {
                throw std::runtime_error("ps_transform: non-finite sequence value");
            }
            acc.add(weight * xm);
        }
        yp *= y;

        if (method.tail_ratio) {
            const double r = method.tail_ratio(m, y);
            if (r == 0.0) {
                // series terminates: the dropped tail is identically zero
                return {acc.value(), true, m + 1};
            }
            if (r < 1.0 && weight * r / (1.0 - r) * env < ctl.tail_tolerance) {
                return {acc.value(), have_envelope, m + 1};
            }
        } else {
            // no ratio information: stop after a run of negligible weights
            quiet = (weight * env < 0.125 * ctl.tail_tolerance) ? quiet + 1 : 0;
            if (quiet >= 8) {
                return {acc.value(), false, m + 1};
            }
        }
    }
    throw truncation_error("ps_transform: max_terms reached before tail bound");
}

} // namespace

TransformResult ps_transform_detail(const PowerSeriesMethod& method,
                                    const std::function<double(std::size_t)>& x, double y,
                                    const SummationControl& ctl, double envelope) {
    if (!(y > 0.0) || !(y < method.radius)) {
        throw std::domain_error("ps_transform: y must lie in (0, R)");
    }
    if (method.kind == MethodKind::borel) {
        // weights e^{-y} y^m/m! are Poisson; reuse the windowed kernel
        std::size_t terms = 0;
        const bool have_envelope = envelope >= 0.0;
        const double value =
            poisson_weighted_sum(y, x, ctl, have_envelope ? envelope : 1.0, &terms);
        return {value, have_envelope, terms};
    }
    return transform_series(method, x, y, ctl, envelope);
}

double ps_transform(const PowerSeriesMethod& method, const std::function<double(std::size_t)>& x,
                    double y, const SummationControl& ctl, double envelope) {
    return ps_transform_detail(method, x, y, ctl, envelope).value;
}

double ps_transform_sequence(const PowerSeriesMethod& method, const OperatorSequence& seq,
                             double y, const SummationControl& ctl) {
    return ps_transform_detail(
               method, [&seq](std::size_t m) { return seq(m); }, y, ctl, seq.envelope())
        .value;
}

double ps_transform_operator_at(const PowerSeriesMethod& method, const OperatorFamily& fam,
                                const LimitFunction& f, double y, const HalfLinePoint& p,
                                const SummationControl& ctl) {
    OperatorSequence seq(fam, f, p, ctl);
    return ps_transform_sequence(method, seq, y, ctl);
}

double ps_transform_operator(const PowerSeriesMethod& method, const OperatorFamily& fam,
                             const LimitFunction& f, double y, double xi,
                             const SummationControl& ctl) {
    return ps_transform_operator_at(method, fam, f, y, HalfLinePoint::at(xi), ctl);
}

RegularityReport regularity_check(const PowerSeriesMethod& method, std::size_t m_max,
                                  const ApproachSchedule& schedule, double threshold) {
    schedule.validate(method.radius);
    // log-space rho(y) so Borel-type schedules (y up to 256) cannot overflow
    const auto log_norm = [&](double y) {
        if (method.kind == MethodKind::borel) {
            return y;
        }
        return std::log(method.rho_sum(y));
    };
    RegularityReport report;
    for (std::size_t m = 0; m <= m_max; ++m) {
        RegularityRow row;
        row.m = m;
        const double rho_m = method.rho(m);
        for (double y : schedule.points) {
            double ratio = 0.0;
            if (rho_m > 0.0) {
                ratio = std::exp(std::log(rho_m) + static_cast<double>(m) * std::log(y) -
                                 log_norm(y));
            }
            row.ratios.push_back(ratio);
        }
        const std::size_t n = row.ratios.size();
        bool decreasing = true;
        if (n >= 3) {
            decreasing = row.ratios[n - 3] >= row.ratios[n - 2] &&
                         row.ratios[n - 2] >= row.ratios[n - 1];
        }
        row.pass = decreasing && row.ratios.back() < threshold;
        report.all_pass = report.all_pass && row.pass;
        report.rows.push_back(std::move(row));
    }
    return report;
}

LimitEstimate limit_estimate(const PowerSeriesMethod& method,
                             const std::function<double(std::size_t)>& x,
                             const ApproachSchedule& schedule, const SummationControl& ctl,
                             double envelope) {
    schedule.validate(method.radius);
    std::vector<double> values;
    values.reserve(schedule.points.size());
    for (double y : schedule.points) {
        values.push_back(ps_transform(method, x, y, ctl, envelope));
    }
    LimitEstimate est;
    est.value = values.back();

    const std::size_t n = values.size();
    if (n <= 1) {
        est.trend = Trend::decreasing;
        return est;
    }
    std::vector<double> errs(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        errs[j] = std::abs(values[j] - est.value);
    }
    // differences at the truncation-tolerance scale are noise, not a trend
    const double floor =
        2.0 * std::max(ctl.tail_tolerance, 1e-15) * std::max(1.0, std::abs(est.value));
    const bool all_zero = std::all_of(errs.begin(), errs.end(),
                                      [floor](double e) { return e <= floor; });
    const bool non_increasing = std::is_sorted(errs.rbegin(), errs.rend());
    const bool non_decreasing = std::is_sorted(errs.begin(), errs.end());
    if (all_zero || non_increasing) {
        est.trend = Trend::decreasing;
    } else if (non_decreasing) {
        est.trend = Trend::increasing;
    } else {
        est.trend = Trend::oscillating;
    }
    return est;
}

const char* trend_name(Trend t) {
    switch (t) {
    case Trend::decreasing: return "decreasing";
    case Trend::increasing: return "increasing";
    case Trend::oscillating: return "oscillating";
    }
    return "?";
}

} // namespace korsum
