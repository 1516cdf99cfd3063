#include "korsum/korovkin.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace korsum {

namespace {

bool has_label(const std::vector<LimitFunction>& fs, const std::string& label) {
    return std::any_of(fs.begin(), fs.end(),
                       [&](const LimitFunction& f) { return f.label == label; });
}

std::vector<HalfLinePoint> grid_points(const HalfLineGrid& grid) {
    std::vector<HalfLinePoint> pts;
    pts.reserve(grid.nodes.size() + 1);
    for (double x : grid.nodes) {
        pts.push_back(HalfLinePoint::at(x));
    }
    if (grid.include_infinity) {
        pts.push_back(HalfLinePoint::infinity());
    }
    return pts;
}

} // namespace

void ExperimentConfig::validate() {
    grid.validate();
    quad.validate();

    // the Korovkin test set is always part of the experiment
    std::vector<LimitFunction> full;
    for (int nu = 0; nu < 3; ++nu) {
        LimitFunction phi = test_exponential(nu);
        if (!has_label(test_set, phi.label)) {
            full.push_back(std::move(phi));
        }
    }
    full.insert(full.end(), test_set.begin(), test_set.end());
    test_set = std::move(full);

    if (mode == ExperimentMode::classical) {
        return;
    }
    if (schedule.empty()) {
        throw std::invalid_argument("ExperimentConfig: schedule must not be empty");
    }
    double prev = 0.0;
    for (double p : schedule) {
        if (!(p > prev)) {
            throw std::invalid_argument("ExperimentConfig: schedule must be strictly increasing");
        }
        prev = p;
    }
    if (mode == ExperimentMode::power_series) {
        if (!method.rho_sum) {
            throw std::invalid_argument("ExperimentConfig: power_series mode needs a method");
        }
        if (schedule.back() >= method.radius) {
            throw std::invalid_argument("ExperimentConfig: schedule exceeds the method radius");
        }
    }
    if (mode == ExperimentMode::integral && !kernel.density) {
        throw std::invalid_argument("ExperimentConfig: integral mode needs a kernel");
    }
}

const char* verdict_name(Verdict v) {
    return v == Verdict::converging ? "converging" : "not-converging";
}

bool ErrorTable::any_failed() const {
    return std::any_of(rows.begin(), rows.end(), [](const Row& r) { return r.failed; });
}

bool ErrorTable::all_converging() const {
    return std::all_of(verdicts.begin(), verdicts.end(),
                       [](Verdict v) { return v == Verdict::converging; });
}

Verdict classify_errors(const std::vector<double>& errors) {
    std::vector<double> v;
    v.reserve(errors.size());
    for (double e : errors) {
        if (std::isfinite(e)) {
            v.push_back(e);
        }
    }
    if (v.empty()) {
        return Verdict::not_converging;
    }
    if (std::all_of(v.begin(), v.end(), [](double e) { return e <= kVerdictZeroFloor; })) {
        return Verdict::converging;
    }
    const std::size_t n = v.size();
    if (n == 1) {
        return Verdict::not_converging;
    }
    if (n == 2) {
        return v[1] < v[0] ? Verdict::converging : Verdict::not_converging;
    }
    const bool tail_decreasing = v[n - 3] > v[n - 2] && v[n - 2] > v[n - 1];
    const bool small_enough = v[n - 1] < 10.0 * std::sqrt(std::max(v[0], kVerdictZeroFloor));
    return (tail_decreasing && small_enough) ? Verdict::converging : Verdict::not_converging;
}

namespace {

// sup over the grid (plus sentinel) of |approx - f|, optionally refined
double sup_error(const ExperimentConfig& cfg, const LimitFunction& f,
                 const std::function<double(const HalfLinePoint&)>& approx) {
    const auto measure = [&](const HalfLineGrid& grid) {
        const auto pts = grid_points(grid);
        return max_over_indices(cfg.exec, pts.size(), [&](std::size_t i) {
            return std::abs(approx(pts[i]) - f.at(pts[i]));
        });
    };
    HalfLineGrid grid = cfg.grid;
    double value = measure(grid);
    if (cfg.refine_grid) {
        for (int round = 0; round < 4; ++round) {
            grid = grid.refined();
            const double next = measure(grid);
            if (std::abs(next - value) < 1e-8) {
                return next;
            }
            value = next;
        }
    }
    return value;
}

bool closed_route_available(const ExperimentConfig& cfg) {
    return cfg.kernel.label == "abel" && cfg.method.kind == MethodKind::borel;
}

} // namespace

ErrorTable run_experiment(const ExperimentConfig& cfg_in) {
    ExperimentConfig cfg = cfg_in;
    cfg.validate();

    std::vector<double> parameters;
    if (cfg.mode == ExperimentMode::classical) {
        for (std::size_t m = 0; m <= cfg.classical_horizon; ++m) {
            parameters.push_back(static_cast<double>(m));
        }
    } else {
        parameters = cfg.schedule;
    }

    const bool use_closed = cfg.route == TransformRoute::closed ||
                            (cfg.route == TransformRoute::automatic && closed_route_available(cfg));

    ErrorTable table;
    for (const auto& f : cfg.test_set) {
        table.functions.push_back(f.label);
    }

    for (double parameter : parameters) {
        ErrorTable::Row row;
        row.parameter = parameter;
        row.errors.assign(cfg.test_set.size(), std::numeric_limits<double>::quiet_NaN());
        try {
            for (std::size_t i = 0; i < cfg.test_set.size(); ++i) {
                const LimitFunction& f = cfg.test_set[i];
                std::function<double(const HalfLinePoint&)> approx;
                switch (cfg.mode) {
                case ExperimentMode::classical: {
                    const auto m = static_cast<std::size_t>(parameter);
                    approx = [&, m](const HalfLinePoint& p) {
                        return family_at(cfg.family, m, f, p, cfg.ctl);
                    };
                    break;
                }
                case ExperimentMode::power_series: {
                    approx = [&, parameter](const HalfLinePoint& p) {
                        return ps_transform_operator_at(cfg.method, cfg.family, f, parameter, p,
                                                        cfg.ctl);
                    };
                    break;
                }
                case ExperimentMode::integral: {
                    if (use_closed) {
                        approx = [&, parameter](const HalfLinePoint& p) {
                            return f_operator_closed_at(cfg.family, parameter, f, p, cfg.ctl);
                        };
                    } else {
                        approx = [&, parameter](const HalfLinePoint& p) {
                            return f_operator_quadrature_at(cfg.kernel, cfg.method, cfg.family,
                                                            parameter, f, p, cfg.quad, cfg.ctl);
                        };
                    }
                    break;
                }
                }
                // every family is a scalar times S_{m+1} and S phi_0 = 1, so
                // transformed phi_0 values are xi-independent
                if (f.exponential_order && *f.exponential_order == 0) {
                    row.errors[i] = std::abs(approx(HalfLinePoint::at(0.0)) - 1.0);
                } else {
                    row.errors[i] = sup_error(cfg, f, approx);
                }
            }
        } catch (const std::exception& e) {
            row.failed = true;
            row.note = e.what();
        }
        table.rows.push_back(std::move(row));
    }

    for (std::size_t i = 0; i < table.functions.size(); ++i) {
        std::vector<double> column;
        for (const auto& row : table.rows) {
            if (!row.failed) {
                column.push_back(row.errors[i]);
            }
        }
        table.verdicts.push_back(classify_errors(column));
    }
    return table;
}

double mu_sup(double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::domain_error("mu_sup: t must be finite and >= 0");
    }
    // sup over v = e^{-xi} in (0,1] of (e^{-t}-v)^2 sits at the endpoints
    const double a = std::exp(-2.0 * t);
    const double b = -std::expm1(-t); // 1 - e^{-t}
    return std::max(a, b * b);
}

LimitFunction mu_function() {
    LimitFunction g;
    g.f = [](double t) { return mu_sup(t); };
    g.limit_at_infinity = 1.0;
    g.label = "mu";
    return g;
}

double beta(std::size_t m) {
    if (m < 1) {
        throw std::domain_error("beta: m must be >= 1");
    }
    const double md = static_cast<double>(m);
    return -md * std::expm1(-1.0 / md);
}

double eth(std::size_t m) {
    if (m < 1) {
        throw std::domain_error("eth: m must be >= 1");
    }
    const double md = static_cast<double>(m);
    return -0.5 * md * std::expm1(-2.0 / md);
}

namespace {

// phi viewed through u = e^{-t}: g(u) = phi(-ln u) on (0,1], g(0) = lim phi
double substituted(const LimitFunction& phi, double u) {
    if (u <= 0.0) {
        return phi.limit_at_infinity;
    }
    if (u >= 1.0) {
        return phi.f(0.0);
    }
    return phi.f(-std::log(u));
}

double modulus_brute(const LimitFunction& phi, double delta) {
    constexpr std::size_t n = 401;
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = substituted(phi, static_cast<double>(i) * h);
    }
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (static_cast<double>(j - i) * h > delta + 1e-12) {
                break;
            }
            best = std::max(best, std::abs(g[i] - g[j]));
        }
    }
    return best;
}

double modulus_fast(const LimitFunction& phi, double delta) {
    constexpr std::size_t n = 4001;
    const double h = 1.0 / static_cast<double>(n - 1);
    std::vector<double> g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g[i] = substituted(phi, static_cast<double>(i) * h);
    }
    const auto w = static_cast<std::size_t>(std::floor(delta / h + 1e-9));
    if (w == 0) {
        return 0.0;
    }
    // sliding max/min over windows of w+1 nodes (monotone deques)
    std::deque<std::size_t> maxq, minq;
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        while (!maxq.empty() && g[maxq.back()] <= g[i]) maxq.pop_back();
        maxq.push_back(i);
        while (!minq.empty() && g[minq.back()] >= g[i]) minq.pop_back();
        minq.push_back(i);
        if (i >= w) {
            const std::size_t lo = i - w;
            while (maxq.front() < lo) maxq.pop_front();
            while (minq.front() < lo) minq.pop_front();
            best = std::max(best, g[maxq.front()] - g[minq.front()]);
        }
    }
    return best;
}

} // namespace

double modulus_hat(const LimitFunction& phi, double delta, bool brute) {
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
        throw std::domain_error("modulus_hat: delta must be finite and >= 0");
    }
    // |e^{-t} - e^{-xi}| <= 1, so the modulus is constant beyond delta = 1
    delta = std::min(delta, 1.0);
    if (delta == 0.0) {
        return 0.0;
    }
    return brute ? modulus_brute(phi, delta) : modulus_fast(phi, delta);
}

RateCandidate power_candidate(double a) {
    RateCandidate c;
    c.label = "power(" + std::to_string(a) + ")";
    c.fn = [a](double p) { return std::pow(1.0 + p, -a); };
    return c;
}

RateCandidate exp_candidate(double a) {
    RateCandidate c;
    c.label = "exp(" + std::to_string(a) + ")";
    c.fn = [a](double p) { return std::exp(-a * p); };
    return c;
}

RateCandidate parse_candidate(const std::string& text) {
    const auto open = text.find('(');
    const auto close = text.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
        throw std::invalid_argument("rate candidate must look like power(a) or exp(a): '" +
                                    text + "'");
    }
    const std::string name = text.substr(0, open);
    double a = 0.0;
    try {
        std::size_t used = 0;
        const std::string arg = text.substr(open + 1, close - open - 1);
        a = std::stod(arg, &used);
        if (used != arg.size()) {
            throw std::invalid_argument("trailing characters");
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rate candidate argument in '" + text + "'");
    }
    if (!(a > 0.0)) {
        throw std::invalid_argument("rate candidate argument must be > 0 in '" + text + "'");
    }
    if (name == "power") return power_candidate(a);
    if (name == "exp") return exp_candidate(a);
    throw std::invalid_argument("unknown rate candidate form '" + name + "'");
}

namespace {

// A candidate passes when the quantity it gauges is already at the noise
// floor, or when the ratio trajectory keeps falling.
bool ratios_pass(const std::vector<double>& r, const std::vector<double>& numerators) {
    if (r.empty()) {
        return false;
    }
    if (std::all_of(numerators.begin(), numerators.end(),
                    [](double v) { return std::abs(v) <= kVerdictZeroFloor; })) {
        return true;
    }
    const std::size_t n = r.size();
    if (n < 3) {
        return n == 2 && r[1] < r[0];
    }
    return r[n - 3] > r[n - 2] && r[n - 2] > r[n - 1];
}

struct RatePoint {
    double err0;
    double delta;
};

RateReport assemble_rate_report(const std::vector<double>& parameters,
                                const std::vector<RatePoint>& pts, const LimitFunction& phi,
                                const std::vector<double>& empirical, double phi_norm,
                                const RateCandidate& cand_error,
                                const RateCandidate& cand_modulus) {
    RateReport rep;
    rep.parameters = parameters;
    rep.candidate_error = cand_error;
    rep.candidate_modulus = cand_modulus;
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        const double omega = modulus_hat(phi, pts[i].delta);
        rep.error_phi0.push_back(pts[i].err0);
        rep.delta_values.push_back(pts[i].delta);
        rep.modulus_values.push_back(omega);
        rep.composite_bound.push_back(omega * pts[i].err0 + 2.0 * omega + phi_norm * pts[i].err0);
        rep.empirical_error.push_back(empirical[i]);

        const double c1 = cand_error.fn(parameters[i]);
        const double c2 = cand_modulus.fn(parameters[i]);
        rep.ratio_error.push_back(pts[i].err0 / c1);
        rep.ratio_modulus.push_back(omega / c2);
        rep.ratio_overall.push_back(empirical[i] / std::max(c1, c2));
    }
    rep.pass_error = ratios_pass(rep.ratio_error, rep.error_phi0);
    rep.pass_modulus = ratios_pass(rep.ratio_modulus, rep.modulus_values);
    rep.pass_overall = ratios_pass(rep.ratio_overall, rep.empirical_error);
    return rep;
}

} // namespace

RateReport rate_report_power_series(const PowerSeriesMethod& method, const OperatorFamily& fam,
                                    const LimitFunction& phi, const RateCandidate& rate_error,
                                    const RateCandidate& rate_modulus,
                                    const ApproachSchedule& schedule, const HalfLineGrid& grid,
                                    const SummationControl& ctl, Exec exec) {
    schedule.validate(method.radius);
    const double scalar_bound = fam.scalar_bound();
    const double phi_norm = sup_norm(phi, grid);
    const auto pts_list = grid_points(grid);
    const bool phi_is_one = phi.exponential_order && *phi.exponential_order == 0;

    std::vector<RatePoint> pts;
    std::vector<double> empirical;
    for (double y : schedule.points) {
        // R_m phi_0 is the constant scalar_factor(m), so the transformed
        // phi_0 error is xi-independent
        const double t_scalar = ps_transform(
            method, [&fam](std::size_t m) { return fam.scalar_factor(m); }, y, ctl, scalar_bound);
        const double err0 = std::abs(t_scalar - 1.0);

        // ||R_m mu|| = |scalar_factor(m)| (S_{m+1} interpolates mu(0) = ||mu|| = 1)
        const double t_mu = ps_transform(
            method, [&fam](std::size_t m) { return std::abs(fam.scalar_factor(m)); }, y, ctl,
            scalar_bound);
        pts.push_back({err0, std::sqrt(std::max(t_mu, 0.0))});

        if (phi_is_one) {
            empirical.push_back(err0); // transformed phi_0 is xi-independent
        } else {
            empirical.push_back(max_over_indices(exec, pts_list.size(), [&](std::size_t i) {
                const auto& p = pts_list[i];
                return std::abs(ps_transform_operator_at(method, fam, phi, y, p, ctl) -
                                phi.at(p));
            }));
        }
    }
    return assemble_rate_report(schedule.points, pts, phi, empirical, phi_norm, rate_error,
                                rate_modulus);
}

RateReport rate_report_integral(const IntegralKernel& kernel, const PowerSeriesMethod& method,
                                const OperatorFamily& fam, const LimitFunction& phi,
                                const RateCandidate& pi1, const RateCandidate& pi2,
                                const std::vector<double>& s_schedule, const HalfLineGrid& grid,
                                const QuadratureSpec& quad, const SummationControl& ctl,
                                Exec exec) {
    if (s_schedule.empty()) {
        throw std::invalid_argument("rate_report_integral: empty schedule");
    }
    const bool closed = kernel.label == "abel" && method.kind == MethodKind::borel;
    const double phi_norm = sup_norm(phi, grid);
    const auto pts_list = grid_points(grid);
    const bool phi_is_one = phi.exponential_order && *phi.exponential_order == 0;

    const auto f_op = [&](double s, const LimitFunction& f, const HalfLinePoint& p) {
        if (closed) {
            return f_operator_closed_at(fam, s, f, p, ctl);
        }
        return f_operator_quadrature_at(kernel, method, fam, s, f, p, quad, ctl);
    };

    std::vector<RatePoint> pts;
    std::vector<double> empirical;
    for (double s : s_schedule) {
        const LimitFunction phi0 = test_exponential(0);
        const double t_scalar = f_op(s, phi0, HalfLinePoint::at(0.0));
        const double err0 = std::abs(t_scalar - 1.0);

        // ||F^s mu|| is attained at xi = 0 where it equals F^s phi_0
        // (mu(0) = ||mu|| = 1 and positivity dominates elsewhere)
        const double t_mu = t_scalar;
        pts.push_back({err0, std::sqrt(std::max(t_mu, 0.0))});

        if (phi_is_one) {
            empirical.push_back(err0);
        } else {
            empirical.push_back(max_over_indices(exec, pts_list.size(), [&](std::size_t i) {
                const auto& p = pts_list[i];
                return std::abs(f_op(s, phi, p) - phi.at(p));
            }));
        }
    }
    return assemble_rate_report(s_schedule, pts, phi, empirical, phi_norm, pi1, pi2);
}

std::vector<BoundViolation> holhos_bound_check(const std::vector<std::size_t>& ms,
                                               const HalfLineGrid& grid, double slack) {
    grid.validate();
    const double e = std::exp(1.0);
    std::vector<BoundViolation> violations;
    for (std::size_t m : ms) {
        const double bm = beta(m);
        const double dm = eth(m);
        const double right_g = (1.0 - bm * bm) / (2.0 * e * bm);
        const double right_k = (4.0 - dm * dm) / (4.0 * e * dm);
        for (double xi : grid.nodes) {
            const double eb = std::exp(-xi * bm);
            const double e1 = std::exp(-xi);
            const double left_g = eb - e1;
            const double mid_g = 0.5 * (1.0 - bm) * (xi * eb + xi * e1);
            if (left_g > mid_g + slack) {
                violations.push_back({m, xi, "7g:left<=mid", left_g, mid_g});
            }
            if (mid_g > right_g + slack) {
                violations.push_back({m, xi, "7g:mid<=right", mid_g, right_g});
            }

            const double ed = std::exp(-xi * dm);
            const double e2 = std::exp(-2.0 * xi);
            const double left_k = std::exp(-2.0 * xi * dm) - e2;
            const double mid_k = 0.5 * (2.0 - dm) * (xi * ed + xi * e2);
            if (left_k > mid_k + slack) {
                violations.push_back({m, xi, "7k:left<=mid", left_k, mid_k});
            }
            if (mid_k > right_k + slack) {
                violations.push_back({m, xi, "7k:mid<=right", mid_k, right_k});
            }
        }
    }
    return violations;
}

} // namespace korsum
