#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "korsum/integral.hpp"
#include "korsum/parallel.hpp"

namespace korsum {

enum class ExperimentMode { classical, power_series, integral };

/// Which evaluation route integral mode takes.  `automatic` picks the
/// closed series form for the Abel-kernel/Borel pair and quadrature
/// otherwise.
enum class TransformRoute { automatic, closed, quadrature };

struct ExperimentConfig {
    OperatorFamily family;
    ExperimentMode mode = ExperimentMode::power_series;
    PowerSeriesMethod method;  // power_series / integral modes
    IntegralKernel kernel;     // integral mode
    TransformRoute route = TransformRoute::automatic;

    /// y values (power series), s values (integral); ignored for classical.
    std::vector<double> schedule;
    std::size_t classical_horizon = 64;

    /// Always contains phi_0, phi_1, phi_2; validate() prepends them when
    /// missing.
    std::vector<LimitFunction> test_set;
    HalfLineGrid grid = HalfLineGrid::default_grid();
    bool refine_grid = false;

    SummationControl ctl;
    QuadratureSpec quad;
    Exec exec = default_exec();

    void validate();
};

enum class Verdict { converging, not_converging };
const char* verdict_name(Verdict v);

/// Rows of (parameter, per-function sup-norm error) plus a per-function
/// convergence verdict.
struct ErrorTable {
    std::vector<std::string> functions;
    struct Row {
        double parameter = 0.0;
        std::vector<double> errors; // parallel to `functions`; NaN when failed
        bool failed = false;
        std::string note;
    };
    std::vector<Row> rows;
    std::vector<Verdict> verdicts;

    bool any_failed() const;
    bool all_converging() const;
};

/// Errors below this are treated as converged regardless of trend; keeps
/// identically-zero configurations from failing the strict-decrease rule.
inline constexpr double kVerdictZeroFloor = 1e-10;

Verdict classify_errors(const std::vector<double>& errors);

ErrorTable run_experiment(const ExperimentConfig& cfg);

/// Holhos modulus: sup over |e^{-t} - e^{-xi}| <= delta of |phi(t)-phi(xi)|,
/// computed through g(u) = phi(-ln u) on [0,1].  The fast path is a sliding
/// window max/min over a 4001-point u-grid; brute forces the 401-point
/// double loop.  delta is clamped to 1 (exact: |e^{-t}-e^{-xi}| <= 1).
double modulus_hat(const LimitFunction& phi, double delta, bool brute = false);

/// mu(t) = sup_{xi>=0} (e^{-t}-e^{-xi})^2 = max(e^{-2t}, (1-e^{-t})^2).
double mu_sup(double t);
LimitFunction mu_function();

/// beta_m = m(1-e^{-1/m}), eth_m = (m/2)(1-e^{-2/m}); expm1-based.
double beta(std::size_t m);
double eth(std::size_t m);

struct RateCandidate {
    std::string label;
    std::function<double(double)> fn;
};
/// (1+p)^{-a}
RateCandidate power_candidate(double a);
/// e^{-a p}
RateCandidate exp_candidate(double a);
/// "power(a)" or "exp(a)".
RateCandidate parse_candidate(const std::string& text);

struct RateReport {
    std::vector<double> parameters;
    std::vector<double> error_phi0;      // transformed phi_0 error
    std::vector<double> delta_values;    // sqrt of the transformed mu norm
    std::vector<double> modulus_values;  // omega_hat(phi, delta)
    std::vector<double> composite_bound; // omega*err0 + 2*omega + M*err0
    std::vector<double> empirical_error; // measured sup error for phi
    std::vector<double> ratio_error;     // err0 / candidate_error
    std::vector<double> ratio_modulus;   // omega_hat / candidate_modulus
    std::vector<double> ratio_overall;   // empirical / max(candidates)
    RateCandidate candidate_error;       // the gauges the ratios refer to
    RateCandidate candidate_modulus;
    bool pass_error = false;
    bool pass_modulus = false;
    bool pass_overall = false;
    bool pass() const { return pass_error && pass_modulus && pass_overall; }
};

/// Rate report along a power-series approach schedule.
RateReport rate_report_power_series(const PowerSeriesMethod& method, const OperatorFamily& fam,
                                    const LimitFunction& phi, const RateCandidate& rate_error,
                                    const RateCandidate& rate_modulus,
                                    const ApproachSchedule& schedule, const HalfLineGrid& grid,
                                    const SummationControl& ctl, Exec exec = default_exec());

/// Rate report along an s-schedule for the integral route.
RateReport rate_report_integral(const IntegralKernel& kernel, const PowerSeriesMethod& method,
                                const OperatorFamily& fam, const LimitFunction& phi,
                                const RateCandidate& pi1, const RateCandidate& pi2,
                                const std::vector<double>& s_schedule, const HalfLineGrid& grid,
                                const QuadratureSpec& quad, const SummationControl& ctl,
                                Exec exec = default_exec());

struct BoundViolation {
    std::size_t m = 0;
    double xi = 0.0;
    std::string which; // "7g:left<=mid", "7g:mid<=right", "7k:..."
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Evaluates both Holhos inequality chains at every (m, xi); any violation
/// beyond `slack` is reported.
std::vector<BoundViolation> holhos_bound_check(const std::vector<std::size_t>& ms,
                                               const HalfLineGrid& grid, double slack = 1e-12);

} // namespace korsum
