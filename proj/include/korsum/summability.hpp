#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "korsum/operators.hpp"
#include "korsum/summation.hpp"

namespace korsum {

enum class MethodKind {
    abel_like, // finite radius, certified geometric tail at ratio y/R
    borel,     // rho_m = 1/m!, Poisson-window summation
    general    // user coefficients; certified only if tail_ratio is given
};

/// A power-series summability method P_rho: coefficients rho_m >= 0 with
/// rho_0 > 0, radius R, and the evaluator rho(y) = sum rho_m y^m.
struct PowerSeriesMethod {
    std::string label;
    MethodKind kind = MethodKind::general;
    std::function<double(std::size_t)> rho;
    double radius = 1.0; // may be INFINITY
    std::function<double(double)> rho_sum;
    /// Optional: bound on sup_{j>=m} rho_{j+1} y / rho_j, enabling a
    /// certified geometric tail.  Presets provide it.
    std::function<double(std::size_t, double)> tail_ratio;
};

/// rho_m = 1, R = 1, rho(y) = 1/(1-y).
PowerSeriesMethod preset_abel();
/// rho_m = 1/m!, R = inf, rho(y) = e^y.
PowerSeriesMethod preset_borel();
/// Finitely many coefficients, zero afterwards (R = inf).
PowerSeriesMethod inline_method(std::vector<double> coefficients);
PowerSeriesMethod method_by_name(const std::string& name);

/// rho(y) by adaptive partial summation (reference for rho_sum).
double rho_sum_partial(const PowerSeriesMethod& method, double y, const SummationControl& ctl);

/// Discretization of "y -> R^-": strictly increasing points below R.
struct ApproachSchedule {
    std::vector<double> points;
    void validate(double radius) const;
};

/// Abel-like: y = R(1 - 2^-j), j=1..12.  Borel-like: y = 2^j, j=0..8.
ApproachSchedule default_schedule(const PowerSeriesMethod& method);
/// s in {9, 99, 999, 9999}; maps to y = s/(s+1) under the Abel substitution.
std::vector<double> default_s_schedule();

struct TransformResult {
    double value = 0.0;
    bool certified = true;
    std::size_t terms = 0;
};

/// (1/rho(y)) sum_m x_m rho_m y^m with the tail bounded below
/// ctl.tail_tolerance.  `envelope` bounds |x_m|; pass a negative value to
/// use a running-max heuristic (result is flagged uncertified unless the
/// series terminates).
TransformResult ps_transform_detail(const PowerSeriesMethod& method,
                                    const std::function<double(std::size_t)>& x, double y,
                                    const SummationControl& ctl, double envelope = -1.0);

double ps_transform(const PowerSeriesMethod& method, const std::function<double(std::size_t)>& x,
                    double y, const SummationControl& ctl, double envelope = -1.0);

/// Transform of a memoized operator sequence with its own envelope; lets
/// quadrature reuse R_m(f; xi) values across y.
double ps_transform_sequence(const PowerSeriesMethod& method, const OperatorSequence& seq,
                             double y, const SummationControl& ctl);

/// Transform of m -> R_m(f; xi); exponential test functions ride the
/// closed-form route via OperatorSequence.
double ps_transform_operator(const PowerSeriesMethod& method, const OperatorFamily& fam,
                             const LimitFunction& f, double y, double xi,
                             const SummationControl& ctl);

double ps_transform_operator_at(const PowerSeriesMethod& method, const OperatorFamily& fam,
                                const LimitFunction& f, double y, const HalfLinePoint& p,
                                const SummationControl& ctl);

struct RegularityRow {
    std::size_t m = 0;
    std::vector<double> ratios; // rho_m y^m / rho(y) along the schedule
    bool pass = false;
};

struct RegularityReport {
    std::vector<RegularityRow> rows;
    bool all_pass = true;
};

/// Regularity diagnostic: pass iff the final ratio is below
/// `threshold` and the trajectory is non-increasing over its last 3 points.
RegularityReport regularity_check(const PowerSeriesMethod& method, std::size_t m_max,
                                  const ApproachSchedule& schedule, double threshold = 1e-3);

enum class Trend { decreasing, increasing, oscillating };

struct LimitEstimate {
    double value = 0.0;
    Trend trend = Trend::oscillating;
};

/// Finite surrogate for the y -> R^- limit: the transform at the last
/// schedule point plus the trend of |transform(y_j) - last| along the way.
LimitEstimate limit_estimate(const PowerSeriesMethod& method,
                             const std::function<double(std::size_t)>& x,
                             const ApproachSchedule& schedule, const SummationControl& ctl,
                             double envelope = -1.0);

const char* trend_name(Trend t);

} // namespace korsum
