#pragma once

#include <functional>
#include <string>

#include "korsum/summability.hpp"

namespace korsum {

/// A non-negative integral summability kernel F(s, y).  Regularity is a
/// declared property; only non-negativity and the mass behaviour
/// (integral -> 1) are checked numerically.
struct IntegralKernel {
    std::string label;
    std::function<double(double s, double y)> density;
    /// Optional analytic tail: integral_{y0}^inf F(s,y) dy.
    std::function<double(double s, double y0)> tail_mass;
    /// Optional cutoff rule: smallest y0 with tail mass below `needed`.
    std::function<double(double s, double needed)> cutoff;
    bool regular_declared = false;
};

/// F(s,y) = (1/s) e^{-y/s}; mass exactly 1 for every s > 0.
IntegralKernel preset_abel_kernel();
/// Identically zero (diagnostic edge case).
IntegralKernel zero_kernel();

struct QuadratureSpec {
    /// <= 0 means: derive from the kernel's cutoff rule.
    double y_cutoff = 0.0;
    double abs_tolerance = 1e-8;
    int max_subdivisions = 4000;

    void validate() const;
};

/// Adaptive-bisection Simpson on [a,b]; deterministic subdivision order.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tolerance, int max_subdivisions);

/// integral_0^inf F(s,y) dy: quadrature on (0, y_cutoff] plus the analytic
/// tail when the kernel provides one.
double kernel_mass(const IntegralKernel& kernel, double s, const QuadratureSpec& quad);

/// V^y_{P,R}(f; xi): the weighted-average operator (an alias of
/// ps_transform_operator).
double v_operator(const PowerSeriesMethod& method, const OperatorFamily& fam, double y,
                  const LimitFunction& f, double xi, const SummationControl& ctl);

/// F^s_{P,R}(f; xi) = integral F(s,y) V^y(f; xi) dy by adaptive quadrature,
/// tail dominated by M ||f|| x kernel tail mass.
double f_operator_quadrature(const IntegralKernel& kernel, const PowerSeriesMethod& method,
                             const OperatorFamily& fam, double s, const LimitFunction& f,
                             double xi, const QuadratureSpec& quad, const SummationControl& ctl);

double f_operator_quadrature_at(const IntegralKernel& kernel, const PowerSeriesMethod& method,
                                const OperatorFamily& fam, double s, const LimitFunction& f,
                                const HalfLinePoint& p, const QuadratureSpec& quad,
                                const SummationControl& ctl);

/// Abel-kernel/Borel closed reduction: the Abel transform of
/// m -> R_m(f; xi) at y = s/(s+1).
double f_operator_closed(const OperatorFamily& fam, double s, const LimitFunction& f, double xi,
                         const SummationControl& ctl);

double f_operator_closed_at(const OperatorFamily& fam, double s, const LimitFunction& f,
                            const HalfLinePoint& p, const SummationControl& ctl);

/// M = sup over the schedule of the weighted transform of
/// m -> ||R_m phi_0||_inf (= |scalar factor|).
double m_bound_estimate(const PowerSeriesMethod& method, const OperatorFamily& fam,
                        const ApproachSchedule& schedule, const SummationControl& ctl);

} // namespace korsum
