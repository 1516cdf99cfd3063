#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace korsum {

/// A point of the extended half line [0,inf].  Infinity travels as an
/// explicit flag, never as a floating-point special, so evaluation of a
/// LimitFunction is total.
struct HalfLinePoint {
    double value = 0.0;
    bool is_infinity = false;

    static HalfLinePoint at(double x) { return {x, false}; }
    static HalfLinePoint infinity() { return {0.0, true}; }
};

/// Member of C*[0,inf) (or B*): an evaluable function carrying its declared
/// finite limit at infinity.  Callers declare the limit; it is not detected.
struct LimitFunction {
    std::function<double(double)> f;
    double limit_at_infinity = 0.0;
    std::string label;

    /// Set to nu for e^{-nu xi}; lets transform paths use closed forms.
    std::optional<int> exponential_order;

    /// Evaluate at finite xi >= 0.  Throws std::domain_error for negative
    /// or non-finite arguments.
    double operator()(double xi) const;

    /// Sentinel-aware evaluation: returns limit_at_infinity at the
    /// infinity point.
    double at(const HalfLinePoint& p) const;
};

double eval(const LimitFunction& f, const HalfLinePoint& p);

/// phi_nu(xi) = e^{-nu xi}, nu in {0,1,2}.
LimitFunction test_exponential(int nu);
LimitFunction constant_function(double c);
/// 1/(1+xi), limit 0.  Note: still ~0.024 away from its limit at xi = 40.
LimitFunction inverse_linear();
/// e^{-xi} - e^{-2 xi}, limit 0; peaks at 1/4.
LimitFunction exp_difference();

/// Lookup by name: phi0, phi1, phi2, inv_linear, exp_diff, one.
LimitFunction builtin_function(const std::string& name);

/// Finite stand-in for the sup over [0,inf): strictly increasing nodes
/// starting at 0, optionally joined by the infinity sentinel.
struct HalfLineGrid {
    double cutoff = 40.0;
    std::vector<double> nodes;
    bool include_infinity = true;

    static HalfLineGrid uniform(double cutoff, std::size_t n, bool include_infinity = true);
    /// 2001 uniform nodes on [0,40] plus the infinity sentinel.
    static HalfLineGrid default_grid();

    /// Same span with doubled node density (2n-1 nodes), keeping every
    /// existing node, so sup estimates are monotone under refinement.
    HalfLineGrid refined() const;

    void validate() const;
};

/// Max over grid nodes of |f|, including |limit| when the sentinel is part
/// of the grid.  A lower bound on the true sup-norm.
double sup_norm(const LimitFunction& f, const HalfLineGrid& grid);

/// Doubles the grid until the sup-norm estimate moves by less than tol.
double sup_norm_refined(const LimitFunction& f, HalfLineGrid grid, double tol = 1e-8,
                        int max_rounds = 6);

} // namespace korsum
