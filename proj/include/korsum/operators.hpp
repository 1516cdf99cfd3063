#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "korsum/functions.hpp"
#include "korsum/summation.hpp"

namespace korsum {

/// sum_k e^{-lambda} lambda^k/k! * g(k), summed over a window around
/// k ~ lambda with certified geometric tail bounds on both sides.
/// `envelope` must bound |g| on the dropped tails (it is floored at 1, so
/// underestimates only make the stop rule stricter elsewhere).
double poisson_weighted_sum(double lambda, const std::function<double(std::size_t)>& g,
                            const SummationControl& ctl, double envelope,
                            std::size_t* terms_out = nullptr);

/// Truncated Szasz-Mirakjan operator S_m(f; xi).  xi = 0 returns f(0)
/// exactly.  Throws truncation_error when max_terms is exhausted before the
/// tail bound is met.
double szasz_eval(std::size_t m, const LimitFunction& f, double xi, const SummationControl& ctl);

/// Closed forms on the exponential test set:
///   nu=0 -> 1,  nu>=1 -> exp(m xi (e^{-nu/m} - 1)).
double szasz_exp_closed(std::size_t m, int nu, double xi);

enum class FamilyKind { szasz_shifted, alternating, masked, scaled };

/// An indexed family m -> R_m of positive linear operators.  All four kinds
/// act as a per-index scalar times S_{m+1}, which is what scalar_factor
/// reports (it equals ||R_m phi_0||_inf).
struct OperatorFamily {
    FamilyKind kind = FamilyKind::szasz_shifted;
    std::function<double(std::size_t)> scale_sequence; // required for `scaled`
    std::string label;

    double scalar_factor(std::size_t m) const;
    /// sup_m |scalar_factor(m)| (probed over m <= 4096 for `scaled`).
    double scalar_bound() const;
};

OperatorFamily make_family(FamilyKind kind, std::function<double(std::size_t)> scale = {});
OperatorFamily family_by_name(const std::string& name);

bool is_perfect_square(std::size_t n);

/// R_m(f; xi) through the truncated series route.
double family_eval(const OperatorFamily& fam, std::size_t m, const LimitFunction& f, double xi,
                   const SummationControl& ctl);

/// R_m(phi_nu; xi) through the closed forms.
double exp_closed_family(const OperatorFamily& fam, std::size_t m, int nu, double xi);

/// Sentinel-aware R_m(f; p): at infinity this is scalar_factor(m) * lim f.
double family_at(const OperatorFamily& fam, std::size_t m, const LimitFunction& f,
                 const HalfLinePoint& p, const SummationControl& ctl);

/// Evaluates m -> R_m(f; p) with memoization.  Exponential test functions
/// take the closed form (with a cached exponent table and a small-argument
/// expansion, so large index ranges stay cheap); everything else goes
/// through szasz_eval.  Instances are single-threaded.
class OperatorSequence {
public:
    OperatorSequence(const OperatorFamily& fam, const LimitFunction& f, HalfLinePoint p,
                     SummationControl ctl);

    double operator()(std::size_t m) const;

    /// Bound on sup_m |R_m(f; p)| for tail certification.
    double envelope() const { return envelope_; }

private:
    double compute(std::size_t m) const;

    OperatorFamily fam_;
    LimitFunction f_;
    HalfLinePoint point_;
    SummationControl ctl_;
    double envelope_ = 1.0;

    // closed-form route state (exponential test functions only)
    bool closed_route_ = false;
    int nu_ = 0;
    double base_ = 1.0; // e^{-nu xi}
    mutable std::vector<double> exponent_dev_; // (m+1)(e^{-u}-1+u), u = nu/(m+1)

    mutable std::vector<double> cache_;
    mutable std::vector<unsigned char> have_;
};

} // namespace korsum
