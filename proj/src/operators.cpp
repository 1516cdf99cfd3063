#include "korsum/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace korsum {

namespace {

double log_poisson_weight(std::size_t k, double lambda) {
    const double kk = static_cast<double>(k);
    return kk * std::log(lambda) - lambda - std::lgamma(kk + 1.0);
}

// refresh the multiplicative weight recurrence this often to cap drift
constexpr std::size_t kRefreshStride = 4096;

} // namespace

double poisson_weighted_sum(double lambda, const std::function<double(std::size_t)>& g,
                            const SummationControl& ctl, double envelope,
                            std::size_t* terms_out) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw std::domain_error("poisson_weighted_sum: lambda must be finite and >= 0");
    }
    if (lambda == 0.0) {
        if (terms_out) *terms_out = 1;
        return g(0);
    }
    const double bound = std::max(envelope, 1.0);
    const double side_budget = 0.5 * ctl.tail_tolerance / bound;

    const std::size_t k0 = static_cast<std::size_t>(lambda);
    const double w0 = std::exp(log_poisson_weight(k0, lambda));

    CompensatedSum acc;
    acc.add(w0 * g(k0));
    std::size_t terms = 1;

    std::size_t kr = k0;
    double wr = w0;
    bool done_right = false;

    std::size_t kl = k0;
    double wl = w0;
    bool done_left = (k0 == 0);

    while (!done_right || !done_left) {
        if (terms > ctl.max_terms) {
            throw truncation_error("poisson_weighted_sum: max_terms reached before tail bound");
        }
        if (!done_right) {
            wr *= lambda / static_cast<double>(kr + 1);
            ++kr;
            if ((kr - k0) % kRefreshStride == 0) {
                wr = std::exp(log_poisson_weight(kr, lambda));
            }
            acc.add(wr * g(kr));
            ++terms;
            const double r = lambda / static_cast<double>(kr + 1);
            if (wr == 0.0 || (r < 1.0 && wr * r / (1.0 - r) < side_budget)) {
                done_right = true;
            }
        }
        if (!done_left) {
            wl *= static_cast<double>(kl) / lambda;
            --kl;
            if ((k0 - kl) % kRefreshStride == 0) {
                wl = std::exp(log_poisson_weight(kl, lambda));
            }
            acc.add(wl * g(kl));
            ++terms;
            if (kl == 0) {
                done_left = true;
            } else {
                const double rho = static_cast<double>(kl) / lambda;
                if (wl == 0.0 || (rho < 1.0 && wl * rho / (1.0 - rho) < side_budget)) {
                    done_left = true;
                }
            }
        }
    }
    if (terms_out) *terms_out = terms;
    return acc.value();
}

double szasz_eval(std::size_t m, const LimitFunction& f, double xi, const SummationControl& ctl) {
    if (m < 1) {
        throw std::domain_error("szasz_eval: m must be >= 1");
    }
    if (!std::isfinite(xi) || xi < 0.0) {
        throw std::domain_error("szasz_eval: xi must be finite and >= 0");
    }
    if (xi == 0.0) {
        return f(0.0); // only the k=0 term survives
    }
    const double md = static_cast<double>(m);
    const double lambda = md * xi;
    const double f_bound =
        std::max({1.0, std::abs(f.limit_at_infinity), std::abs(f.f(0.0)), std::abs(f.f(xi))});
    return poisson_weighted_sum(
        lambda, [&](std::size_t k) { return f.f(static_cast<double>(k) / md); }, ctl, f_bound);
}

double szasz_exp_closed(std::size_t m, int nu, double xi) {
    if (m < 1) {
        throw std::domain_error("szasz_exp_closed: m must be >= 1");
    }
    if (nu < 0 || nu > 2) {
        throw std::domain_error("szasz_exp_closed: nu must be 0, 1 or 2");
    }
    if (nu == 0) {
        return 1.0;
    }
    const double md = static_cast<double>(m);
    return std::exp(xi * md * std::expm1(-nu / md));
}

bool is_perfect_square(std::size_t n) {
    const auto r = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(n))));
    for (std::size_t c : {r > 0 ? r - 1 : 0, r, r + 1}) {
        if (c * c == n) {
            return true;
        }
    }
    return false;
}

double OperatorFamily::scalar_factor(std::size_t m) const {
    switch (kind) {
    case FamilyKind::szasz_shifted:
        return 1.0;
    case FamilyKind::alternating:
        return (m % 2 == 0) ? 2.0 : 0.0; // 1 + sigma_m
    case FamilyKind::masked:
        return (m == 0 || is_perfect_square(m)) ? 0.0 : 1.0;
    case FamilyKind::scaled:
        if (!scale_sequence) {
            throw std::logic_error("scaled family requires a scale_sequence");
        }
        return scale_sequence(m);
    }
    throw std::logic_error("unreachable family kind");
}

double OperatorFamily::scalar_bound() const {
    switch (kind) {
    case FamilyKind::szasz_shifted:
    case FamilyKind::masked:
        return 1.0;
    case FamilyKind::alternating:
        return 2.0;
    case FamilyKind::scaled: {
        double bound = 1.0;
        for (std::size_t m = 0; m <= 4096; ++m) {
            bound = std::max(bound, std::abs(scalar_factor(m)));
        }
        return bound;
    }
    }
    throw std::logic_error("unreachable family kind");
}

OperatorFamily make_family(FamilyKind kind, std::function<double(std::size_t)> scale) {
    OperatorFamily fam;
    fam.kind = kind;
    switch (kind) {
    case FamilyKind::szasz_shifted: fam.label = "szasz_shifted"; break;
    case FamilyKind::alternating: fam.label = "alternating"; break;
    case FamilyKind::masked: fam.label = "masked"; break;
    case FamilyKind::scaled: fam.label = "scaled"; break;
    }
    if (kind == FamilyKind::scaled) {
        fam.scale_sequence = scale ? std::move(scale) : [](std::size_t) { return 1.0; };
    }
    return fam;
}

OperatorFamily family_by_name(const std::string& name) {
    if (name == "szasz_shifted") return make_family(FamilyKind::szasz_shifted);
    if (name == "alternating") return make_family(FamilyKind::alternating);
    if (name == "masked") return make_family(FamilyKind::masked);
    if (name == "scaled") return make_family(FamilyKind::scaled);
    throw std::invalid_argument("unknown operator family '" + name + "'");
}

double family_eval(const OperatorFamily& fam, std::size_t m, const LimitFunction& f, double xi,
                   const SummationControl& ctl) {
    const double scalar = fam.scalar_factor(m);
    if (scalar == 0.0) {
        return 0.0;
    }
    return scalar * szasz_eval(m + 1, f, xi, ctl);
}

double exp_closed_family(const OperatorFamily& fam, std::size_t m, int nu, double xi) {
    const double scalar = fam.scalar_factor(m);
    if (scalar == 0.0) {
        return 0.0;
    }
    return scalar * szasz_exp_closed(m + 1, nu, xi);
}

double family_at(const OperatorFamily& fam, std::size_t m, const LimitFunction& f,
                 const HalfLinePoint& p, const SummationControl& ctl) {
    if (p.is_infinity) {
        // S_{m+1} preserves the limit at infinity
        return fam.scalar_factor(m) * f.limit_at_infinity;
    }
    if (f.exponential_order) {
        return exp_closed_family(fam, m, *f.exponential_order, p.value);
    }
    return family_eval(fam, m, f, p.value, ctl);
}

namespace {

// e^{-u} - 1 + u, accurate for small u without expm1
double expm1_plus_u(double u) {
    if (u >= 0.01) {
        return std::expm1(-u) + u;
    }
    // u^2/2 - u^3/6 + u^4/24 - u^5/120 + u^6/720; next term < 4e-14 rel
    const double u2 = u * u;
    return u2 * (0.5 + u * (-1.0 / 6.0 + u * (1.0 / 24.0 + u * (-1.0 / 120.0 + u / 720.0))));
}

// e^z for small z >= 0 without the libm call
double exp_small(double z) {
    if (z >= 0.01) {
        return std::exp(z);
    }
    return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0)));
}

} // namespace

OperatorSequence::OperatorSequence(const OperatorFamily& fam, const LimitFunction& f,
                                   HalfLinePoint p, SummationControl ctl)
    : fam_(fam), f_(f), point_(p), ctl_(ctl) {
    const double scalar_bound = fam.scalar_bound();
    if (p.is_infinity) {
        envelope_ = std::max(1.0, scalar_bound * std::abs(f.limit_at_infinity));
        return;
    }
    if (f.exponential_order) {
        closed_route_ = true;
        nu_ = *f.exponential_order;
        base_ = std::exp(-static_cast<double>(nu_) * p.value);
        envelope_ = std::max(1.0, scalar_bound); // |S_{m+1} phi_nu| <= 1
        return;
    }
    envelope_ = std::max(
        {1.0, scalar_bound * std::abs(f.f(0.0)), scalar_bound * std::abs(f.limit_at_infinity)});
}

double OperatorSequence::compute(std::size_t m) const {
    const double scalar = fam_.scalar_factor(m);
    if (scalar == 0.0) {
        return 0.0;
    }
    if (point_.is_infinity) {
        return scalar * f_.limit_at_infinity;
    }
    if (closed_route_) {
        if (nu_ == 0) {
            return scalar;
        }
        // S_{m+1}(phi_nu; xi) = e^{-nu xi} * e^{xi dev},
        // dev = nu - (m+1)(1 - e^{-nu/(m+1)}) = (m+1)(e^{-u} - 1 + u)
        const double md = static_cast<double>(m + 1);
        const double u = static_cast<double>(nu_) / md;
        const double dev = md * expm1_plus_u(u);
        const double z = point_.value * dev;
        if (z >= 30.0) {
            // rare small-m large-xi corner; evaluate the plain closed form
            return scalar * szasz_exp_closed(m + 1, nu_, point_.value);
        }
        return scalar * base_ * exp_small(z);
    }
    return scalar * szasz_eval(m + 1, f_, point_.value, ctl_);
}

double OperatorSequence::operator()(std::size_t m) const {
    if (closed_route_ || point_.is_infinity) {
        return compute(m); // cheap; no memo needed
    }
    if (m >= cache_.size()) {
        const std::size_t grown = std::max<std::size_t>(m + 1, cache_.size() * 2 + 16);
        cache_.resize(grown, 0.0);
        have_.resize(grown, 0);
    }
    if (!have_[m]) {
        cache_[m] = compute(m);
        have_[m] = 1;
    }
    return cache_[m];
}

} // namespace korsum
