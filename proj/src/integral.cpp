#include "korsum/integral.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace korsum {

IntegralKernel preset_abel_kernel() {
    IntegralKernel k;
    k.label = "abel";
    k.density = [](double s, double y) {
        if (!(s > 0.0)) {
            throw std::domain_error("abel kernel: s must be > 0");
        }
        if (y < 0.0) {
            throw std::domain_error("abel kernel: y must be >= 0");
        }
        return std::exp(-y / s) / s;
    };
    k.tail_mass = [](double s, double y0) { return std::exp(-y0 / s); };
    k.cutoff = [](double s, double needed) {
        if (needed >= 1.0) {
            return s;
        }
        return s * std::log(1.0 / needed);
    };
    k.regular_declared = true;
    return k;
}

IntegralKernel zero_kernel() {
    IntegralKernel k;
    k.label = "zero";
    k.density = [](double, double) { return 0.0; };
    k.tail_mass = [](double, double) { return 0.0; };
    k.cutoff = [](double, double) { return 1.0; };
    return k;
}

void QuadratureSpec::validate() const {
    if (!(abs_tolerance > 0.0)) {
        throw std::invalid_argument("QuadratureSpec: abs_tolerance must be > 0");
    }
    if (max_subdivisions < 1) {
        throw std::invalid_argument("QuadratureSpec: max_subdivisions must be >= 1");
    }
}

namespace {

struct Segment {
    double a, b;
    double fa, fm, fb;
    double simpson;
    double tol;
    int depth;
};

double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

} // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tolerance, int max_subdivisions) {
    if (!(b > a)) {
        return 0.0;
    }
    const double m0 = 0.5 * (a + b);
    Segment whole{a, b, f(a), f(m0), f(b), 0.0, abs_tolerance, 0};
    whole.simpson = simpson(a, b, whole.fa, whole.fm, whole.fb);

    std::vector<Segment> stack{whole};
    CompensatedSum acc;
    int splits = 0;
    while (!stack.empty()) {
        Segment seg = stack.back();
        stack.pop_back();

        const double ml = 0.5 * (seg.a + 0.5 * (seg.a + seg.b));
        const double mr = 0.5 * (0.5 * (seg.a + seg.b) + seg.b);
        const double fml = f(ml);
        const double fmr = f(mr);
        const double mid = 0.5 * (seg.a + seg.b);
        const double left = simpson(seg.a, mid, seg.fa, fml, seg.fm);
        const double right = simpson(mid, seg.b, seg.fm, fmr, seg.fb);
        const double delta = left + right - seg.simpson;

        // depth cap keeps roundoff-limited panels from spinning forever
        if (std::abs(delta) <= 15.0 * seg.tol || seg.depth >= 52) {
            acc.add(left + right + delta / 15.0);
            continue;
        }
        if (++splits > max_subdivisions) {
            throw quadrature_error("integrate_adaptive: subdivision budget exhausted");
        }
        stack.push_back({mid, seg.b, seg.fm, fmr, seg.fb, right, 0.5 * seg.tol, seg.depth + 1});
        stack.push_back({seg.a, mid, seg.fa, fml, seg.fm, left, 0.5 * seg.tol, seg.depth + 1});
    }
    return acc.value();
}

double kernel_mass(const IntegralKernel& kernel, double s, const QuadratureSpec& quad) {
    quad.validate();
    double y0 = quad.y_cutoff;
    if (!(y0 > 0.0)) {
        if (!kernel.cutoff) {
            throw std::invalid_argument("kernel_mass: no y_cutoff and kernel lacks a cutoff rule");
        }
        y0 = kernel.cutoff(s, 0.5 * quad.abs_tolerance);
    }
    double mass = integrate_adaptive([&](double y) { return kernel.density(s, y); }, 0.0, y0,
                                     0.5 * quad.abs_tolerance, quad.max_subdivisions);
    if (kernel.tail_mass) {
        mass += kernel.tail_mass(s, y0);
    }
    return mass;
}

double v_operator(const PowerSeriesMethod& method, const OperatorFamily& fam, double y,
                  const LimitFunction& f, double xi, const SummationControl& ctl) {
    return ps_transform_operator(method, fam, f, y, xi, ctl);
}

double f_operator_quadrature_at(const IntegralKernel& kernel, const PowerSeriesMethod& method,
                                const OperatorFamily& fam, double s, const LimitFunction& f,
                                const HalfLinePoint& p, const QuadratureSpec& quad,
                                const SummationControl& ctl) {
    quad.validate();
    const double m_bound = m_bound_estimate(method, fam, default_schedule(method), ctl);
    if (!std::isfinite(m_bound)) {
        throw std::runtime_error("f_operator_quadrature: family bound M is not finite");
    }
    const double f_scale =
        std::max({1.0, std::abs(f.f(0.0)), std::abs(f.limit_at_infinity)});

    double y0 = quad.y_cutoff;
    if (!(y0 > 0.0)) {
        if (!kernel.cutoff) {
            throw std::invalid_argument(
                "f_operator_quadrature: no y_cutoff and kernel lacks a cutoff rule");
        }
        y0 = kernel.cutoff(s, 0.5 * quad.abs_tolerance / (m_bound * f_scale));
    }

    OperatorSequence seq(fam, f, p, ctl);
    const auto integrand = [&](double y) {
        const double v = (y > 0.0) ? ps_transform_sequence(method, seq, y, ctl) : seq(0);
        return kernel.density(s, y) * v;
    };
    // the dropped tail is below M ||f|| times the kernel tail mass, which the
    // cutoff rule put under half the tolerance
    return integrate_adaptive(integrand, 0.0, y0, 0.5 * quad.abs_tolerance,
                              quad.max_subdivisions);
}

double f_operator_quadrature(const IntegralKernel& kernel, const PowerSeriesMethod& method,
                             const OperatorFamily& fam, double s, const LimitFunction& f,
                             double xi, const QuadratureSpec& quad, const SummationControl& ctl) {
    return f_operator_quadrature_at(kernel, method, fam, s, f, HalfLinePoint::at(xi), quad, ctl);
}

double f_operator_closed_at(const OperatorFamily& fam, double s, const LimitFunction& f,
                            const HalfLinePoint& p, const SummationControl& ctl) {
    if (!(s >= 0.0) || !std::isfinite(s)) {
        throw std::domain_error("f_operator_closed: s must be finite and >= 0");
    }
    OperatorSequence seq(fam, f, p, ctl);
    if (s == 0.0) {
        return seq(0); // weights collapse onto m = 0
    }
    const double y = s / (s + 1.0);
    return ps_transform_sequence(preset_abel(), seq, y, ctl);
}

double f_operator_closed(const OperatorFamily& fam, double s, const LimitFunction& f, double xi,
                         const SummationControl& ctl) {
    return f_operator_closed_at(fam, s, f, HalfLinePoint::at(xi), ctl);
}

double m_bound_estimate(const PowerSeriesMethod& method, const OperatorFamily& fam,
                        const ApproachSchedule& schedule, const SummationControl& ctl) {
    schedule.validate(method.radius);
    const double envelope = fam.scalar_bound();
    double best = 0.0;
    for (double y : schedule.points) {
        const double value = ps_transform(
            method, [&fam](std::size_t m) { return std::abs(fam.scalar_factor(m)); }, y, ctl,
            envelope);
        best = std::max(best, value);
    }
    return best;
}

} // namespace korsum
