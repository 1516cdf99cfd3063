#include "korsum/functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace korsum {

double LimitFunction::operator()(double xi) const {
    if (!std::isfinite(xi)) {
        throw std::domain_error("LimitFunction: non-finite argument (use the infinity sentinel)");
    }
    if (xi < 0.0) {
        throw std::domain_error("LimitFunction: argument below 0");
    }
    return f(xi);
}

double LimitFunction::at(const HalfLinePoint& p) const {
    return p.is_infinity ? limit_at_infinity : (*this)(p.value);
}

double eval(const LimitFunction& f, const HalfLinePoint& p) { return f.at(p); }

LimitFunction test_exponential(int nu) {
    if (nu < 0 || nu > 2) {
        throw std::invalid_argument("test_exponential: order must be 0, 1 or 2");
    }
    LimitFunction g;
    g.f = [nu](double xi) { return std::exp(-nu * xi); };
    g.limit_at_infinity = (nu == 0) ? 1.0 : 0.0;
    g.label = "phi" + std::to_string(nu);
    g.exponential_order = nu;
    return g;
}

LimitFunction constant_function(double c) {
    LimitFunction g;
    g.f = [c](double) { return c; };
    g.limit_at_infinity = c;
    g.label = "const";
    if (c == 1.0) {
        g.exponential_order = 0;
    }
    return g;
}

LimitFunction inverse_linear() {
    LimitFunction g;
    g.f = [](double xi) { return 1.0 / (1.0 + xi); };
    g.limit_at_infinity = 0.0;
    g.label = "inv_linear";
    return g;
}

LimitFunction exp_difference() {
    LimitFunction g;
    g.f = [](double xi) { return std::exp(-xi) - std::exp(-2.0 * xi); };
    g.limit_at_infinity = 0.0;
    g.label = "exp_diff";
    return g;
}

LimitFunction builtin_function(const std::string& name) {
    if (name == "phi0") return test_exponential(0);
    if (name == "phi1") return test_exponential(1);
    if (name == "phi2") return test_exponential(2);
    if (name == "inv_linear") return inverse_linear();
    if (name == "exp_diff") return exp_difference();
    if (name == "one") return constant_function(1.0);
    throw std::invalid_argument("unknown builtin function '" + name + "'");
}

HalfLineGrid HalfLineGrid::uniform(double cutoff, std::size_t n, bool include_infinity) {
    if (!(cutoff > 0.0) || n < 2) {
        throw std::invalid_argument("HalfLineGrid::uniform: need cutoff > 0 and n >= 2");
    }
    HalfLineGrid g;
    g.cutoff = cutoff;
    g.include_infinity = include_infinity;
    g.nodes.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        g.nodes[i] = cutoff * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    g.nodes.front() = 0.0;
    g.nodes.back() = cutoff;
    return g;
}

HalfLineGrid HalfLineGrid::default_grid() { return uniform(40.0, 2001, true); }

HalfLineGrid HalfLineGrid::refined() const {
    HalfLineGrid g;
    g.cutoff = cutoff;
    g.include_infinity = include_infinity;
    g.nodes.reserve(2 * nodes.size() - 1);
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
        g.nodes.push_back(nodes[i]);
        g.nodes.push_back(0.5 * (nodes[i] + nodes[i + 1]));
    }
    g.nodes.push_back(nodes.back());
    return g;
}

void HalfLineGrid::validate() const {
    if (nodes.empty()) {
        throw std::invalid_argument("HalfLineGrid: empty node list");
    }
    if (nodes.front() != 0.0) {
        throw std::invalid_argument("HalfLineGrid: first node must be 0");
    }
    if (!std::is_sorted(nodes.begin(), nodes.end(), std::less_equal<double>())) {
        throw std::invalid_argument("HalfLineGrid: nodes must be strictly increasing");
    }
}

double sup_norm(const LimitFunction& f, const HalfLineGrid& grid) {
    grid.validate();
    double best = 0.0;
    for (double x : grid.nodes) {
        best = std::max(best, std::abs(f(x)));
    }
    if (grid.include_infinity) {
        best = std::max(best, std::abs(f.limit_at_infinity));
    }
    return best;
}

double sup_norm_refined(const LimitFunction& f, HalfLineGrid grid, double tol, int max_rounds) {
    double value = sup_norm(f, grid);
    for (int round = 0; round < max_rounds; ++round) {
        grid = grid.refined();
        const double next = sup_norm(f, grid);
        if (std::abs(next - value) < tol) {
            return next;
        }
        value = next;
    }
    return value;
}

} // namespace korsum
