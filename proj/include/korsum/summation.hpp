#pragma once

#ifdef __FAST_MATH__
#error "fast-math defeats compensated summation; build without it"
#endif

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace korsum {

/// Thrown when a certified series truncation cannot meet its tolerance
/// within the configured term budget.
class truncation_error : public std::runtime_error {
public:
    explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when adaptive quadrature exhausts its subdivision budget.
class quadrature_error : public std::runtime_error {
public:
    explicit quadrature_error(const std::string& what) : std::runtime_error(what) {}
};

/// Kahan-Babuska (Neumaier) accumulator.  Deterministic for a fixed
/// insertion order; tolerates heavy cancellation.
class CompensatedSum {
public:
    void add(double x) noexcept {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            carry_ += (sum_ - t) + x;
        } else {
            carry_ += (x - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

/// Truncation policy for the Poisson-weighted and power-series sums.
struct SummationControl {
    double tail_tolerance = 1e-12;
    std::size_t max_terms = 1'000'000;

    SummationControl() = default;
    SummationControl(double tol, std::size_t terms) : tail_tolerance(tol), max_terms(terms) {
        if (!(tol > 0.0) || !(tol < 1.0)) {
            throw std::invalid_argument("SummationControl: tail_tolerance must lie in (0,1)");
        }
        if (terms < 64) {
            throw std::invalid_argument("SummationControl: max_terms must be at least 64");
        }
    }
};

} // namespace korsum
