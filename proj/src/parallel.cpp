#include "korsum/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace korsum {

Exec default_exec() {
#ifdef _OPENMP
    return Exec::openmp;
#else
    return Exec::serial;
#endif
}

namespace {

// first exception wins; the rest are dropped
class ExceptionCollector {
public:
    void capture() {
        std::lock_guard<std::mutex> lock(mutex_);
        if (!first_) {
            first_ = std::current_exception();
        }
    }
    void rethrow_if_any() const {
        if (first_) {
            std::rethrow_exception(first_);
        }
    }

private:
    std::mutex mutex_;
    std::exception_ptr first_;
};

} // namespace

double max_over_indices(Exec exec, std::size_t n, const std::function<double(std::size_t)>& fn) {
    double best = -HUGE_VAL;
    if (n == 0) {
        return best;
    }
#ifdef _OPENMP
    if (exec == Exec::openmp) {
        ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 8) reduction(max : best)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                best = std::max(best, fn(static_cast<std::size_t>(i)));
            } catch (...) {
                errors.capture();
            }
        }
        errors.rethrow_if_any();
        return best;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        best = std::max(best, fn(i));
    }
    return best;
}

void apply_over_indices(Exec exec, std::size_t n, const std::function<void(std::size_t)>& fn) {
#ifdef _OPENMP
    if (exec == Exec::openmp) {
        ExceptionCollector errors;
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            try {
                fn(static_cast<std::size_t>(i));
            } catch (...) {
                errors.capture();
            }
        }
        errors.rethrow_if_any();
        return;
    }
#else
    (void)exec;
#endif
    for (std::size_t i = 0; i < n; ++i) {
        fn(i);
    }
}

} // namespace korsum
