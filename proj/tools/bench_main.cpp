// Compares the serial reference against the OpenMP kernels on the two
// workloads that dominate real runs: closed-form oracle scans and an
// integral-mode error row.  Results must agree bitwise.
#include <chrono>
#include <cmath>
#include <cstdio>

#include "korsum/integral.hpp"
#include "korsum/korovkin.hpp"
#include "korsum/parallel.hpp"

using namespace korsum;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<double()>& work, double* result) {
    const auto t0 = Clock::now();
    *result = work();
    const auto t1 = Clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void report(const char* name, const std::function<double(Exec)>& workload) {
    double serial_result = 0.0, parallel_result = 0.0;
    const double serial_ms =
        time_ms([&] { return workload(Exec::serial); }, &serial_result);
    const double parallel_ms =
        time_ms([&] { return workload(Exec::openmp); }, &parallel_result);
    std::printf("%-28s %10.1f ms %10.1f ms  x%5.2f  |delta| = %.3g\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms,
                std::abs(serial_result - parallel_result));
}

} // namespace

int main() {
    const SummationControl ctl;

    // worst |szasz series - closed form| over m <= 50, xi in [0,10], nu
    const auto oracle_scan = [&](Exec exec) {
        const HalfLineGrid grid = HalfLineGrid::uniform(10.0, 501, false);
        const std::size_t total = 50 * grid.nodes.size() * 3;
        return max_over_indices(exec, total, [&](std::size_t idx) {
            const std::size_t m = 1 + idx % 50;
            const std::size_t rest = idx / 50;
            const double xi = grid.nodes[rest % grid.nodes.size()];
            const int nu = static_cast<int>(rest / grid.nodes.size());
            const double series = szasz_eval(m, test_exponential(nu), xi, ctl);
            const double closed = szasz_exp_closed(m, nu, xi);
            return std::abs(series - closed) / std::max(1.0, std::abs(closed));
        });
    };
    report("closed-form oracle scan", oracle_scan);

    // sup-norm error of the masked family under the integral route, s = 999
    const auto masked_row = [&](Exec exec) {
        const OperatorFamily masked = make_family(FamilyKind::masked);
        const LimitFunction phi1 = test_exponential(1);
        const HalfLineGrid grid = HalfLineGrid::default_grid();
        return max_over_indices(exec, grid.nodes.size(), [&](std::size_t i) {
            const double xi = grid.nodes[i];
            return std::abs(f_operator_closed(masked, 999.0, phi1, xi, ctl) - phi1(xi));
        });
    };
    report("masked integral row s=999", masked_row);

    // Holhos chain residual sweep
    const auto holhos_sweep = [&](Exec exec) {
        const HalfLineGrid grid = HalfLineGrid::default_grid();
        const std::size_t m_count = 1000;
        return max_over_indices(exec, m_count * grid.nodes.size(), [&](std::size_t idx) {
            const std::size_t m = 1 + idx / grid.nodes.size();
            const double xi = grid.nodes[idx % grid.nodes.size()];
            const double bm = beta(m);
            const double left = std::exp(-xi * bm) - std::exp(-xi);
            const double right = (1.0 - bm * bm) / (2.0 * std::exp(1.0) * bm);
            return left - right; // <= 0 when the chain holds
        });
    };
    report("holhos chain sweep", holhos_sweep);

    return 0;
}
