#include "doctest.h"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "korsum/korovkin.hpp"
#include "korsum/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace korsum;

TEST_CASE("serial and OpenMP maxima agree bitwise") {
#ifdef _OPENMP
    omp_set_num_threads(4);
#endif
    const auto fn = [](std::size_t i) {
        return std::sin(static_cast<double>(i) * 0.7) * std::exp(-static_cast<double>(i % 97) / 13.0);
    };
    const double serial = max_over_indices(Exec::serial, 100'000, fn);
    const double parallel = max_over_indices(Exec::openmp, 100'000, fn);
    CHECK(serial == parallel); // max is exact, any order
}

TEST_CASE("apply_over_indices touches every index once") {
    std::vector<std::atomic<int>> hits(512);
    apply_over_indices(Exec::openmp, hits.size(), [&](std::size_t i) { hits[i].fetch_add(1); });
    for (const auto& h : hits) {
        CHECK(h.load() == 1);
    }
}

TEST_CASE("exceptions cross the parallel region") {
    CHECK_THROWS_AS(max_over_indices(Exec::openmp, 64,
                                     [](std::size_t i) -> double {
                                         if (i == 13) {
                                             throw std::runtime_error("boom");
                                         }
                                         return 0.0;
                                     }),
                    std::runtime_error);
    CHECK_THROWS_AS(apply_over_indices(Exec::openmp, 64,
                                       [](std::size_t i) {
                                           if (i == 13) {
                                               throw std::runtime_error("boom");
                                           }
                                       }),
                    std::runtime_error);
}

TEST_CASE("experiments reproduce bitwise across execution policies") {
    ExperimentConfig cfg;
    cfg.family = make_family(FamilyKind::masked);
    cfg.mode = ExperimentMode::integral;
    cfg.method = preset_borel();
    cfg.kernel = preset_abel_kernel();
    cfg.schedule = {9.0, 99.0};
    cfg.grid = HalfLineGrid::uniform(40.0, 201, true);

    cfg.exec = Exec::serial;
    const ErrorTable serial = run_experiment(cfg);
    cfg.exec = Exec::openmp;
    const ErrorTable parallel = run_experiment(cfg);

    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (std::size_t r = 0; r < serial.rows.size(); ++r) {
        for (std::size_t i = 0; i < serial.functions.size(); ++i) {
            CHECK(serial.rows[r].errors[i] == parallel.rows[r].errors[i]);
        }
    }
}
