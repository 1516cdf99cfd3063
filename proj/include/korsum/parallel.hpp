#pragma once

#include <cstddef>
#include <functional>

namespace korsum {

/// Execution policy for the data-parallel kernels.  The serial path is the
/// reference; the OpenMP path must reproduce it bitwise (grid reductions
/// use max, which is exact regardless of order).
enum class Exec { serial, openmp };

Exec default_exec();

/// max over i < n of fn(i).  fn must be pure; exceptions thrown by fn are
/// captured and rethrown after the loop.
double max_over_indices(Exec exec, std::size_t n, const std::function<double(std::size_t)>& fn);

/// fn(i) for every i < n, order unspecified under openmp; exceptions are
/// captured and the first one rethrown after the loop.
void apply_over_indices(Exec exec, std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace korsum
