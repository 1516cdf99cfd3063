#pragma once

#include <string>

#include "korsum/korovkin.hpp"

namespace korsum {

/// Horizontal axis mapping for convergence plots.
enum class AxisTransform {
    identity,      // classical mode: x = m
    log10_param,   // Borel / integral schedules: x = log10(parameter)
    neg_log10_gap  // finite-radius schedules: x = -log10(R - y)
};

AxisTransform axis_for_mode(ExperimentMode mode, const PowerSeriesMethod& method);

/// Self-contained SVG: log10(sup error) against the transformed parameter,
/// one polyline per test function, legend as embedded text.
std::string render_error_table_svg(const ErrorTable& table, AxisTransform axis, double radius,
                                   const std::string& title);

} // namespace korsum
