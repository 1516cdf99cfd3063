#include "korsum/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace korsum {

AxisTransform axis_for_mode(ExperimentMode mode, const PowerSeriesMethod& method) {
    if (mode == ExperimentMode::classical) {
        return AxisTransform::identity;
    }
    if (mode == ExperimentMode::power_series && std::isfinite(method.radius)) {
        return AxisTransform::neg_log10_gap;
    }
    return AxisTransform::log10_param;
}

namespace {

constexpr double kWidth = 720.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 20.0, kTop = 40.0, kBottom = 50.0;
constexpr double kErrorFloor = 1e-18;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<double> linear_ticks(double lo, double hi, int want) {
    std::vector<double> ticks;
    if (!(hi > lo)) {
        ticks.push_back(lo);
        return ticks;
    }
    const double raw = (hi - lo) / want;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double mult : {1.0, 2.0, 5.0, 10.0}) {
        if (mag * mult >= raw) {
            step = mag * mult;
            break;
        }
    }
    for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
        ticks.push_back(t);
    }
    return ticks;
}

const char* axis_label(AxisTransform axis) {
    switch (axis) {
    case AxisTransform::identity: return "parameter";
    case AxisTransform::log10_param: return "log10(parameter)";
    case AxisTransform::neg_log10_gap: return "-log10(R - y)";
    }
    return "parameter";
}

} // namespace

std::string render_error_table_svg(const ErrorTable& table, AxisTransform axis, double radius,
                                   const std::string& title) {
    const auto xmap = [&](double p) {
        switch (axis) {
        case AxisTransform::identity: return p;
        case AxisTransform::log10_param: return std::log10(p);
        case AxisTransform::neg_log10_gap: return -std::log10(std::max(radius - p, 1e-300));
        }
        return p;
    };

    struct Pt {
        double x, y;
    };
    std::vector<std::vector<Pt>> series(table.functions.size());
    double xlo = HUGE_VAL, xhi = -HUGE_VAL, ylo = HUGE_VAL, yhi = -HUGE_VAL;
    for (const auto& row : table.rows) {
        if (row.failed) {
            continue;
        }
        const double x = xmap(row.parameter);
        for (std::size_t i = 0; i < table.functions.size(); ++i) {
            const double y = std::log10(std::max(std::abs(row.errors[i]), kErrorFloor));
            series[i].push_back({x, y});
            xlo = std::min(xlo, x);
            xhi = std::max(xhi, x);
            ylo = std::min(ylo, y);
            yhi = std::max(yhi, y);
        }
    }
    if (!(xhi >= xlo)) { // no drawable rows
        xlo = 0.0;
        xhi = 1.0;
        ylo = -1.0;
        yhi = 0.0;
    }
    if (xhi - xlo < 1e-12) xhi = xlo + 1.0;
    if (yhi - ylo < 1e-12) yhi = ylo + 1.0;

    const auto px = [&](double x) {
        return kLeft + (x - xlo) / (xhi - xlo) * (kWidth - kLeft - kRight);
    };
    const auto py = [&](double y) {
        return kHeight - kBottom - (y - ylo) / (yhi - ylo) * (kHeight - kTop - kBottom);
    };

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << escape_xml(title) << "</text>\n";

    // axes
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\""
        << kWidth - kRight << "\" y2=\"" << kHeight - kBottom
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
        << kHeight - kBottom << "\" stroke=\"black\" stroke-width=\"1\"/>\n";

    for (double t : linear_ticks(xlo, xhi, 6)) {
        const double x = px(t);
        out << "<line x1=\"" << x << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << x
            << "\" y2=\"" << kHeight - kBottom + 5 << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << x << "\" y=\"" << kHeight - kBottom + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
            << "</text>\n";
    }
    for (double t : linear_ticks(ylo, yhi, 6)) {
        const double y = py(t);
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << y << "\" x2=\"" << kLeft << "\" y2=\""
            << y << "\" stroke=\"black\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << fmt(t)
            << "</text>\n";
    }
    out << "<text x=\"" << (kLeft + kWidth - kRight) / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << axis_label(axis) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (kTop + kHeight - kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << (kTop + kHeight - kBottom) / 2
        << ")\">log10(sup error)</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        if (series[i].empty()) {
            continue;
        }
        const char* color = kPalette[i % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& pt : series[i]) {
            out << px(pt.x) << ',' << py(pt.y) << ' ';
        }
        out << "\"/>\n";
        // legend entry
        const double ly = kTop + 16.0 * static_cast<double>(i);
        out << "<line x1=\"" << kWidth - kRight - 150 << "\" y1=\"" << ly << "\" x2=\""
            << kWidth - kRight - 130 << "\" y2=\"" << ly << "\" stroke=\"" << color
            << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << kWidth - kRight - 124 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_xml(table.functions[i])
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

} // namespace korsum
