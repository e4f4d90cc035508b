#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "polya/analysis.hpp"
#include "polya/io.hpp"
#include "polya/simulate.hpp"

namespace polya {
namespace svg {

namespace detail {

inline std::string fixed2(double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
    if (ec != std::errc()) throw std::runtime_error("svg: coordinate formatting failed");
    return std::string(buf, ptr);
}

struct Frame {
    static constexpr double kWidth = 720.0;
    static constexpr double kHeight = 480.0;
    static constexpr double kLeft = 64.0;
    static constexpr double kRight = 24.0;
    static constexpr double kTop = 24.0;
    static constexpr double kBottom = 48.0;

    double x_min, x_max, y_min, y_max;

    /// Degenerate ranges get a unit pad on each side so a single point maps
    /// to the middle of the plot.
    Frame(double xmin, double xmax, double ymin, double ymax)
        : x_min(xmin), x_max(xmax), y_min(ymin), y_max(ymax) {
        if (x_min == x_max) { x_min -= 1.0; x_max += 1.0; }
        if (y_min == y_max) { y_min -= 1.0; y_max += 1.0; }
    }

    double px(double x) const {
        return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
        return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom);
    }
};

inline void open_document(std::string& out, const std::string& title) {
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"720\" height=\"480\" "
           "viewBox=\"0 0 720 480\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"720\" height=\"480\" fill=\"white\"/>\n";
    out += "<text x=\"360\" y=\"16\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"12\">" + title + "</text>\n";
}

inline void draw_axes(std::string& out, const Frame& f, const std::string& x_label,
                      const std::string& y_label) {
    out += "<rect x=\"" + fixed2(Frame::kLeft) + "\" y=\"" + fixed2(Frame::kTop) + "\" width=\"" +
           fixed2(Frame::kWidth - Frame::kLeft - Frame::kRight) + "\" height=\"" +
           fixed2(Frame::kHeight - Frame::kTop - Frame::kBottom) +
           "\" fill=\"none\" stroke=\"black\"/>\n";
    out += "<text x=\"" + fixed2((Frame::kLeft + Frame::kWidth - Frame::kRight) / 2.0) + "\" y=\"" +
           fixed2(Frame::kHeight - 12.0) + "\" text-anchor=\"middle\" font-family=\"monospace\" "
           "font-size=\"11\">" + x_label + "</text>\n";
    out += "<text x=\"14\" y=\"" + fixed2((Frame::kTop + Frame::kHeight - Frame::kBottom) / 2.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\" "
           "transform=\"rotate(-90 14 " +
           fixed2((Frame::kTop + Frame::kHeight - Frame::kBottom) / 2.0) + ")\">" + y_label +
           "</text>\n";
    out += "<text x=\"" + fixed2(Frame::kLeft) + "\" y=\"" + fixed2(Frame::kHeight - 30.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" +
           polya::detail::format_double(f.x_min) + "</text>\n";
    out += "<text x=\"" + fixed2(Frame::kWidth - Frame::kRight) + "\" y=\"" +
           fixed2(Frame::kHeight - 30.0) +
           "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"10\">" +
           polya::detail::format_double(f.x_max) + "</text>\n";
    out += "<text x=\"" + fixed2(Frame::kLeft - 6.0) + "\" y=\"" +
           fixed2(Frame::kHeight - Frame::kBottom) +
           "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" +
           polya::detail::format_double(f.y_min) + "</text>\n";
    out += "<text x=\"" + fixed2(Frame::kLeft - 6.0) + "\" y=\"" + fixed2(Frame::kTop + 4.0) +
           "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"10\">" +
           polya::detail::format_double(f.y_max) + "</text>\n";
}

inline const std::array<const char*, 10>& palette() {
    static const std::array<const char*, 10> colors = {
        "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
        "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors;
}

}  // namespace detail

/// Log-log scatter of a capital distribution curve. Only positive-weight
/// ranks appear (those carry log points).
inline std::string render_curve(const CapitalCurve& curve, const std::string& title = "capital distribution curve") {
    if (curve.log10_points.empty())
        throw std::domain_error("render_curve: no positive weights to plot");
    double xmin = curve.log10_points[0].first, xmax = xmin;
    double ymin = curve.log10_points[0].second, ymax = ymin;
    for (const auto& [lx, ly] : curve.log10_points) {
        xmin = std::min(xmin, lx); xmax = std::max(xmax, lx);
        ymin = std::min(ymin, ly); ymax = std::max(ymax, ly);
    }
    detail::Frame f(xmin, xmax, ymin, ymax);
    std::string out;
    detail::open_document(out, title);
    detail::draw_axes(out, f, "log10 rank", "log10 weight");
    for (const auto& [lx, ly] : curve.log10_points) {
        out += "<circle cx=\"" + detail::fixed2(f.px(lx)) + "\" cy=\"" +
               detail::fixed2(f.py(ly)) + "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

/// Weight-vs-step chart of a trajectory, one polyline per stock.
inline std::string render_trajectory(const Trajectory& traj, const std::string& title = "market weights") {
    if (traj.records.empty()) throw std::domain_error("render_trajectory: no recorded steps");
    const std::size_t m = traj.terminal.size();
    double ymax = 0.0;
    for (const auto& rec : traj.records) {
        const std::int64_t lvl = level(rec.state);
        if (lvl == 0) continue;
        for (std::int64_t c : rec.state)
            ymax = std::max(ymax, static_cast<double>(c) / static_cast<double>(lvl));
    }
    if (ymax == 0.0) ymax = 1.0;
    detail::Frame f(static_cast<double>(traj.records.front().step),
                    static_cast<double>(traj.records.back().step), 0.0, ymax);
    std::string out;
    detail::open_document(out, title);
    detail::draw_axes(out, f, "step", "weight");
    for (std::size_t s = 0; s < m; ++s) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += detail::palette()[s % detail::palette().size()];
        out += "\" stroke-width=\"1\" points=\"";
        bool first = true;
        for (const auto& rec : traj.records) {
            const std::int64_t lvl = level(rec.state);
            const double w =
                lvl > 0 ? static_cast<double>(rec.state[s]) / static_cast<double>(lvl) : 0.0;
            if (!first) out += ' ';
            out += detail::fixed2(f.px(static_cast<double>(rec.step)));
            out += ',';
            out += detail::fixed2(f.py(w));
            first = false;
        }
        out += "\"/>\n";
    }
    out += "</svg>\n";
    return out;
}

inline void write_svg(const std::filesystem::path& path, const std::string& content) {
    polya::detail::write_text_atomic(path, content);
}

}  // namespace svg
}  // namespace polya
