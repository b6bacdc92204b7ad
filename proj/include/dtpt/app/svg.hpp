#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "dtpt/csv.hpp"
#include "dtpt/fisher.hpp"

namespace dtpt::svg {

struct Series {
    std::string name;
    std::vector<double> y;
};

namespace detail {
constexpr double width = 720, height = 440, left = 70, right = 20, top = 30, bottom = 50;
constexpr const char* palette[] = {"#1b6ca8", "#d1495b", "#2e933c", "#6d597a", "#edae49"};

struct Range {
    double lo = INFINITY, hi = -INFINITY;
    void add(double v) {
        if (!std::isfinite(v)) return;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi == lo) lo -= 0.5, hi += 0.5;
    }
    double map(double v, double a, double b) const { return a + (v - lo) / (hi - lo) * (b - a); }
};

inline void header(std::ostream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << left << "\" y=\"20\">" << title << "</text>\n";
}

inline void axes(std::ostream& os, const Range& x, const Range& y, const std::string& xlabel) {
    const double x0 = left, x1 = width - right, y0 = height - bottom, y1 = top;
    os << "<rect x=\"" << x0 << "\" y=\"" << y1 << "\" width=\"" << x1 - x0 << "\" height=\"" << y0 - y1
       << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double fx = x.lo + (x.hi - x.lo) * k / 4, fy = y.lo + (y.hi - y.lo) * k / 4;
        os << "<text x=\"" << x.map(fx, x0, x1) << "\" y=\"" << y0 + 16 << "\" text-anchor=\"middle\">"
           << csv::num(std::round(fx * 1e4) / 1e4) << "</text>\n";
        os << "<text x=\"" << x0 - 6 << "\" y=\"" << y.map(fy, y0, y1) + 4 << "\" text-anchor=\"end\">"
           << csv::num(std::round(fy * 1e4) / 1e4) << "</text>\n";
    }
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">" << xlabel
       << "</text>\n";
}
}  // namespace detail

/// Line plot of several series over a shared abscissa.
inline void line_plot(std::ostream& os, const std::string& title, const std::string& xlabel, std::span<const double> x,
                      std::span<const Series> series) {
    using namespace detail;
    Range rx, ry;
    for (double v : x) rx.add(v);
    for (const auto& s : series)
        for (double v : s.y) ry.add(v);
    rx.pad();
    ry.pad();
    header(os, title);
    axes(os, rx, ry, xlabel);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const char* color = palette[k % std::size(palette)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.2\" points=\"";
        for (std::size_t i = 0; i < x.size() && i < series[k].y.size(); ++i) {
            if (!std::isfinite(series[k].y[i])) continue;
            os << rx.map(x[i], left, width - right) << ',' << ry.map(series[k].y[i], height - bottom, top) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << width - right - 8 << "\" y=\"" << top + 16 + 14 * k << "\" text-anchor=\"end\" fill=\""
           << color << "\">" << series[k].name << "</text>\n";
    }
    os << "</svg>\n";
}

/// Grey-scale map of Re Gamma clipped to [floor, 0] with zero-region
/// boundaries on top.  Large grids are subsampled to at most 240 x 120 cells.
inline void field_map(std::ostream& os, const std::string& title, const AmplitudeField& field,
                      std::span<const ZeroRegion> regions, double floor) {
    using namespace detail;
    const auto& w = field.window;
    Range rx{w.t_min, w.t_max}, ry{w.s_min, w.s_max};
    header(os, title);
    const std::size_t si = std::max<std::size_t>(1, (w.n_t + 239) / 240), sj = std::max<std::size_t>(1, (w.n_s + 119) / 120);
    const double cw = (width - left - right) / std::ceil(double(w.n_t) / si);
    const double ch = (height - top - bottom) / std::ceil(double(w.n_s) / sj);
    for (std::size_t j = 0, row = 0; j < w.n_s; j += sj, ++row) {
        for (std::size_t i = 0, col = 0; i < w.n_t; i += si, ++col) {
            const double v = std::clamp(field.re_at(i, j), floor, 0.0);
            const int g = static_cast<int>(std::lround(255.0 * (1.0 - v / floor)));
            os << "<rect x=\"" << left + col * cw << "\" y=\"" << height - bottom - (row + 1) * ch << "\" width=\""
               << cw + 0.3 << "\" height=\"" << ch + 0.3 << "\" fill=\"rgb(" << g << ',' << g << ',' << g << ")\"/>\n";
        }
    }
    for (const auto& r : regions)
        for (const auto& line : r.boundary) {
            os << "<polyline fill=\"none\" stroke=\"#d1495b\" stroke-width=\"1\" points=\"";
            for (const auto& p : line)
                os << rx.map(p.t, left, width - right) << ',' << ry.map(p.s, height - bottom, top) << ' ';
            os << "\"/>\n";
        }
    axes(os, rx, ry, "t");
    os << "</svg>\n";
}

}  // namespace dtpt::svg
