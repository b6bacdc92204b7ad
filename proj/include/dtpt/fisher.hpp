#pragma once

// Fisher zeros of the Loschmidt amplitude.  For finite N, G(z) = exp(Gamma(z))
// never vanishes, so a "zero" is the numeric-zero set Re Gamma(z) < ln eps.
// The complex-time plane is scanned on a grid, the set is split into connected
// regions with marching-squares boundaries, and tongue tips are tracked as N
// grows.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <limits>
#include <ostream>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "dtpt/csv.hpp"
#include "dtpt/error.hpp"
#include "dtpt/loschmidt.hpp"
#include "dtpt/numeric.hpp"
#include "dtpt/regression.hpp"
#include "dtpt/spectrum.hpp"

namespace dtpt {

inline constexpr double default_eps_zero = 1e-12;

struct ComplexWindow {
    double t_min = 0.0;
    double t_max = 1.0;
    double s_min = -0.1;
    double s_max = 0.1;
    std::size_t n_t = 101;
    std::size_t n_s = 41;

    void validate() const {
        if (!(t_min < t_max) || !(s_min < s_max))
            throw Error(ErrorCode::invalid_spec, "complex window needs t_min < t_max and s_min < s_max");
        if (n_t < 16 || n_s < 16) throw Error(ErrorCode::invalid_spec, "complex window resolution must be >= 16");
    }
    bool symmetric() const { return s_min == -s_max; }
    double dt() const { return (t_max - t_min) / static_cast<double>(n_t - 1); }
    double ds() const { return (s_max - s_min) / static_cast<double>(n_s - 1); }
    double t(std::size_t i) const { return i + 1 == n_t ? t_max : t_min + static_cast<double>(i) * dt(); }
    double s(std::size_t j) const { return j + 1 == n_s ? s_max : s_min + static_cast<double>(j) * ds(); }
};

/// Re/Im Gamma on the window grid, row-major with rows along s:
/// value(i, j) = re[j * n_t + i] at (t(i), s(j)).
struct AmplitudeField {
    ComplexWindow window;
    std::vector<double> re;
    std::vector<double> im;  ///< empty when the scan skipped the imaginary part
    double gamma_max = default_gamma_max;
    long long clamp_events = 0;

    double re_at(std::size_t i, std::size_t j) const { return re[j * window.n_t + i]; }
    double im_at(std::size_t i, std::size_t j) const { return im[j * window.n_t + i]; }
};

namespace detail {

// out_k = clamp(-lam2_k (1 - c_k ch_k)); returns the number of clamped terms.
inline long long clamped_real_terms(const double* __restrict lam2, const double* __restrict c,
                                    const double* __restrict ch, double* __restrict out, std::size_t n,
                                    double gamma_max) {
    double clamped = 0.0;  // a floating counter keeps the loop vectorizable
    for (std::size_t k = 0; k < n; ++k) {
        const double raw = -lam2[k] * (1.0 - c[k] * ch[k]);
        const double hi = raw > gamma_max ? gamma_max : raw;
        const double v = hi < -gamma_max ? -gamma_max : hi;
        out[k] = v;
        clamped += v != raw ? 1.0 : 0.0;
    }
    return static_cast<long long>(clamped);
}

inline long long clamped_imag_terms(const double* __restrict lam2, const double* __restrict sn,
                                    const double* __restrict sh, double* __restrict out, std::size_t n,
                                    double gamma_max) {
    double clamped = 0.0;  // a floating counter keeps the loop vectorizable
    for (std::size_t k = 0; k < n; ++k) {
        const double raw = -lam2[k] * (sn[k] * sh[k]);
        const double hi = raw > gamma_max ? gamma_max : raw;
        const double v = hi < -gamma_max ? -gamma_max : hi;
        out[k] = v;
        clamped += v != raw ? 1.0 : 0.0;
    }
    return static_cast<long long>(clamped);
}

inline void real_terms(const double* __restrict lam2, const double* __restrict c, const double* __restrict ch,
                       double* __restrict out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = -lam2[k] * (1.0 - c[k] * ch[k]);
}

inline void imag_terms(const double* __restrict lam2, const double* __restrict sn, const double* __restrict sh,
                       double* __restrict out, std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) out[k] = -lam2[k] * (sn[k] * sh[k]);
}

}  // namespace detail

/// Evaluates the continued Gamma on every grid point with the arithmetic of
/// log_amplitude_complex (same per-term clamp and summation tree).
inline AmplitudeField scan(const ModeBank& bank, const ComplexWindow& window, unsigned threads = 1,
                           double gamma_max = default_gamma_max, bool with_imaginary = true) {
    window.validate();
    const std::size_t n = bank.size(), nt = window.n_t, ns = window.n_s;
    const auto omega = bank.frequencies();
    const auto lam2 = bank.weights();
    AmplitudeField field;
    field.window = window;
    field.gamma_max = gamma_max;
    field.re.resize(nt * ns);
    if (with_imaginary) field.im.resize(nt * ns);

    std::vector<double> ch(ns * n), sh(ns * n);
    for (std::size_t j = 0; j < ns; ++j) {
        const double s = window.s(j);
        for (std::size_t k = 0; k < n; ++k) {
            const double x = omega[k] * s;
            ch[j * n + k] = std::min(std::cosh(x), 1e300);
            sh[j * n + k] = std::clamp(std::sinh(x), -1e300, 1e300);
        }
    }
    // Rows whose terms are bounded below gamma_max never clamp and take the
    // plain kernels; the values are the same either way.
    std::vector<char> may_clamp(ns, 0);
    const double safe = gamma_max * (1.0 - 1e-12);
    for (std::size_t j = 0; j < ns; ++j) {
        double bound = 0.0;
        for (std::size_t k = 0; k < n; ++k)
            bound = std::max(bound, lam2[k] * std::max(1.0 + ch[j * n + k], std::abs(sh[j * n + k])));
        may_clamp[j] = !(bound < safe);
    }
    // Columns are processed in tiles so each row of ch/sh is reused from cache.
    constexpr std::size_t tile = 8;
    const std::size_t tiles = (nt + tile - 1) / tile;
    std::vector<long long> clamps(tiles, 0);
    parallel_for(tiles, threads, [&](std::size_t b) {
        const std::size_t i0 = b * tile, width = std::min(tile, nt - i0);
        std::vector<double> sn(tile * n), cs(tile * n), terms(n);
        for (std::size_t c = 0; c < width; ++c) {
            const double t = window.t(i0 + c);
            for (std::size_t k = 0; k < n; ++k) {
                const auto sc = sincos_phase(omega[k], t);
                sn[c * n + k] = sc.sin;
                cs[c * n + k] = sc.cos;
            }
        }
        long long local = 0;
        for (std::size_t j = 0; j < ns; ++j) {
            const double* chj = &ch[j * n];
            const double* shj = &sh[j * n];
            for (std::size_t c = 0; c < width; ++c) {
                if (may_clamp[j])
                    local += detail::clamped_real_terms(lam2.data(), &cs[c * n], chj, terms.data(), n, gamma_max);
                else
                    detail::real_terms(lam2.data(), &cs[c * n], chj, terms.data(), n);
                field.re[j * nt + i0 + c] = pairwise_sum(terms);
                if (with_imaginary) {
                    if (may_clamp[j])
                        local += detail::clamped_imag_terms(lam2.data(), &sn[c * n], shj, terms.data(), n, gamma_max);
                    else
                        detail::imag_terms(lam2.data(), &sn[c * n], shj, terms.data(), n);
                    field.im[j * nt + i0 + c] = pairwise_sum(terms);
                }
            }
        }
        clamps[b] = local;
    });
    for (long long c : clamps) field.clamp_events += c;
    return field;
}

struct ZonePoint {
    double t = 0.0;
    double s = 0.0;
};

struct ZeroRegion {
    int id = 0;
    std::vector<std::vector<ZonePoint>> boundary;  ///< closed or edge-terminated polylines
    ZonePoint tip;                                 ///< boundary point of minimal |s|
    std::size_t node_count = 0;
    bool touches_edge = false;  ///< reaches the t edges or the outer s edges of the window
    bool touches_axis = false;  ///< contains grid nodes on s = 0
};

namespace detail {

struct EdgeSegment {
    std::int64_t a;
    std::int64_t b;
    int region;
};

}  // namespace detail

/// Connected components (4-connectivity) of {Re Gamma < ln eps_zero} with
/// marching-squares boundaries.  An empty list is a valid outcome.
inline std::vector<ZeroRegion> extract_zero_regions(const AmplitudeField& field, double eps_zero = default_eps_zero) {
    if (!(eps_zero > 0.0 && eps_zero < 1.0)) throw Error(ErrorCode::invalid_spec, "eps_zero must lie in (0, 1)");
    const double level = std::log(eps_zero);
    const auto& w = field.window;
    const std::size_t nt = w.n_t, ns = w.n_s;
    auto inside = [&](std::size_t i, std::size_t j) { return field.re[j * nt + i] < level; };

    std::vector<int> label(nt * ns, -1);
    std::vector<ZeroRegion> regions;
    std::deque<std::size_t> queue;
    for (std::size_t j = 0; j < ns; ++j) {
        for (std::size_t i = 0; i < nt; ++i) {
            if (!inside(i, j) || label[j * nt + i] >= 0) continue;
            ZeroRegion r;
            r.id = static_cast<int>(regions.size());
            label[j * nt + i] = r.id;
            queue.push_back(j * nt + i);
            while (!queue.empty()) {
                const std::size_t idx = queue.front();
                queue.pop_front();
                const std::size_t ci = idx % nt, cj = idx / nt;
                ++r.node_count;
                if (ci == 0 || ci + 1 == nt) r.touches_edge = true;
                if ((cj == 0 && w.s_min != 0.0) || cj + 1 == ns) r.touches_edge = true;
                if (w.s(cj) == 0.0) r.touches_axis = true;
                auto visit = [&](std::size_t ni, std::size_t nj) {
                    const std::size_t nidx = nj * nt + ni;
                    if (label[nidx] < 0 && inside(ni, nj)) {
                        label[nidx] = r.id;
                        queue.push_back(nidx);
                    }
                };
                if (ci > 0) visit(ci - 1, cj);
                if (ci + 1 < nt) visit(ci + 1, cj);
                if (cj > 0) visit(ci, cj - 1);
                if (cj + 1 < ns) visit(ci, cj + 1);
            }
            regions.push_back(std::move(r));
        }
    }
    if (regions.empty()) return regions;

    // Edge ids: horizontal edge (i,j)-(i+1,j) -> 2*(j*nt+i), vertical edge
    // (i,j)-(i,j+1) -> 2*(j*nt+i)+1.
    auto h_edge = [&](std::size_t i, std::size_t j) { return static_cast<std::int64_t>(2 * (j * nt + i)); };
    auto v_edge = [&](std::size_t i, std::size_t j) { return static_cast<std::int64_t>(2 * (j * nt + i) + 1); };
    auto edge_point = [&](std::int64_t e) {
        const std::size_t base = static_cast<std::size_t>(e / 2);
        const std::size_t i = base % nt, j = base / nt;
        const bool vertical = e % 2 == 1;
        const std::size_t i1 = vertical ? i : i + 1, j1 = vertical ? j + 1 : j;
        const double v0 = field.re[j * nt + i], v1 = field.re[j1 * nt + i1];
        const double f = std::clamp((level - v0) / (v1 - v0), 0.0, 1.0);
        return ZonePoint{w.t(i) + f * (w.t(i1) - w.t(i)), w.s(j) + f * (w.s(j1) - w.s(j))};
    };
    auto owner = [&](std::int64_t e) {
        const std::size_t base = static_cast<std::size_t>(e / 2);
        const std::size_t i = base % nt, j = base / nt;
        const bool vertical = e % 2 == 1;
        const std::size_t i1 = vertical ? i : i + 1, j1 = vertical ? j + 1 : j;
        return inside(i, j) ? label[j * nt + i] : label[j1 * nt + i1];
    };

    std::vector<detail::EdgeSegment> segments;
    for (std::size_t j = 0; j + 1 < ns; ++j) {
        for (std::size_t i = 0; i + 1 < nt; ++i) {
            const int code = (inside(i, j) ? 1 : 0) | (inside(i + 1, j) ? 2 : 0) | (inside(i + 1, j + 1) ? 4 : 0) |
                             (inside(i, j + 1) ? 8 : 0);
            if (code == 0 || code == 15) continue;
            const std::int64_t bottom = h_edge(i, j), top = h_edge(i, j + 1), left = v_edge(i, j),
                               right = v_edge(i + 1, j);
            auto add = [&](std::int64_t a, std::int64_t b) { segments.push_back({a, b, owner(a)}); };
            const double centre = 0.25 * (field.re[j * nt + i] + field.re[j * nt + i + 1] +
                                          field.re[(j + 1) * nt + i] + field.re[(j + 1) * nt + i + 1]);
            const bool centre_in = centre < level;
            switch (code) {
            case 1: case 14: add(left, bottom); break;
            case 2: case 13: add(bottom, right); break;
            case 3: case 12: add(left, right); break;
            case 4: case 11: add(right, top); break;
            case 6: case 9: add(bottom, top); break;
            case 7: case 8: add(left, top); break;
            case 5:
                if (centre_in) { add(bottom, right); add(top, left); }
                else { add(left, bottom); add(right, top); }
                break;
            case 10:
                if (centre_in) { add(left, bottom); add(right, top); }
                else { add(bottom, right); add(top, left); }
                break;
            default: break;
            }
        }
    }

    // Chain segments into polylines per region.
    std::unordered_map<std::int64_t, std::vector<std::size_t>> by_edge;
    by_edge.reserve(segments.size() * 2);
    for (std::size_t k = 0; k < segments.size(); ++k) {
        by_edge[segments[k].a].push_back(k);
        by_edge[segments[k].b].push_back(k);
    }
    std::vector<char> used(segments.size(), 0);
    auto next_from = [&](std::int64_t edge, std::size_t from, int region) -> std::ptrdiff_t {
        for (std::size_t k : by_edge[edge])
            if (k != from && !used[k] && segments[k].region == region) return static_cast<std::ptrdiff_t>(k);
        return -1;
    };
    for (std::size_t k0 = 0; k0 < segments.size(); ++k0) {
        if (used[k0]) continue;
        used[k0] = 1;
        const int region = segments[k0].region;
        std::deque<std::int64_t> chain{segments[k0].a, segments[k0].b};
        for (int dir = 0; dir < 2; ++dir) {
            std::size_t cur = k0;
            while (true) {
                const std::int64_t end = dir == 0 ? chain.back() : chain.front();
                const auto nk = next_from(end, cur, region);
                if (nk < 0) break;
                cur = static_cast<std::size_t>(nk);
                used[cur] = 1;
                const std::int64_t other = segments[cur].a == end ? segments[cur].b : segments[cur].a;
                if (dir == 0) chain.push_back(other);
                else chain.push_front(other);
                if (other == (dir == 0 ? chain.front() : chain.back())) break;
            }
        }
        std::vector<ZonePoint> line;
        line.reserve(chain.size());
        for (auto e : chain) line.push_back(edge_point(e));
        regions[static_cast<std::size_t>(region)].boundary.push_back(std::move(line));
    }

    for (auto& r : regions) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& line : r.boundary) {
            for (const auto& p : line) {
                const double a = std::abs(p.s);
                if (a < best || (a == best && p.t < r.tip.t)) {
                    best = a;
                    r.tip = p;
                }
            }
        }
        if (r.touches_axis) {
            // The region reaches the real axis itself; its tip is on it.
            for (std::size_t j = 0; j < ns; ++j) {
                if (w.s(j) != 0.0) continue;
                for (std::size_t i = 0; i < nt; ++i)
                    if (label[j * nt + i] == r.id) {
                        r.tip = {w.t(i), 0.0};
                        i = nt;
                    }
            }
        }
    }
    return regions;
}

/// Window around an expected crossing time, resolving the fast oscillation
/// period 2 pi / omega_max with a fixed number of columns and spanning
/// s in [0, s_extent * ln N / omega_max].
struct TongueWindowOptions {
    double rel_halfwidth = 0.06;
    double columns_per_oscillation = 6.0;
    std::size_t rows = 40;
    double s_extent = 5.0;
};

inline ComplexWindow tongue_window(const ModeBank& bank, double t_center, const TongueWindowOptions& opt = {}) {
    const double w_max = bank.frequencies().back();
    const double half = opt.rel_halfwidth * t_center;
    ComplexWindow w;
    w.t_min = t_center - half;
    w.t_max = t_center + half;
    w.s_min = 0.0;
    w.s_max = opt.s_extent * std::log(std::max<double>(static_cast<double>(bank.size()), 2.0)) / w_max;
    const double oscillations = 2.0 * half * w_max / two_pi;
    w.n_t = std::max<std::size_t>(16, static_cast<std::size_t>(std::ceil(oscillations * opt.columns_per_oscillation)) + 1);
    w.n_s = std::max<std::size_t>(16, opt.rows + 1);
    return w;
}

struct TipRow {
    long long n_modes = 0;
    int window_id = 0;
    int region_id = 0;
    double t_star = 0.0;
    double s_star = 0.0;
};

/// Per (size, window) scan summary kept alongside the tips.
struct TipScan {
    long long n_modes = 0;
    int window_id = 0;
    ComplexWindow window;
    std::size_t region_count = 0;
    long long clamp_events = 0;
};

struct TipTable {
    std::vector<TipRow> rows;
    std::vector<TipScan> scans;
};

/// Scans every size in `sizes` (same physical parameters as `base`) over the
/// windows produced by `window_for(bank, window_id)` for window_id in
/// [0, window_count) and records the tips of all regions found.
inline TipTable tongue_tip_trajectory(const SpectrumSpec& base, std::span<const long long> sizes, int window_count,
                                      const std::function<ComplexWindow(const ModeBank&, int)>& window_for,
                                      double eps_zero = default_eps_zero, unsigned threads = 1) {
    TipTable table;
    for (long long n : sizes) {
        SpectrumSpec spec = base;
        spec.n_modes = n;
        const auto bank = build_mode_bank(spec);
        int next_id = 0;  // region ids are unique per size across windows
        for (int wid = 0; wid < window_count; ++wid) {
            const auto window = window_for(bank, wid);
            const auto field = scan(bank, window, threads, default_gamma_max, false);
            const auto regions = extract_zero_regions(field, eps_zero);
            table.scans.push_back({n, wid, window, regions.size(), field.clamp_events});
            for (const auto& r : regions) table.rows.push_back({n, wid, next_id + r.id, r.tip.t, r.tip.s});
            next_id += static_cast<int>(regions.size());
        }
    }
    return table;
}

/// Tongue windows centred on the given times.
inline TipTable tongue_tip_trajectory(const SpectrumSpec& base, std::span<const long long> sizes,
                                      std::span<const double> centers, const TongueWindowOptions& opt = {},
                                      double eps_zero = default_eps_zero, unsigned threads = 1) {
    std::vector<double> c(centers.begin(), centers.end());
    return tongue_tip_trajectory(
        base, sizes, static_cast<int>(c.size()),
        [&](const ModeBank& bank, int wid) { return tongue_window(bank, c[static_cast<std::size_t>(wid)], opt); },
        eps_zero, threads);
}

struct CrossingOptions {
    double location_tolerance = 0.02;  ///< max relative drift of the tip between consecutive sizes
    double prominence = 0.9;           ///< tongue |s*| must be below this fraction of the median region tip
    double edge_margin = 0.05;         ///< tips closer than this fraction of the window width to a t edge are not interior
};

struct CrossingEstimate {
    int window_id = 0;
    double t_c = 0.0;            ///< tongue tip real part at the largest size
    double s_intercept = 0.0;    ///< extrapolated |s*| as N -> infinity (a in a + b / ln N)
    double slope = 0.0;          ///< b
    double cell_height = 0.0;    ///< grid cell height at the largest size
    std::vector<long long> sizes;
    std::vector<double> t_star;  ///< tongue tip per size
    std::vector<double> s_star;  ///< |s*| per size
    std::vector<double> tip_to_median;  ///< tongue |s*| over the median region tip, per size
    bool converges = false;      ///< intercept <= cell height
    bool stable = false;         ///< tip location settles
    bool prominent = false;      ///< tongue stands out of the finger background
    bool interior = false;       ///< tip is a minimum inside the window, not pinned to its t edge
    bool declared = false;
    bool decreasing = false;     ///< |s*| strictly decreasing in N
};

/// Per window, picks the tongue (region of minimal |s*|) at each size,
/// extrapolates |s*| linearly in 1/ln N and declares a crossing when the
/// intercept is within one cell of the axis, the tip stays put from size to
/// size, stands out of the finger background and never sits on a window edge.
inline std::vector<CrossingEstimate> crossing_times(const TipTable& table, const CrossingOptions& opt = {}) {
    std::vector<int> windows;
    for (const auto& sc : table.scans)
        if (std::find(windows.begin(), windows.end(), sc.window_id) == windows.end()) windows.push_back(sc.window_id);
    std::vector<CrossingEstimate> out;
    for (int wid : windows) {
        CrossingEstimate est;
        est.window_id = wid;
        std::vector<double> medians;
        std::vector<bool> inner;
        for (const auto& sc : table.scans) {
            if (sc.window_id != wid) continue;
            const TipRow* best = nullptr;
            std::vector<double> all;
            for (const auto& r : table.rows) {
                if (r.window_id != wid || r.n_modes != sc.n_modes) continue;
                all.push_back(std::abs(r.s_star));
                if (!best || std::abs(r.s_star) < std::abs(best->s_star)) best = &r;
            }
            if (!best) continue;
            est.sizes.push_back(sc.n_modes);
            est.t_star.push_back(best->t_star);
            est.s_star.push_back(std::abs(best->s_star));
            std::sort(all.begin(), all.end());
            const std::size_t m = all.size();
            medians.push_back(m % 2 ? all[m / 2] : 0.5 * (all[m / 2 - 1] + all[m / 2]));
            est.tip_to_median.push_back(medians.back() > 0.0 ? std::abs(best->s_star) / medians.back() : 0.0);
            est.cell_height = sc.window.ds();
            const double margin = opt.edge_margin * (sc.window.t_max - sc.window.t_min);
            inner.push_back(best->t_star - sc.window.t_min > margin && sc.window.t_max - best->t_star > margin);
        }
        if (est.sizes.size() < 3)
            throw Error(ErrorCode::insufficient_sizes, "crossing estimate needs tongues at >= 3 sizes");
        std::vector<double> x, y;
        for (std::size_t k = 0; k < est.sizes.size(); ++k) {
            x.push_back(1.0 / std::log(static_cast<double>(est.sizes[k])));
            y.push_back(est.s_star[k]);
        }
        const auto fit = fit_line(x, y);
        est.s_intercept = fit.intercept;
        est.slope = fit.slope;
        est.t_c = est.t_star.back();
        const std::size_t last = est.sizes.size() - 1;
        est.converges = est.s_intercept <= est.cell_height;
        est.stable = true;
        for (std::size_t k = 1; k <= last; ++k)
            if (std::abs(est.t_star[k] - est.t_star[k - 1]) > opt.location_tolerance * std::abs(est.t_c)) est.stable = false;
        est.prominent = est.s_star[last] <= opt.prominence * medians[last];
        est.interior = std::all_of(inner.begin(), inner.end(), [](bool b) { return b; });
        est.decreasing = true;
        for (std::size_t k = 1; k < est.s_star.size(); ++k)
            if (!(est.s_star[k] < est.s_star[k - 1])) est.decreasing = false;
        est.declared = est.converges && est.stable && est.prominent && est.interior;
        out.push_back(std::move(est));
    }
    return out;
}

inline void write_field_csv(std::ostream& os, const AmplitudeField& field, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    const auto& w = field.window;
    os << "# grid t_min=" << csv::num(w.t_min) << " t_max=" << csv::num(w.t_max) << " n_t=" << w.n_t
       << " s_min=" << csv::num(w.s_min) << " s_max=" << csv::num(w.s_max) << " n_s=" << w.n_s
       << " gamma_max=" << csv::num(field.gamma_max) << " clamp_events=" << field.clamp_events << '\n';
    os << "t,s,re_gamma,im_gamma\n";
    for (std::size_t j = 0; j < w.n_s; ++j)
        for (std::size_t i = 0; i < w.n_t; ++i)
            csv::write_row(os, {csv::num(w.t(i)), csv::num(w.s(j)), csv::num(field.re_at(i, j)),
                                field.im.empty() ? std::string("nan") : csv::num(field.im_at(i, j))});
}

inline void write_regions_csv(std::ostream& os, const std::vector<ZeroRegion>& regions, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "region_id,t,s\n";
    for (const auto& r : regions)
        for (const auto& line : r.boundary)
            for (const auto& p : line) csv::write_row(os, {csv::num(static_cast<long long>(r.id)), csv::num(p.t), csv::num(p.s)});
}

inline void write_tips_csv(std::ostream& os, const TipTable& table, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "N,region_id,t_star,s_star\n";
    for (const auto& r : table.rows)
        csv::write_row(os, {csv::num(r.n_modes), csv::num(static_cast<long long>(r.region_id)), csv::num(r.t_star),
                            csv::num(r.s_star)});
}

}  // namespace dtpt
