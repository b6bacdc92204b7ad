#pragma once

// Critical-time detection and the three scaling fits: f(t_c) against ln N,
// f(t) against ln|(t - t_c) / t_c| near t_c, and a power law in |t - t_c|.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "dtpt/csv.hpp"
#include "dtpt/error.hpp"
#include "dtpt/geometry.hpp"
#include "dtpt/regression.hpp"
#include "dtpt/spectrum.hpp"
#include "dtpt/thermal.hpp"

namespace dtpt {

enum class Observable { nu_D, nu_D_dot, nu_D_ddot };
enum class KinkType { log_divergent, derivative_jump };
enum class FitModel { log_size, log_time, power_law };

inline std::string_view to_string(Observable o) {
    switch (o) {
    case Observable::nu_D: return "nu_D";
    case Observable::nu_D_dot: return "nu_D_dot";
    case Observable::nu_D_ddot: return "nu_D_ddot";
    }
    return "?";
}

inline std::string_view to_string(KinkType k) {
    return k == KinkType::log_divergent ? "log-divergent" : "derivative-jump";
}

inline std::string_view to_string(FitModel m) {
    switch (m) {
    case FitModel::log_size: return "log-size";
    case FitModel::log_time: return "log-time";
    case FitModel::power_law: return "power-law";
    }
    return "?";
}

inline const std::vector<double>& observable(const DtopSeries& s, Observable o) {
    switch (o) {
    case Observable::nu_D: return s.nu;
    case Observable::nu_D_dot: return s.nu_dot;
    case Observable::nu_D_ddot: return s.nu_ddot;
    }
    return s.nu;
}

struct CriticalPoint {
    double t_c = 0.0;
    std::size_t index = 0;  ///< position of t_c on the analyzed grid
    Observable observable = Observable::nu_D;
    KinkType kind = KinkType::log_divergent;
    double value = 0.0;     ///< observable at t_c for the finest N
    double strength = 0.0;  ///< d|f|/dln N for log kinks, size of the jump otherwise
};

struct CriticalSearchOptions {
    double growth_factor = 10.0;       ///< growth must exceed this multiple of the median growth
    double jump_factor = 10.0;         ///< jump must exceed this multiple of the off-critical spread
    double relative_magnitude = 0.05;  ///< ... and this fraction of the observable's rms
    double isolation = 3.0;            ///< peak over its neighbours two and three steps away
};

namespace detail {

inline double median_abs(std::vector<double> v) {
    if (v.empty()) return 0.0;
    for (double& x : v) x = std::abs(x);
    const std::size_t m = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(m), v.end());
    return v[m];
}

inline double rms(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return v.empty() ? 0.0 : std::sqrt(s / static_cast<double>(v.size()));
}

}  // namespace detail

/// Classifies critical times on a common grid shared by >= 3 sizes.
///
/// Levels are visited in the order nu_D, nu_D_dot, nu_D_ddot.  At each level
/// a point is log-divergent when |f| grows monotonically with ln N, faster than
/// the median growth by growth_factor, and as an isolated peak on the grid.
/// A jump in the next derivative f' is accepted when |f'(t+dt) - f'(t-dt)|
/// beats the off-critical spread, does not shrink or grow when the stencil is
/// widened to 3 dt (a jump is step independent), and is isolated.  Only the
/// lowest level at which anything is found is reported.
inline std::vector<CriticalPoint> find_critical_points(const std::map<long long, DtopSeries>& series_by_size,
                                                       const CriticalSearchOptions& opt = {}) {
    if (series_by_size.size() < 3)
        throw Error(ErrorCode::insufficient_sizes, "critical point search needs >= 3 sizes");
    const auto& finest = series_by_size.rbegin()->second;
    const std::size_t n = finest.times.size();
    for (const auto& [size, s] : series_by_size)
        if (s.times != finest.times)
            throw Error(ErrorCode::invalid_spec, "critical point search needs a common time grid");
    std::vector<double> lnn;
    std::vector<const DtopSeries*> all;
    for (const auto& [size, s] : series_by_size) {
        lnn.push_back(std::log(static_cast<double>(size)));
        all.push_back(&s);
    }
    if (n < 7) return {};
    const double span = lnn.back() - lnn.front();
    const Observable levels[3] = {Observable::nu_D, Observable::nu_D_dot, Observable::nu_D_ddot};

    std::vector<double> growth[3];
    double med_growth[3], scale[3];
    std::vector<double> y(all.size());
    for (int l = 0; l < 3; ++l) {
        growth[l].resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t m = 0; m < all.size(); ++m) y[m] = std::abs(observable(*all[m], levels[l])[i]);
            growth[l][i] = fit_line(lnn, y).slope;
        }
        med_growth[l] = detail::median_abs(growth[l]);
        scale[l] = detail::rms(observable(finest, levels[l]));
    }
    auto fine = [&](int l) -> const std::vector<double>& { return observable(finest, levels[l]); };
    auto spread = [&](int l, std::size_t i, std::size_t m) { return std::abs(fine(l)[i + m] - fine(l)[i - m]); };
    const std::size_t lo = 3, hi = n - 3;  // tested indices [lo, hi)
    double med_jump[3] = {0.0, 0.0, 0.0};
    for (int l = 1; l < 3; ++l) {
        std::vector<double> d;
        for (std::size_t i = lo; i < hi; ++i) d.push_back(spread(l, i, 1));
        med_jump[l] = detail::median_abs(d);
    }

    auto isolated = [&](auto&& value, std::size_t i) {
        double nb = 0.0;
        for (std::ptrdiff_t off : {-3, -2, 2, 3}) {
            const std::ptrdiff_t j = static_cast<std::ptrdiff_t>(i) + off;
            if (j >= static_cast<std::ptrdiff_t>(lo) && j < static_cast<std::ptrdiff_t>(hi))
                nb = std::max(nb, std::abs(value(static_cast<std::size_t>(j))));
        }
        return std::abs(value(i)) > opt.isolation * nb;
    };
    auto growth_ok = [&](int l, std::size_t i) {
        const double g = growth[l][i];
        if (!(g > opt.growth_factor * med_growth[l]) || !(g * span > opt.relative_magnitude * scale[l])) return false;
        for (std::size_t m = 1; m < all.size(); ++m)
            if (!(std::abs(observable(*all[m], levels[l])[i]) > std::abs(observable(*all[m - 1], levels[l])[i])))
                return false;
        return isolated([&](std::size_t j) { return growth[l][j]; }, i);
    };
    auto jump_ok = [&](int l, std::size_t i) {
        const double d1 = spread(l, i, 1);
        if (!(d1 > opt.jump_factor * med_jump[l]) || !(d1 > opt.relative_magnitude * scale[l])) return false;
        const double ratio = spread(l, i, 3) / d1;
        return ratio > 0.5 && ratio < 2.0 && isolated([&](std::size_t j) { return spread(l, j, 1); }, i);
    };

    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t i = lo; i < hi; ++i) {
        bool hit = jump_ok(1, i) || jump_ok(2, i);
        for (int l = 0; l < 3 && !hit; ++l) hit = growth_ok(l, i);
        if (!hit) continue;
        if (!clusters.empty() && i - clusters.back().back() <= 1) clusters.back().push_back(i);
        else clusters.push_back({i});
    }

    std::vector<std::pair<int, CriticalPoint>> found;
    for (const auto& c : clusters) {
        for (int l = 0; l < 3; ++l) {
            const std::size_t* best = nullptr;
            for (const auto& i : c)
                if (growth_ok(l, i) && (!best || growth[l][i] > growth[l][*best])) best = &i;
            if (best) {
                found.push_back({l, {finest.times[*best], *best, levels[l], KinkType::log_divergent, fine(l)[*best],
                                     growth[l][*best]}});
                break;
            }
            if (l == 2) break;
            for (const auto& i : c)
                if (jump_ok(l + 1, i) && (!best || spread(l + 1, i, 1) > spread(l + 1, *best, 1))) best = &i;
            if (best) {
                found.push_back({l + 1, {finest.times[*best], *best, levels[l + 1], KinkType::derivative_jump,
                                         fine(l + 1)[*best], spread(l + 1, *best, 1)}});
                break;
            }
        }
    }
    std::vector<CriticalPoint> out;
    if (found.empty()) return out;
    int lowest = 3;
    for (const auto& [l, p] : found) lowest = std::min(lowest, l);
    for (const auto& [l, p] : found)
        if (l == lowest) out.push_back(p);
    return out;
}

struct ScalingFit {
    FitModel model = FitModel::log_size;
    double kappa = 0.0;    ///< slope, or the exponent for power-law fits
    double upsilon = 0.0;  ///< intercept (ln amplitude for power-law fits)
    double r2 = 0.0;       ///< for two-sided fits the worse branch
    double window_lo = 0.0;  ///< smallest size, or smallest |t - t_c| / t_c
    double window_hi = 0.0;
    std::size_t points = 0;
    double kappa_left = 0.0;
    double kappa_right = 0.0;
    bool branches_agree = true;  ///< branch slopes within 10 % of each other
};

/// f(t_c) = kappa ln N + upsilon.
inline ScalingFit fit_log_size(std::span<const long long> sizes, std::span<const double> values) {
    if (sizes.size() != values.size()) throw Error(ErrorCode::invalid_spec, "sizes and values differ in length");
    if (sizes.size() < 3) throw Error(ErrorCode::insufficient_sizes, "size scaling needs >= 3 sizes");
    const auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
    if (*mn <= 0 || static_cast<double>(*mx) < 100.0 * static_cast<double>(*mn))
        throw Error(ErrorCode::insufficient_sizes, "size scaling needs sizes spanning >= 2 decades");
    std::vector<double> x;
    for (long long s : sizes) x.push_back(std::log(static_cast<double>(s)));
    const auto line = fit_line(x, values);
    ScalingFit fit;
    fit.model = FitModel::log_size;
    fit.kappa = fit.kappa_left = fit.kappa_right = line.slope;
    fit.upsilon = line.intercept;
    fit.r2 = line.r2;
    fit.window_lo = static_cast<double>(*mn);
    fit.window_hi = static_cast<double>(*mx);
    fit.points = line.points;
    return fit;
}

/// Fit window around t_c: inner_steps grid steps < |t - t_c| < outer_fraction * t_c.
struct Annulus {
    double inner_steps = 10.0;
    double outer_fraction = 0.02;
    std::size_t steps = 60;  ///< grid steps between t_c and the outer bound in annulus_grid
    double agreement = 0.1;  ///< branch slopes must agree within this fraction
};

/// Two-sided grid t_c -/+ j dt, j = inner_steps..steps, dt = outer_fraction t_c / steps.
inline std::vector<double> annulus_grid(double t_c, const Annulus& a = {}) {
    const double dt = a.outer_fraction * t_c / static_cast<double>(a.steps);
    const auto first = static_cast<std::size_t>(std::ceil(a.inner_steps));
    std::vector<double> t;
    for (std::size_t j = a.steps; j >= first && j > 0; --j) t.push_back(t_c - static_cast<double>(j) * dt);
    for (std::size_t j = first; j <= a.steps; ++j) t.push_back(t_c + static_cast<double>(j) * dt);
    return t;
}

namespace detail {

struct Branches {
    std::vector<double> tau[2];  ///< |t - t_c| / t_c, left then right
    std::vector<double> f[2];
};

inline Branches split_annulus(std::span<const double> times, std::span<const double> values, double t_c,
                              const Annulus& a) {
    if (times.size() != values.size()) throw Error(ErrorCode::invalid_spec, "times and values differ in length");
    if (!(t_c > 0.0)) throw Error(ErrorCode::invalid_spec, "t_c must be positive");
    std::vector<double> steps;
    for (std::size_t i = 1; i < times.size(); ++i) steps.push_back(times[i] - times[i - 1]);
    const double dt = median_abs(steps);
    const double inner = a.inner_steps * dt * (1.0 - 1e-9), outer = a.outer_fraction * t_c * (1.0 + 1e-9);
    Branches b;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double d = times[i] - t_c;
        if (std::abs(d) < inner || std::abs(d) > outer || d == 0.0) continue;
        const int side = d < 0.0 ? 0 : 1;
        b.tau[side].push_back(std::abs(d) / t_c);
        b.f[side].push_back(values[i]);
    }
    if (b.tau[0].size() + b.tau[1].size() < 8 || b.tau[0].size() < 3 || b.tau[1].size() < 3)
        throw Error(ErrorCode::annulus_empty, "fewer than 8 grid points (or < 3 per side) inside the fit annulus");
    return b;
}

inline void finish_two_sided(ScalingFit& fit, const LineFit (&line)[2], const Branches& b, const Annulus& a) {
    fit.kappa_left = line[0].slope;
    fit.kappa_right = line[1].slope;
    fit.kappa = 0.5 * (line[0].slope + line[1].slope);
    fit.upsilon = 0.5 * (line[0].intercept + line[1].intercept);
    fit.r2 = std::min(line[0].r2, line[1].r2);
    fit.points = line[0].points + line[1].points;
    const double big = std::max(std::abs(fit.kappa_left), std::abs(fit.kappa_right));
    fit.branches_agree = std::abs(fit.kappa_left - fit.kappa_right) <= a.agreement * big;
    fit.window_lo = std::min(*std::min_element(b.tau[0].begin(), b.tau[0].end()),
                             *std::min_element(b.tau[1].begin(), b.tau[1].end()));
    fit.window_hi = std::max(*std::max_element(b.tau[0].begin(), b.tau[0].end()),
                             *std::max_element(b.tau[1].begin(), b.tau[1].end()));
}

// c + a x^p by linear least squares at fixed p.
struct PowerProfile {
    double c = 0.0;
    double a = 0.0;
    double rss = 0.0;
    double drss = 0.0;  ///< d rss / dp at the optimal (c, a)
};

inline PowerProfile power_profile(const std::vector<double>& x, const std::vector<double>& f, double p) {
    std::vector<double> xp(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xp[i] = std::pow(x[i], p);
    const auto line = fit_line(xp, f);
    PowerProfile out{line.intercept, line.slope, 0.0, 0.0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = out.c + out.a * xp[i] - f[i];
        out.rss += r * r;
        out.drss += 2.0 * r * out.a * xp[i] * std::log(x[i]);
    }
    return out;
}

// Best p in [0.2, 3]: coarse scan, then the root of d rss / dp in the
// bracket around the coarse minimum (root finding converges to the last bit
// where plain minimization stalls at sqrt(eps)).
inline double best_power(const std::vector<double>& x, const std::vector<double>& f) {
    constexpr double p_lo = 0.2, p_hi = 3.0;
    constexpr int count = 57;
    int best = 0;
    double best_rss = 0.0;
    for (int i = 0; i < count; ++i) {
        const double p = p_lo + (p_hi - p_lo) * i / (count - 1);
        const double r = power_profile(x, f, p).rss;
        if (i == 0 || r < best_rss) {
            best = i;
            best_rss = r;
        }
    }
    const double a = p_lo + (p_hi - p_lo) * std::max(best - 1, 0) / (count - 1);
    const double b = p_lo + (p_hi - p_lo) * std::min(best + 1, count - 1) / (count - 1);
    auto d = [&](double p) { return power_profile(x, f, p).drss; };
    const double da = d(a), db = d(b);
    if (da < 0.0 && db > 0.0) {
        std::uintmax_t iters = 200;
        const auto r = boost::math::tools::toms748_solve(
            d, a, b, da, db, [](double u, double v) { return std::abs(u - v) <= 4e-16 * std::max(1.0, std::abs(u)); },
            iters);
        return 0.5 * (r.first + r.second);
    }
    std::uintmax_t iters = 200;
    return boost::math::tools::brent_find_minima([&](double p) { return power_profile(x, f, p).rss; }, a, b, 52, iters)
        .first;
}

}  // namespace detail

/// f(t) = kappa' ln|(t - t_c) / t_c| + upsilon' on each side of t_c; the
/// reported kappa' averages the branches and flags disagreement.
inline ScalingFit fit_log_time(std::span<const double> times, std::span<const double> values, double t_c,
                               const Annulus& annulus = {}) {
    const auto b = detail::split_annulus(times, values, t_c, annulus);
    LineFit line[2];
    for (int side = 0; side < 2; ++side) {
        std::vector<double> x;
        for (double tau : b.tau[side]) x.push_back(std::log(tau));
        line[side] = fit_line(x, b.f[side]);
    }
    ScalingFit fit;
    fit.model = FitModel::log_time;
    detail::finish_two_sided(fit, line, b, annulus);
    return fit;
}

inline ScalingFit fit_log_time(const DtopSeries& series, Observable obs, double t_c, const Annulus& annulus = {}) {
    return fit_log_time(series.times, observable(series, obs), t_c, annulus);
}

/// |f(t) - f(t_c)| ~ |t - t_c|^kappa.  Per branch the one-sided limit f(t_c)
/// is the constant c of a profile least-squares fit c + a |tau|^p; kappa is
/// the slope of ln|f - c| against ln|tau|.
inline ScalingFit fit_power_law(std::span<const double> times, std::span<const double> values, double t_c,
                                const Annulus& annulus = {}) {
    const auto b = detail::split_annulus(times, values, t_c, annulus);
    LineFit line[2];
    for (int side = 0; side < 2; ++side) {
        const auto& x = b.tau[side];
        const auto& f = b.f[side];
        const double p = detail::best_power(x, f);
        const double c = detail::power_profile(x, f, p).c;
        std::vector<double> lx, ly;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double d = std::abs(f[i] - c);
            if (d == 0.0) continue;
            lx.push_back(std::log(x[i]));
            ly.push_back(std::log(d));
        }
        line[side] = fit_line(lx, ly);
    }
    ScalingFit fit;
    fit.model = FitModel::power_law;
    detail::finish_two_sided(fit, line, b, annulus);
    return fit;
}

inline ScalingFit fit_power_law(const DtopSeries& series, Observable obs, double t_c, const Annulus& annulus = {}) {
    return fit_power_law(series.times, observable(series, obs), t_c, annulus);
}

/// Uses the largest size.
inline ScalingFit fit_power_law(const std::map<long long, DtopSeries>& series_by_size, Observable obs, double t_c,
                                const Annulus& annulus = {}) {
    if (series_by_size.empty()) throw Error(ErrorCode::insufficient_sizes, "no series given");
    return fit_power_law(series_by_size.rbegin()->second, obs, t_c, annulus);
}

/// |kappa' / kappa|.
inline double dynamical_exponent(const ScalingFit& fit_size, const ScalingFit& fit_time, double min_r2 = 0.99) {
    if (!(fit_size.r2 > min_r2) || !(fit_time.r2 > min_r2))
        throw Error(ErrorCode::low_quality_fit, "dynamical exponent needs fits with R^2 > " + csv::num(min_r2));
    if (fit_size.kappa == 0.0) throw Error(ErrorCode::degenerate_fit, "kappa is zero");
    return std::abs(fit_time.kappa / fit_size.kappa);
}

struct ThermalFitRow {
    double n_th = 0.0;
    ScalingFit fit;
    bool deviates = false;
};

struct ThermalSweepOptions {
    Observable observable = Observable::nu_D_dot;
    Annulus annulus{};
    double min_r2 = 0.98;            ///< flag fits below this R^2
    double exponent_tolerance = 0.05;  ///< flag exponents this far from the n_th = 0 value
    DtopOptions dtop{};              ///< thermal member is overwritten per row
};

/// Power-law fit at t_c for each occupation in `occupations` (which must
/// contain 0).  A row deviates when its R^2 drops below min_r2 or its exponent
/// leaves the zero-temperature value by more than exponent_tolerance.
inline std::vector<ThermalFitRow> thermal_scaling_sweep(const ModeBank& bank, std::span<const double> occupations,
                                                        double t_c, const ThermalSweepOptions& opt = {},
                                                        unsigned threads = 1) {
    if (std::find(occupations.begin(), occupations.end(), 0.0) == occupations.end())
        throw Error(ErrorCode::invalid_spec, "thermal sweep must include n_th = 0");
    const auto grid = annulus_grid(t_c, opt.annulus);
    auto fit_at = [&](double n_th) {
        DtopOptions d = opt.dtop;
        d.thermal.n_th = n_th;
        return fit_power_law(dtop(bank, grid, d, threads), opt.observable, t_c, opt.annulus);
    };
    const ScalingFit zero = fit_at(0.0);
    std::vector<ThermalFitRow> rows;
    for (double n_th : occupations) {
        ThermalFitRow row{n_th, n_th == 0.0 ? zero : fit_at(n_th), false};
        row.deviates = !(row.fit.r2 >= opt.min_r2) || std::abs(row.fit.kappa - zero.kappa) > opt.exponent_tolerance;
        rows.push_back(row);
    }
    return rows;
}

inline void write_size_scaling_csv(std::ostream& os, std::span<const long long> sizes, std::span<const double> values,
                                   std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "N,f_tc\n";
    for (std::size_t i = 0; i < sizes.size(); ++i) csv::write_row(os, {csv::num(sizes[i]), csv::num(values[i])});
}

inline void write_time_scaling_csv(std::ostream& os, std::span<const double> offsets, std::span<const double> values,
                                   std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "t_offset,f\n";
    for (std::size_t i = 0; i < offsets.size(); ++i) csv::write_row(os, {csv::num(offsets[i]), csv::num(values[i])});
}

inline std::string fit_window(const ScalingFit& fit) { return csv::num(fit.window_lo) + ":" + csv::num(fit.window_hi); }

inline void write_fit_summary_csv(std::ostream& os, std::span<const ScalingFit> fits, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "model,kappa,upsilon,r2,window\n";
    for (const auto& f : fits)
        csv::write_row(os, {std::string(to_string(f.model)), csv::num(f.kappa), csv::num(f.upsilon), csv::num(f.r2),
                            fit_window(f)});
}

}  // namespace dtpt
