#pragma once

// Geometric phases of the displaced modes and the dynamical topological order
// parameter nu_D built from their frequency derivatives.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "dtpt/csv.hpp"
#include "dtpt/error.hpp"
#include "dtpt/numeric.hpp"
#include "dtpt/spectrum.hpp"
#include "dtpt/thermal.hpp"

namespace dtpt {

/// phi(t) = lambda^2 (omega t - sin omega t), or -lambda^2 sin omega t for the
/// oscillatory part alone.
inline double mode_phase(double lam2, double omega, double t, bool include_linear) {
    const double s = sincos_phase(omega, t).sin;
    if (include_linear) return lam2 * (omega * t - s);
    return -lam2 * s;
}

struct PhaseSeries {
    std::vector<double> times;
    std::vector<double> values;
    bool include_linear = false;
};

inline PhaseSeries total_geometric_phase(const ModeBank& bank, std::span<const double> grid, bool include_linear,
                                         unsigned threads = 1) {
    PhaseSeries out;
    out.times.assign(grid.begin(), grid.end());
    out.values.resize(grid.size());
    out.include_linear = include_linear;
    const auto omega = bank.frequencies();
    const auto lam2 = bank.weights();
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        std::vector<double> terms(bank.size());
        for (std::size_t k = 0; k < bank.size(); ++k) terms[k] = mode_phase(lam2[k], omega[k], grid[i], include_linear);
        out.values[i] = pairwise_sum(terms);
    });
    return out;
}

enum class DtopMethod { analytic, finite_difference };

inline std::string_view to_string(DtopMethod m) {
    return m == DtopMethod::analytic ? "analytic" : "finite-difference";
}

struct DtopOptions {
    bool include_linear = true;
    /// Re-evaluate g_k from the coupling law when differentiating in omega_k;
    /// false holds g_k fixed.
    bool coupling_follows_frequency = true;
    ThermalSpec thermal{};
};

struct DtopSeries {
    std::vector<double> times;
    std::vector<double> nu;
    std::vector<double> nu_dot;
    std::vector<double> nu_ddot;
    DtopMethod method = DtopMethod::analytic;
};

/// Overall factor applied to sum_k dphi_k/domega_k: counts windings in units
/// of the bath period and orients them so that the ohmic bath gives kappa = +n.
inline double dtop_normalization(const ModeBank& bank) { return -bank.spec().base_frequency / two_pi; }

namespace detail {

// Effective weight w(omega) and dw/domega per mode, including the optional
// thermal factor.
struct DtopWeights {
    std::vector<double> w;
    std::vector<double> dw;
};

inline double thermal_beta(const ModeBank& bank, const ThermalSpec& thermal) {
    if (thermal.zero_temperature() || bank.size() == 0) return std::numeric_limits<double>::infinity();
    return thermal.beta(bank.frequencies().front());
}

inline DtopWeights dtop_weights(const ModeBank& bank, const DtopOptions& opt) {
    const auto omega = bank.frequencies();
    const auto lam2 = bank.weights();
    const double alpha = opt.coupling_follows_frequency ? bank.spec().effective_alpha() : 0.0;
    const double beta = thermal_beta(bank, opt.thermal);
    DtopWeights out{std::vector<double>(bank.size()), std::vector<double>(bank.size())};
    for (std::size_t k = 0; k < bank.size(); ++k) {
        const double w = lam2[k];
        const double dw = (alpha - 2.0) * w / omega[k];
        const double c = coth_factor(beta, omega[k]);
        out.w[k] = w * c;
        out.dw[k] = dw * c + w * coth_factor_derivative(beta, omega[k]);
    }
    return out;
}

// Weight at a displaced frequency, following the same rules as dtop_weights.
inline double weight_at(const ModeBank& bank, const CouplingLaw& law, std::size_t k, double omega, double beta,
                        const DtopOptions& opt) {
    double w;
    if (opt.coupling_follows_frequency) {
        w = law.weight(omega);
    } else {
        const double r = bank.couplings()[k] / omega;
        w = r * r;
    }
    return w * coth_factor(beta, omega);
}

}  // namespace detail

/// Analytic nu_D and its first two time derivatives.
inline DtopSeries dtop(const ModeBank& bank, std::span<const double> grid, const DtopOptions& opt = {},
                       unsigned threads = 1) {
    DtopSeries out;
    out.method = DtopMethod::analytic;
    out.times.assign(grid.begin(), grid.end());
    out.nu.resize(grid.size());
    out.nu_dot.resize(grid.size());
    out.nu_ddot.resize(grid.size());
    const auto weights = detail::dtop_weights(bank, opt);
    const auto omega = bank.frequencies();
    const double norm = dtop_normalization(bank);
    const std::size_t n = bank.size();
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const double t = grid[i];
        std::vector<double> f0(n), f1(n), f2(n);
        for (std::size_t k = 0; k < n; ++k) {
            const double om = omega[k], w = weights.w[k], dw = weights.dw[k];
            const auto [s, c] = sincos_phase(om, t);
            if (opt.include_linear) {
                f0[k] = dw * (om * t - s) + w * t * (1.0 - c);
                f1[k] = (dw * om + w) * (1.0 - c) + w * t * om * s;
            } else {
                f0[k] = -dw * s - w * t * c;
                f1[k] = -(dw * om + w) * c + w * t * om * s;
            }
            f2[k] = (dw * om * om + 2.0 * w * om) * s + w * t * om * om * c;
        }
        out.nu[i] = norm * pairwise_sum(f0);
        out.nu_dot[i] = norm * pairwise_sum(f1);
        out.nu_ddot[i] = norm * pairwise_sum(f2);
    });
    return out;
}

enum class FdTimeDerivative {
    omega_difference,  ///< omega-differences of the closed-form time derivatives of phi_k
    grid_difference    ///< central differences of nu_D along the time grid
};

/// nu_D from central differences of phi_k in omega_k with relative step h
/// (fourth-order stencil), g_k re-evaluated at the displaced frequencies.
inline DtopSeries dtop_finite_difference(const ModeBank& bank, std::span<const double> grid, double h = 1e-7,
                                         const DtopOptions& opt = {}, unsigned threads = 1,
                                         FdTimeDerivative time_mode = FdTimeDerivative::omega_difference) {
    if (!(h >= 1e-8 && h <= 1e-3))
        throw Error(ErrorCode::step_too_small, "finite-difference step must lie in [1e-8, 1e-3]");
    DtopSeries out;
    out.method = DtopMethod::finite_difference;
    out.times.assign(grid.begin(), grid.end());
    out.nu.resize(grid.size());
    out.nu_dot.resize(grid.size());
    out.nu_ddot.resize(grid.size());
    const auto omega = bank.frequencies();
    const auto law = CouplingLaw::from(bank.spec());
    const double beta = detail::thermal_beta(bank, opt.thermal);
    const double norm = dtop_normalization(bank);
    const std::size_t n = bank.size();

    // Four nodes omega_k (1 + j h), j = -2, -1, 1, 2, for the fourth-order
    // central stencil [8 (f_1 - f_-1) - (f_2 - f_-2)] / (12 d).
    constexpr int offsets[4] = {-2, -1, 1, 2};
    std::vector<std::array<double, 4>> node(n), w_node(n);
    std::vector<double> inv_step(n);
    for (std::size_t k = 0; k < n; ++k) {
        for (int j = 0; j < 4; ++j) {
            node[k][j] = omega[k] * (1.0 + offsets[j] * h);
            w_node[k][j] = detail::weight_at(bank, law, k, node[k][j], beta, opt);
        }
        inv_step[k] = 1.0 / (6.0 * (node[k][2] - node[k][1]));
    }
    // phi and its first two time derivatives at one (w, omega).
    auto phase = [&](double w, double om, double t, std::array<double, 3>& v) {
        const auto [s, c] = sincos_phase(om, t);
        if (opt.include_linear) {
            v[0] = w * (om * t - s);
            v[1] = w * om * (1.0 - c);
        } else {
            v[0] = -w * s;
            v[1] = -w * om * c;
        }
        v[2] = w * om * om * s;
    };
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        const double t = grid[i];
        std::vector<double> f0(n), f1(n), f2(n);
        std::array<std::array<double, 3>, 4> v;
        for (std::size_t k = 0; k < n; ++k) {
            for (int j = 0; j < 4; ++j) phase(w_node[k][j], node[k][j], t, v[j]);
            f0[k] = (8.0 * (v[2][0] - v[1][0]) - (v[3][0] - v[0][0])) * inv_step[k];
            f1[k] = (8.0 * (v[2][1] - v[1][1]) - (v[3][1] - v[0][1])) * inv_step[k];
            f2[k] = (8.0 * (v[2][2] - v[1][2]) - (v[3][2] - v[0][2])) * inv_step[k];
        }
        out.nu[i] = norm * pairwise_sum(f0);
        out.nu_dot[i] = norm * pairwise_sum(f1);
        out.nu_ddot[i] = norm * pairwise_sum(f2);
    });

    if (time_mode == FdTimeDerivative::grid_difference && grid.size() >= 3) {
        const std::size_t m = grid.size();
        auto diff = [&](const std::vector<double>& f, std::vector<double>& d) {
            for (std::size_t i = 1; i + 1 < m; ++i) d[i] = (f[i + 1] - f[i - 1]) / (grid[i + 1] - grid[i - 1]);
            d[0] = (f[1] - f[0]) / (grid[1] - grid[0]);
            d[m - 1] = (f[m - 1] - f[m - 2]) / (grid[m - 1] - grid[m - 2]);
        };
        diff(out.nu, out.nu_dot);
        diff(out.nu_dot, out.nu_ddot);
    }
    return out;
}

inline void write_phase_csv(std::ostream& os, const PhaseSeries& series, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "t,phi_G\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
        csv::write_row(os, {csv::num(series.times[i]), csv::num(series.values[i])});
}

inline void write_dtop_csv(std::ostream& os, const DtopSeries& series, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "t,nu_D,nu_D_dot,nu_D_ddot\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
        csv::write_row(os, {csv::num(series.times[i]), csv::num(series.nu[i]), csv::num(series.nu_dot[i]),
                            csv::num(series.nu_ddot[i])});
}

}  // namespace dtpt
