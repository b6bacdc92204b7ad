#pragma once

// Loschmidt amplitude G = exp(Gamma) on the real time axis and continued into
// complex time, plus finite-temperature pure dephasing of a probe spin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <ostream>
#include <span>
#include <string_view>
#include <vector>

#include "dtpt/csv.hpp"
#include "dtpt/numeric.hpp"
#include "dtpt/spectrum.hpp"
#include "dtpt/thermal.hpp"

namespace dtpt {

inline constexpr double default_gamma_max = 1.0e4;

/// Gamma(t) = -sum_k lambda_k^2 (1 - cos omega_k t) <= 0.
inline double log_amplitude_real(const ModeBank& bank, double t) {
    const auto omega = bank.frequencies();
    const auto lam2 = bank.weights();
    std::vector<double> terms(bank.size());
    for (std::size_t k = 0; k < bank.size(); ++k) {
        const double c = sincos_phase(omega[k], t).cos;
        terms[k] = -lam2[k] * (1.0 - c);
    }
    return pairwise_sum(terms);
}

struct ComplexGamma {
    double re = 0.0;
    double im = 0.0;
};

/// Gamma at z = t + i s.  Each term is clamped to [-gamma_max, gamma_max]
/// before accumulation; clamp events are added to *clamp_events when given.
/// At s = 0 the real part follows the exact arithmetic of log_amplitude_real.
inline ComplexGamma log_amplitude_complex(const ModeBank& bank, double t, double s,
                                          double gamma_max = default_gamma_max,
                                          long long* clamp_events = nullptr) {
    const auto omega = bank.frequencies();
    const auto lam2 = bank.weights();
    std::vector<double> re(bank.size()), im(bank.size());
    long long clamps = 0;
    for (std::size_t k = 0; k < bank.size(); ++k) {
        const auto [sn, cs] = sincos_phase(omega[k], t);
        const double x = omega[k] * s;
        const double ch = std::min(std::cosh(x), 1e300);
        const double sh = std::clamp(std::sinh(x), -1e300, 1e300);
        const double tr = -lam2[k] * (1.0 - cs * ch);
        const double ti = -lam2[k] * (sn * sh);
        re[k] = std::min(std::max(tr, -gamma_max), gamma_max);
        im[k] = std::min(std::max(ti, -gamma_max), gamma_max);
        clamps += (re[k] != tr) + (im[k] != ti);
    }
    if (clamp_events) *clamp_events += clamps;
    return {pairwise_sum(re), pairwise_sum(im)};
}

/// lambda_k^2 coth(beta omega_k / 2), beta fixed by the occupation of the
/// lowest mode.  At n_th = 0 this returns the bare weights unchanged.
inline std::vector<double> thermal_weights(const ModeBank& bank, const ThermalSpec& thermal) {
    std::vector<double> w(bank.weights().begin(), bank.weights().end());
    if (thermal.zero_temperature() || bank.size() == 0) return w;
    const double beta = thermal.beta(bank.frequencies().front());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] *= coth_factor(beta, bank.frequencies()[k]);
    return w;
}

/// Gamma_T(t) = -sum_k lambda_k^2 coth(beta omega_k / 2) (1 - cos omega_k t).
inline double dephasing_gamma(const ModeBank& bank, const ThermalSpec& thermal, double t) {
    if (thermal.zero_temperature()) return log_amplitude_real(bank, t);
    const auto w = thermal_weights(bank, thermal);
    const auto omega = bank.frequencies();
    std::vector<double> terms(bank.size());
    for (std::size_t k = 0; k < bank.size(); ++k) terms[k] = -w[k] * (1.0 - sincos_phase(omega[k], t).cos);
    return pairwise_sum(terms);
}

struct FidSeries {
    std::vector<double> times;
    std::vector<double> gamma;
    std::vector<double> coherence;  ///< exp(gamma), in (0, 1]
};

inline FidSeries fid(const ModeBank& bank, const ThermalSpec& thermal, std::span<const double> grid,
                     unsigned threads = 1) {
    FidSeries out;
    out.times.assign(grid.begin(), grid.end());
    out.gamma.resize(grid.size());
    out.coherence.resize(grid.size());
    parallel_for(grid.size(), threads, [&](std::size_t i) {
        out.gamma[i] = dephasing_gamma(bank, thermal, grid[i]);
        out.coherence[i] = std::exp(out.gamma[i]);
    });
    return out;
}

inline void write_fid_csv(std::ostream& os, const FidSeries& series, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "t,gamma,fid\n";
    for (std::size_t i = 0; i < series.times.size(); ++i)
        csv::write_row(os, {csv::num(series.times[i]), csv::num(series.gamma[i]), csv::num(series.coherence[i])});
}

}  // namespace dtpt
