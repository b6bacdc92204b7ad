#pragma once

#include <cmath>
#include <limits>

#include "dtpt/error.hpp"

namespace dtpt {

/// Bath temperature expressed as the thermal occupation of the fundamental
/// mode; n_th = 0 is zero temperature.  Natural units (hbar = k_B = 1).
struct ThermalSpec {
    double n_th = 0.0;

    bool zero_temperature() const { return n_th == 0.0; }

    /// beta such that 1 / (exp(beta * omega_fund) - 1) = n_th.
    double beta(double omega_fund) const {
        if (!(n_th >= 0.0)) throw Error(ErrorCode::invalid_spec, "n_th must be >= 0");
        if (zero_temperature()) return std::numeric_limits<double>::infinity();
        return std::log1p(1.0 / n_th) / omega_fund;
    }
};

/// coth(beta omega / 2) = 1 + 2 / (exp(beta omega) - 1), exactly 1 at T = 0.
inline double coth_factor(double beta, double omega) {
    if (std::isinf(beta)) return 1.0;
    return 1.0 + 2.0 / std::expm1(beta * omega);
}

/// d/domega coth(beta omega / 2) = -(beta / 2) / sinh^2(beta omega / 2).
inline double coth_factor_derivative(double beta, double omega) {
    if (std::isinf(beta)) return 0.0;
    const double x = 0.5 * beta * omega;
    if (x > 350.0) return 0.0;
    const double s = std::sinh(x);
    return -0.5 * beta / (s * s);
}

/// Occupation of a mode of frequency f_hz (cycles per second) at T kelvin.
inline double occupation_from_temperature(double f_hz, double kelvin) {
    constexpr double planck = 6.62607015e-34;     // J s (exact, SI 2019)
    constexpr double boltzmann = 1.380649e-23;    // J / K (exact, SI 2019)
    if (!(kelvin > 0.0)) return 0.0;
    return 1.0 / std::expm1(planck * f_hz / (boltzmann * kelvin));
}

}  // namespace dtpt
