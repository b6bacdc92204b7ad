#pragma once

// Mode banks: frequencies and couplings of the bosonic bath for the three
// spectrum families, plus the binned spectral density.

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dtpt/csv.hpp"
#include "dtpt/error.hpp"
#include "dtpt/numeric.hpp"
#include "dtpt/regression.hpp"

namespace dtpt {

enum class SpectrumKind { harmonic_bec, membrane_uniform, power_dispersion };

inline std::string_view to_string(SpectrumKind kind) {
    switch (kind) {
    case SpectrumKind::harmonic_bec: return "harmonic-bec";
    case SpectrumKind::membrane_uniform: return "membrane-uniform";
    case SpectrumKind::power_dispersion: return "power-dispersion";
    }
    return "?";
}

inline SpectrumKind parse_spectrum_kind(std::string_view name) {
    if (name == "harmonic-bec") return SpectrumKind::harmonic_bec;
    if (name == "membrane-uniform") return SpectrumKind::membrane_uniform;
    if (name == "power-dispersion") return SpectrumKind::power_dispersion;
    throw Error(ErrorCode::invalid_spec, "unknown spectrum kind '" + std::string(name) + "'");
}

/// Declarative recipe for a mode bank.  For membrane-uniform the base
/// frequency is the mode gap and omega_k = (k + offset) * gap.
struct SpectrumSpec {
    SpectrumKind kind = SpectrumKind::harmonic_bec;
    long long n_modes = 1000;
    double base_frequency = 1.0;
    double offset = 0.25;
    double coupling_amplitude = 1.0;
    double spectral_exponent = 0.0;
    double dispersion_exponent = 1.0;

    /// alpha as used by the coupling law (membrane couplings are flat).
    double effective_alpha() const {
        return kind == SpectrumKind::membrane_uniform ? 0.0 : spectral_exponent;
    }

    double frequency(long long k) const {
        const double kk = static_cast<double>(k);
        switch (kind) {
        case SpectrumKind::harmonic_bec: return (kk + 1.0) * base_frequency;
        case SpectrumKind::membrane_uniform: return (kk + offset) * base_frequency;
        case SpectrumKind::power_dispersion:
            // p == 1 must agree bit-for-bit with harmonic-bec.
            if (dispersion_exponent == 1.0) return (kk + 1.0) * base_frequency;
            return base_frequency * std::pow(kk + 1.0, dispersion_exponent);
        }
        return 0.0;
    }

    void validate() const {
        if (n_modes < 1) throw Error(ErrorCode::invalid_spec, "n_modes must be >= 1");
        if (!(base_frequency > 0.0) || !std::isfinite(base_frequency))
            throw Error(ErrorCode::invalid_spec, "base_frequency must be positive");
        if (!(coupling_amplitude >= 0.0) || !std::isfinite(coupling_amplitude))
            throw Error(ErrorCode::invalid_spec, "coupling_amplitude must be >= 0");
        if (!std::isfinite(spectral_exponent)) throw Error(ErrorCode::invalid_spec, "spectral_exponent must be finite");
        if (kind == SpectrumKind::membrane_uniform && !(offset > 0.0))
            throw Error(ErrorCode::invalid_spec, "membrane offset must be > 0 (offset 0 puts mode k=0 at zero frequency)");
        if (kind == SpectrumKind::power_dispersion && !(dispersion_exponent > 0.0))
            throw Error(ErrorCode::invalid_spec, "dispersion_exponent must be > 0");
    }

    /// Global period of the bath: tau0 = 2 pi / omega0 for the harmonic and
    /// power families, taubar = 4 pi / gap for the membrane (its non-analytic
    /// times are the multiples of taubar / 2).
    double collective_period() const {
        if (kind == SpectrumKind::membrane_uniform) return 2.0 * two_pi / base_frequency;
        return two_pi / base_frequency;
    }
};

/// lambda^2(omega) = (g(omega) / omega)^2 with g(omega) = g0 (omega / omega_ref)^(alpha/2),
/// and its derivative with respect to omega.
struct CouplingLaw {
    double g0 = 0.0;
    double omega_ref = 1.0;
    double alpha = 0.0;

    static CouplingLaw from(const SpectrumSpec& spec) {
        return {spec.coupling_amplitude, spec.base_frequency, spec.effective_alpha()};
    }

    double coupling(double omega) const {
        if (alpha == 0.0) return g0;
        return g0 * std::pow(omega / omega_ref, 0.5 * alpha);
    }
    double weight(double omega) const {
        const double g = coupling(omega);
        const double r = g / omega;
        return r * r;
    }
    double weight_derivative(double omega) const { return (alpha - 2.0) * weight(omega) / omega; }
};

class ModeBank {
public:
    ModeBank(SpectrumSpec spec, std::vector<double> frequencies, std::vector<double> couplings)
        : m_spec(spec), m_frequencies(std::move(frequencies)), m_couplings(std::move(couplings)) {
        if (m_frequencies.size() != m_couplings.size())
            throw Error(ErrorCode::invalid_spec, "frequency and coupling arrays differ in length");
        m_weights.resize(m_frequencies.size());
        for (std::size_t k = 0; k < m_frequencies.size(); ++k) {
            const double w = m_frequencies[k];
            if (!(w > 0.0) || !std::isfinite(w)) throw Error(ErrorCode::invalid_spec, "mode frequencies must be positive");
            if (k > 0 && !(w > m_frequencies[k - 1]))
                throw Error(ErrorCode::invalid_spec, "mode frequencies must be strictly increasing");
            if (!(m_couplings[k] >= 0.0)) throw Error(ErrorCode::invalid_spec, "couplings must be >= 0");
            const double r = m_couplings[k] / w;
            m_weights[k] = r * r;
            if (!std::isfinite(m_weights[k])) throw Error(ErrorCode::invalid_spec, "mode weight is not finite");
        }
    }

    const SpectrumSpec& spec() const noexcept { return m_spec; }
    std::size_t size() const noexcept { return m_frequencies.size(); }
    std::span<const double> frequencies() const noexcept { return m_frequencies; }
    std::span<const double> couplings() const noexcept { return m_couplings; }
    /// lambda_k^2 = (g_k / omega_k)^2 in mode order.
    std::span<const double> weights() const noexcept { return m_weights; }
    double total_weight() const { return pairwise_sum(m_weights); }

private:
    SpectrumSpec m_spec;
    std::vector<double> m_frequencies;
    std::vector<double> m_couplings;
    std::vector<double> m_weights;
};

inline ModeBank build_mode_bank(const SpectrumSpec& spec) {
    spec.validate();
    const auto law = CouplingLaw::from(spec);
    const auto n = static_cast<std::size_t>(spec.n_modes);
    std::vector<double> omega(n), g(n);
    for (std::size_t k = 0; k < n; ++k) {
        omega[k] = spec.frequency(static_cast<long long>(k));
        g[k] = law.coupling(omega[k]);
    }
    return ModeBank(spec, std::move(omega), std::move(g));
}

inline std::vector<double> weights(const ModeBank& bank) {
    return {bank.weights().begin(), bank.weights().end()};
}

enum class DensityWeighting {
    coupling_squared,   ///< g_k^2: J ~ nu^alpha under g ~ omega^(alpha/2)
    displacement_squared ///< (g_k / omega_k)^2, the alternative estimator
};

struct SpectralDensityEstimate {
    std::vector<double> centers;
    std::vector<double> density;
    double bin_width = 0.0;
    double alpha_hat = std::numeric_limits<double>::quiet_NaN();
    double r2 = 0.0;
    DensityWeighting weighting = DensityWeighting::coupling_squared;

    double total() const {
        std::vector<double> mass(density.size());
        for (std::size_t i = 0; i < density.size(); ++i) mass[i] = density[i] * bin_width;
        return pairwise_sum(mass);
    }
};

/// Histogram of the mode weights normalized by bin width, with a log-log
/// least-squares fit over the central 80% of bins.
inline SpectralDensityEstimate spectral_density(const ModeBank& bank, std::size_t n_bins,
                                                DensityWeighting weighting = DensityWeighting::coupling_squared) {
    if (bank.size() < 2) throw Error(ErrorCode::too_few_modes, "spectral density needs at least two modes");
    if (n_bins < 2) throw Error(ErrorCode::too_few_modes, "spectral density needs at least two bins");
    const auto omega = bank.frequencies();
    const double lo = omega.front(), hi = omega.back();
    SpectralDensityEstimate est;
    est.weighting = weighting;
    est.bin_width = (hi - lo) / static_cast<double>(n_bins);
    std::vector<std::vector<double>> members(n_bins);
    for (std::size_t k = 0; k < bank.size(); ++k) {
        auto bin = static_cast<std::size_t>((omega[k] - lo) / est.bin_width);
        if (bin >= n_bins) bin = n_bins - 1;
        const double g = bank.couplings()[k];
        members[bin].push_back(weighting == DensityWeighting::coupling_squared ? g * g : bank.weights()[k]);
    }
    est.centers.resize(n_bins);
    est.density.resize(n_bins);
    for (std::size_t i = 0; i < n_bins; ++i) {
        est.centers[i] = lo + (static_cast<double>(i) + 0.5) * est.bin_width;
        est.density[i] = pairwise_sum(members[i]) / est.bin_width;
    }
    const std::size_t skip = n_bins / 10;
    std::vector<double> lx, ly;
    for (std::size_t i = skip; i < n_bins - skip; ++i) {
        if (est.density[i] > 0.0) {
            lx.push_back(std::log(est.centers[i]));
            ly.push_back(std::log(est.density[i]));
        }
    }
    if (lx.size() >= 2) {
        const auto fit = fit_line(lx, ly);
        est.alpha_hat = fit.slope;
        est.r2 = fit.r2;
    }
    return est;
}

inline void write_mode_bank_csv(std::ostream& os, const ModeBank& bank, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "k,omega,g\n";
    for (std::size_t k = 0; k < bank.size(); ++k)
        csv::write_row(os, {csv::num(static_cast<long long>(k)), csv::num(bank.frequencies()[k]), csv::num(bank.couplings()[k])});
}

inline void write_spectral_density_csv(std::ostream& os, const SpectralDensityEstimate& est, std::string_view comment = {}) {
    csv::write_comment(os, comment);
    os << "# alpha_hat=" << csv::num(est.alpha_hat) << " r2=" << csv::num(est.r2) << '\n';
    os << "nu,J\n";
    for (std::size_t i = 0; i < est.centers.size(); ++i) csv::write_row(os, {csv::num(est.centers[i]), csv::num(est.density[i])});
}

}  // namespace dtpt
