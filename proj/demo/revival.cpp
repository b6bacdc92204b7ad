// Ohmic bath at N = 10^4: the echo revives at the global period, the order
// parameter grows as ln N there, and the Fisher-zero tongue reaches the axis.
#include <cstdio>

#include "dtpt/dtpt.hpp"

using namespace dtpt;

int main() {
    SpectrumSpec spec;
    spec.spectral_exponent = 1.0;
    spec.coupling_amplitude = 1.0;

    std::printf("N        Gamma(tau0)   nu_D(tau0)\n");
    for (long long n : {1000LL, 10000LL, 100000LL}) {
        spec.n_modes = n;
        const auto bank = build_mode_bank(spec);
        const std::vector<double> t{two_pi};
        std::printf("%-8lld %-13.3g %.6f\n", n, log_amplitude_real(bank, two_pi), dtop(bank, t).nu[0]);
    }

    const std::vector<long long> sizes{100, 1000, 10000};
    const std::vector<double> centers{two_pi};
    spec.n_modes = 0;
    const auto table = tongue_tip_trajectory(spec, sizes, centers);
    for (const auto& c : crossing_times(table)) {
        std::printf("\ntongue near tau0: t_c / tau0 = %.5f, declared = %s\n", c.t_c / two_pi, c.declared ? "yes" : "no");
        for (std::size_t k = 0; k < c.sizes.size(); ++k)
            std::printf("  N = %-6lld |s*| = %.3e\n", c.sizes[k], c.s_star[k]);
    }
}
