#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

#include "dtpt/loschmidt.hpp"

using namespace dtpt;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {
constexpr double pi = std::numbers::pi;

SpectrumSpec harmonic(long long n, double alpha, double g0) {
    SpectrumSpec s;
    s.n_modes = n;
    s.spectral_exponent = alpha;
    s.coupling_amplitude = g0;
    return s;
}

ModeBank single_mode(double omega, double lam2) {
    return ModeBank(harmonic(1, 0, 1), {omega}, {omega * std::sqrt(lam2)});
}

SpectrumSpec membrane(long long n, double g0, double offset = 0.75) {
    SpectrumSpec s;
    s.kind = SpectrumKind::membrane_uniform;
    s.n_modes = n;
    s.base_frequency = 1.0;
    s.offset = offset;
    s.coupling_amplitude = g0;
    return s;
}
}  // namespace

TEST_CASE("real log amplitude at the origin") {
    const auto bank = build_mode_bank(harmonic(1000, 1.0, 0.3));
    CHECK(log_amplitude_real(bank, 0.0) == 0.0);
}

TEST_CASE("revivals of the harmonic bath are exact") {
    for (double alpha : {-1.0, 0.0, 1.0}) {
        for (long long n : {10LL, 1000LL, 100000LL}) {
            const auto bank = build_mode_bank(harmonic(n, alpha, 1.0));
            const double scale = bank.total_weight();
            for (int m = 1; m <= 5; ++m) {
                const double g = log_amplitude_real(bank, m * two_pi);
                CHECK(std::abs(g) < 1e-12 * scale);
            }
        }
    }
    const auto bank = build_mode_bank(harmonic(1000, 0.0, 1.0));
    CHECK(log_amplitude_real(bank, two_pi) == 0.0);
}

TEST_CASE("single mode closed form") {
    const auto bank = single_mode(2.0, 0.25);
    const double g = log_amplitude_real(bank, pi / 2.0);
    CHECK_THAT(g, WithinRel(-0.5, 1e-15));
    CHECK_THAT(std::exp(g), WithinAbs(0.606531, 1e-6));
}

TEST_CASE("real log amplitude is non-positive") {
    const auto bank = build_mode_bank(harmonic(500, -1.0, 0.8));
    for (int i = 0; i < 400; ++i) CHECK(log_amplitude_real(bank, 0.0173 * i) <= 0.0);
}

TEST_CASE("complex continuation on the real axis reproduces the real value exactly") {
    for (double alpha : {-1.0, 0.0, 1.0}) {
        const auto bank = build_mode_bank(harmonic(3000, alpha, 0.9));
        for (int i = 0; i < 50; ++i) {
            const double t = 0.123 * i;
            const auto z = log_amplitude_complex(bank, t, 0.0);
            REQUIRE(z.re == log_amplitude_real(bank, t));
            REQUIRE(z.im == 0.0);
        }
    }
}

TEST_CASE("complex continuation is conjugate symmetric") {
    const auto bank = build_mode_bank(harmonic(200, 1.0, 0.5));
    for (double t : {0.3, 1.7, 5.9}) {
        for (double s : {0.001, 0.01, 0.05}) {
            const auto up = log_amplitude_complex(bank, t, s);
            const auto dn = log_amplitude_complex(bank, t, -s);
            CHECK(up.re == dn.re);
            CHECK(up.im == -dn.im);
        }
    }
}

TEST_CASE("complex continuation single mode hand value") {
    const auto bank = single_mode(1.0, 1.0);
    const auto z = log_amplitude_complex(bank, pi, std::log(2.0));
    CHECK_THAT(z.re, WithinRel(-2.25, 1e-14));
    CHECK_THAT(z.im, WithinAbs(0.0, 1e-15));
}

TEST_CASE("complex continuation clamps large terms and counts them") {
    const auto bank = single_mode(1.0, 1.0);
    long long clamps = 0;
    const auto z = log_amplitude_complex(bank, 1.0, 40.0, 1e4, &clamps);
    CHECK(clamps == 2);
    CHECK(std::abs(z.re) == 1e4);
    CHECK(std::abs(z.im) == 1e4);
    clamps = 0;
    const auto far = log_amplitude_complex(bank, 1.0, 1000.0, 1e4, &clamps);
    CHECK(std::isfinite(far.re));
    CHECK(std::isfinite(far.im));
    CHECK(clamps == 2);
    clamps = 0;
    log_amplitude_complex(bank, 1.0, 0.1, 1e4, &clamps);
    CHECK(clamps == 0);
}

TEST_CASE("complex continuation is periodic for the harmonic bath") {
    const auto bank = build_mode_bank(harmonic(300, 1.0, 0.5));
    const double scale = bank.total_weight();
    for (double t : {0.4, 2.2}) {
        const auto a = log_amplitude_complex(bank, t, 0.01);
        const auto b = log_amplitude_complex(bank, t + two_pi, 0.01);
        CHECK_THAT(a.re, WithinAbs(b.re, 1e-11 * scale));
        CHECK_THAT(a.im, WithinAbs(b.im, 1e-11 * scale));
    }
}

TEST_CASE("zero temperature dephasing equals the Loschmidt exponent") {
    const auto bank = build_mode_bank(harmonic(2000, 1.0, 0.4));
    for (int i = 0; i < 40; ++i) {
        const double t = 0.31 * i;
        REQUIRE(dephasing_gamma(bank, ThermalSpec{0.0}, t) == log_amplitude_real(bank, t));
    }
}

TEST_CASE("dephasing vanishes at t = 0") {
    const auto bank = build_mode_bank(membrane(1000, 1.0));
    for (double n : {0.0, 1.0, 100.0}) CHECK(dephasing_gamma(bank, ThermalSpec{n}, 0.0) == 0.0);
}

TEST_CASE("thermal factor of the fundamental is 1 + 2 n_th") {
    const auto bank = single_mode(1.0, 0.25);
    const ThermalSpec th{1.0};
    CHECK_THAT(coth_factor(th.beta(1.0), 1.0), WithinRel(3.0, 1e-14));
    CHECK_THAT(dephasing_gamma(bank, th, pi), WithinRel(-1.5, 1e-14));
    CHECK_THAT(dephasing_gamma(bank, ThermalSpec{0.0}, pi), WithinRel(-0.5, 1e-14));
}

TEST_CASE("coth derivative matches a central difference") {
    const double beta = 0.37;
    for (double w : {0.1, 1.0, 7.0}) {
        const double h = 1e-6 * w;
        const double fd = (coth_factor(beta, w + h) - coth_factor(beta, w - h)) / (2 * h);
        CHECK_THAT(coth_factor_derivative(beta, w), WithinRel(fd, 1e-7));
    }
}

TEST_CASE("dephasing deepens monotonically with temperature") {
    const auto bank = build_mode_bank(harmonic(500, 0.0, 0.5));
    for (int i = 0; i < 60; ++i) {
        const double t = 0.21 * i;
        double prev = log_amplitude_real(bank, t);
        CHECK(prev <= 0.0);
        for (double n : {0.1, 1.0, 10.0, 100.0}) {
            const double g = dephasing_gamma(bank, ThermalSpec{n}, t);
            CHECK(g <= prev);
            prev = g;
        }
    }
}

TEST_CASE("free induction decay") {
    const auto grid = uniform_grid(two_pi, 0.0, 1.0 / 64, 129);
    const auto flat = fid(build_mode_bank(harmonic(100, 1.0, 0.0)), ThermalSpec{3.0}, grid);
    for (double v : flat.coherence) CHECK(v == 1.0);

    const auto bank = build_mode_bank(harmonic(1000, 1.0, 0.7));
    const auto series = fid(bank, ThermalSpec{0.0}, grid);
    CHECK(series.coherence[64] == 1.0);
    CHECK(series.coherence[128] == 1.0);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CHECK(series.coherence[i] > 0.0);
        CHECK(series.coherence[i] <= 1.0);
        CHECK(series.coherence[i] == std::exp(dephasing_gamma(bank, ThermalSpec{0.0}, grid[i])));
    }
}

TEST_CASE("free induction decay is identical for any worker count") {
    const auto bank = build_mode_bank(membrane(5000, 1.0, 0.25));
    const auto grid = uniform_grid(1.0, 0.0, 0.01, 300);
    const auto a = fid(bank, ThermalSpec{2.0}, grid, 1);
    const auto b = fid(bank, ThermalSpec{2.0}, grid, 3);
    CHECK(a.gamma == b.gamma);
}

TEST_CASE("membrane collapses deepen and revivals weaken with coupling") {
    const double taubar = membrane(1, 1).collective_period();
    const auto grid = uniform_grid(taubar, 0.0, 1.0 / 512, 1025);
    double prev_min = 2.0, prev_rev = 2.0;
    for (double g0 : {0.5, 1.0, 2.0}) {
        const auto series = fid(build_mode_bank(membrane(1000, g0)), ThermalSpec{0.0}, grid);
        double lo = 1.0;
        for (double v : series.coherence) lo = std::min(lo, v);
        const double rev = series.coherence[512];
        CHECK(lo < prev_min);
        CHECK(rev < prev_rev);
        prev_min = lo;
        prev_rev = rev;
    }
}

TEST_CASE("power dispersion breaks the revival") {
    SpectrumSpec s = harmonic(1000, 0.0, 1.0);
    s.kind = SpectrumKind::power_dispersion;
    s.dispersion_exponent = 1.2;
    const auto bank = build_mode_bank(s);
    CHECK(std::exp(log_amplitude_real(bank, two_pi)) < 0.9);
}

TEST_CASE("temperature from kelvin") {
    CHECK_THAT(occupation_from_temperature(20e6, 0.1), WithinAbs(104.0, 1.0));
    CHECK_THAT(occupation_from_temperature(20e6, 0.015), WithinAbs(15.0, 1.0));
    CHECK(occupation_from_temperature(20e6, 0.0) == 0.0);
}

TEST_CASE("FID CSV export") {
    const auto bank = single_mode(1.0, 0.25);
    const std::vector<double> grid{0.0, pi};
    std::ostringstream os;
    write_fid_csv(os, fid(bank, ThermalSpec{0.0}, grid));
    CHECK(os.str().rfind("t,gamma,fid\n0,0,1\n", 0) == 0);
}
