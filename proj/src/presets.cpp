#include "dtpt/app/presets.hpp"

#include <sstream>

namespace dtpt::app {

namespace {

RunConfig from_text(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

// Harmonic runs use tau0 = 2 pi / omega0 as the time unit.  The coupling
// g0 / omega0 is not fixed by the figures; 1 makes kappa = n exactly, and
// kappa scales as g0^2 while crossing times and exponents do not move.
std::string harmonic(double alpha, long long n) {
    return "[spectrum]\nkind = harmonic-bec\nn_modes = " + std::to_string(n) +
           "\ncoupling_amplitude = 1\nspectral_exponent = " + csv::num(alpha) + "\n";
}

// Membrane runs use taubar = 4 pi / gap; the half-period of the figures,
// pi / delta, is taubar / 2.
std::string membrane(double g0, long long n) {
    return "[spectrum]\nkind = membrane-uniform\nn_modes = " + std::to_string(n) +
           "\nbase_frequency = 1\noffset = 0.25\ncoupling_amplitude = " + csv::num(g0) + "\n";
}

std::string alpha_tag(double alpha) { return alpha > 0 ? "alpha_p1" : alpha < 0 ? "alpha_m1" : "alpha_0"; }

const std::string coupling_note =
    "g0/omega0 = 1 (not fixed by the figure); kappa and kappa' scale as g0^2, their ratio, the crossing times and "
    "the power-law exponents do not depend on g0";
const std::string membrane_note =
    "membrane: omega_k = (k + 1/4) gap with gap = 1, taubar = 4 pi / gap, half-period pi / delta = taubar / 2";

Preset fig1() {
    Preset p{"fig1", "order parameter and its time derivatives for alpha = +1, 0, -1 at N = 1000", {coupling_note,
             "grid step tau0 / 400 over [0, 3.5] tau0"}, {}};
    for (double a : {1.0, 0.0, -1.0})
        p.runs.push_back({alpha_tag(a), "dtop", from_text(harmonic(a, 1000) + "[grid]\nstart = 0\nend = 3.5\nstep = 0.0025\n")});
    return p;
}

Preset fig2() {
    Preset p{"fig2", "size and time scaling at the first three critical times for alpha = +1, 0, -1, N up to 1e5",
             {coupling_note, "critical points detected on a tau0 / 200 grid with N = 100, 300, 1000",
              "fit annulus 10 steps to 0.02 t_c with 60 steps per side"},
             {}};
    for (double a : {1.0, 0.0, -1.0})
        p.runs.push_back({alpha_tag(a), "scaling",
                          from_text(harmonic(a, 100000) +
                                    "[grid]\nstart = 0.005\nend = 3.5\nstep = 0.005\n"
                                    "[scaling]\nsizes = 1000, 10000, 100000\ncritical_times = 1, 2, 3\n")});
    return p;
}

Preset fig3a() {
    Preset p{"fig3a", "free-induction decay for g0 / delta = 0.5, 1, 2 on the membrane spectrum",
             {membrane_note, "delta = gap / 2, so g0 / delta = 0.5, 1, 2 is g0 = 0.25, 0.5, 1",
              "N = 1000 (the figure does not state it)"},
             {}};
    for (double r : {0.5, 1.0, 2.0})
        p.runs.push_back({"g0_over_delta_" + csv::num(r), "fid",
                          from_text(membrane(0.5 * r, 1000) + "[grid]\nstart = 0\nend = 3\nstep = 0.0025\n")});
    return p;
}

Preset fig3c() {
    Preset p{"fig3c", "Fisher-zero tongues of the membrane near the first three multiples of pi / delta",
             {membrane_note, "g0 = gap / 2: stronger coupling pushes |G| below the zero threshold on the real axis",
              "tongue windows t_c +/- 6 %, six columns per fastest oscillation, 41 rows"},
             {}};
    p.runs.push_back({"tongues", "fisher",
                      from_text(membrane(0.5, 10000) +
                                "[complex_window]\ncenters = 0.5, 1, 1.5\n"
                                "[scaling]\nsizes = 100, 1000, 10000\n")});
    return p;
}

Preset fig4() {
    Preset p{"fig4", "membrane kink scaling at t_c = m taubar / 2, m = 1..6, N up to 1e5",
             {membrane_note, "g0 = 2 gap (not fixed by the figure): kappa = (-4, 12, -20) against the quoted (-3.8, 11.5, -20)",
              "critical points detected on a taubar / 200 grid with N = 100, 300, 1000"},
             {}};
    p.runs.push_back({"membrane", "scaling",
                      from_text(membrane(2.0, 100000) +
                                "[grid]\nstart = 0.005\nend = 3.2\nstep = 0.005\n"
                                "[scaling]\nsizes = 1000, 10000, 100000\ncritical_times = 0.5, 1, 1.5, 2, 2.5, 3\n")});
    return p;
}

Preset fig4d() {
    Preset p{"fig4d", "power-law exponent at t_c = taubar for n_th = 0, 1, 100",
             {membrane_note, "g0 = 2 gap", "temperature enters through coth(beta omega / 2) weights"}, {}};
    p.runs.push_back({"thermal", "scaling",
                      from_text(membrane(2.0, 100000) +
                                "[grid]\nstart = 0.005\nend = 3.2\nstep = 0.005\n"
                                "[thermal]\nn_th = 0, 1, 100\n"
                                "[scaling]\nsizes = 1000, 10000, 100000\ncritical_times = 1\n")});
    return p;
}

}  // namespace

std::vector<std::string> preset_names() { return {"fig1", "fig2", "fig3a", "fig3c", "fig4", "fig4d"}; }

Preset preset(std::string_view name) {
    if (name == "fig1") return fig1();
    if (name == "fig2") return fig2();
    if (name == "fig3a") return fig3a();
    if (name == "fig3c") return fig3c();
    if (name == "fig4") return fig4();
    if (name == "fig4d") return fig4d();
    throw Error(ErrorCode::config_parse, "unknown preset '" + std::string(name) + "' (fig1, fig2, fig3a, fig3c, fig4, fig4d)");
}

}  // namespace dtpt::app
