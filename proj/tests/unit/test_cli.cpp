#include <catch_amalgamated.hpp>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtpt/app/commands.hpp"

using namespace dtpt;
using namespace dtpt::app;
namespace fs = std::filesystem;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / "dtpt_cli_tests" / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

struct Result {
    int code = -1;
    std::string err;
};

Result cli(const fs::path& dir, const std::string& args, const std::string& env = {}) {
    const auto err = dir / "stderr.txt";
    const std::string cmd = env + " " + DTPT_CLI_PATH + " " + args + " > " + (dir / "stdout.txt").string() + " 2> " +
                            err.string();
    const int status = std::system(cmd.c_str());
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, slurp(err)};
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const auto p = dir / "run.ini";
    std::ofstream(p) << text;
    return p;
}

std::vector<std::string> data_lines(const fs::path& p) {
    std::istringstream is(slurp(p));
    std::vector<std::string> out;
    for (std::string line; std::getline(is, line);)
        if (!line.empty() && line[0] != '#') out.push_back(line);
    return out;
}

RunConfig parse(const std::string& text) {
    std::istringstream is(text);
    return parse_config(is);
}

const std::string harmonic1k = "[spectrum]\nkind = harmonic-bec\nn_modes = 1000\ncoupling_amplitude = 1\nspectral_exponent = 1\n";

}  // namespace

TEST_CASE("config parsing resolves units and defaults") {
    const auto h = parse(harmonic1k + "[grid]\nstart = 0\nend = 1\nstep = 0.25\n");
    CHECK(h.resolved_unit() == TimeUnit::tau0);
    CHECK(h.times() == std::vector<double>{0.0, 0.25 * two_pi, 0.5 * two_pi, 0.75 * two_pi, two_pi});
    const auto m = parse("[spectrum]\nkind = membrane-uniform\nn_modes = 10\ncoupling_amplitude = 1\nbase_frequency = 2\n");
    CHECK(m.resolved_unit() == TimeUnit::taubar);
    CHECK(m.unit_length() == 2 * two_pi / 2.0);
    const auto r = parse(harmonic1k + "[grid]\nunit = raw\nstart = 1\nend = 2\nstep = 0.5\n");
    CHECK(r.times() == std::vector<double>{1.0, 1.5, 2.0});
    CHECK(h.thermal.n_th == std::vector<double>{0.0});
}

TEST_CASE("config errors name the offending key") {
    auto message = [](const std::string& text) {
        try {
            parse(text);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::config_parse);
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK_THAT(message("[spectrum]\nkind = harmonic-bec\ncoupling_amplitude = 1\n"), ContainsSubstring("spectrum.n_modes"));
    CHECK_THAT(message(harmonic1k + "[grid]\nstart = 0\nend = 1\n"), ContainsSubstring("grid.step"));
    CHECK_THAT(message(harmonic1k + "[grid]\nstart = 0\nend = 1\nstep = 0.1\nstpe = 2\n"), ContainsSubstring("grid.stpe"));
    CHECK_THAT(message(harmonic1k + "[grid]\nstart = 0\nend = x\nstep = 0.1\n"), ContainsSubstring("grid.end"));
    CHECK_THAT(message(harmonic1k + "[scaling]\nsizes = 1000, 100, 10000\n"), ContainsSubstring("strictly increasing"));
    CHECK_THAT(message(harmonic1k + "[grid]\nstart = 1\nend = 0\nstep = 0.1\n"), ContainsSubstring("empty time grid"));
    CHECK_THAT(message(harmonic1k + "[plots]\nx = 1\n"), ContainsSubstring("plots"));
    CHECK_THAT(message("[spectrum]\nkind = drum\nn_modes = 3\ncoupling_amplitude = 1\n"), ContainsSubstring("spectrum.kind"));
}

TEST_CASE("temperatures convert to occupations") {
    const auto hot = parse(harmonic1k + "[thermal]\nkelvin = 0.1, 0.015\nfundamental_hz = 20e6\n");
    REQUIRE(hot.thermal.n_th.size() == 2);
    CHECK_THAT(hot.thermal.n_th[0], WithinAbs(104.0, 1.0));
    CHECK_THAT(hot.thermal.n_th[1], WithinAbs(15.0, 1.0));
}

TEST_CASE("resolved config round-trips through the comment header") {
    const auto cfg = parse(harmonic1k + "[grid]\nstart = 0\nend = 1\nstep = 0.5\n[output]\ndir = somewhere\n");
    const auto text = cfg.resolved_text();
    CHECK_THAT(text, ContainsSubstring("kind=harmonic-bec n_modes=1000"));
    CHECK_THAT(text, ContainsSubstring("[grid] unit=tau0 start=0 end=1 step=0.5"));
    CHECK(text.find("somewhere") == std::string::npos);
}

TEST_CASE("presets parse and carry their runs") {
    for (const auto& name : preset_names()) {
        const auto p = preset(name);
        CHECK(p.name == name);
        CHECK_FALSE(p.runs.empty());
        CHECK_FALSE(p.assumptions.empty());
    }
    CHECK(preset("fig1").runs.size() == 3);
    CHECK(preset("fig2").runs.front().config.scaling.sizes == std::vector<long long>{1000, 10000, 100000});
    CHECK_THROWS_AS(preset("fig9"), Error);
}

TEST_CASE("exit codes by error class") {
    CHECK(exit_code(ErrorCode::config_parse) == 2);
    CHECK(exit_code(ErrorCode::window_missing) == 2);
    CHECK(exit_code(ErrorCode::degenerate_fit) == 3);
    CHECK(exit_code(ErrorCode::no_critical_point) == 3);
    CHECK(exit_code(ErrorCode::io) == 4);
}

TEST_CASE("spectrum command writes the mode bank") {
    const auto dir = scratch("spectrum");
    const auto cfg = write_config(dir, harmonic1k);
    REQUIRE(cli(dir, "spectrum --config " + cfg.string() + " --out " + (dir / "out").string()).code == 0);
    const auto rows = data_lines(dir / "out" / "modes.csv");
    CHECK(rows.size() == 1001);
    CHECK(rows.front() == "k,omega,g");
    CHECK_THAT(slurp(dir / "out" / "modes.csv"), ContainsSubstring("# [spectrum] kind=harmonic-bec"));
    CHECK(fs::exists(dir / "out" / "spectral_density.csv"));
    CHECK_THAT(slurp(dir / "out" / "manifest.json"), ContainsSubstring("\"sha256\""));

    const auto mcfg = write_config(dir, "[spectrum]\nkind = membrane-uniform\nn_modes = 5\noffset = 0.75\ncoupling_amplitude = 1\n");
    REQUIRE(cli(dir, "spectrum --config " + mcfg.string() + " --out " + (dir / "m").string()).code == 0);
    CHECK(data_lines(dir / "m" / "modes.csv")[1] == "0,0.75,1");
}

TEST_CASE("missing key and empty grid exit with code 2") {
    const auto dir = scratch("missing");
    auto cfg = write_config(dir, "[spectrum]\nkind = harmonic-bec\ncoupling_amplitude = 1\n");
    auto r = cli(dir, "spectrum --config " + cfg.string() + " --out " + (dir / "out").string());
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("spectrum.n_modes"));
    cfg = write_config(dir, harmonic1k + "[grid]\nstart = 2\nend = 1\nstep = 0.1\n");
    CHECK(cli(dir, "dtop --config " + cfg.string() + " --out " + (dir / "out").string()).code == 2);
    cfg = write_config(dir, harmonic1k);
    r = cli(dir, "dtop --config " + cfg.string() + " --out " + (dir / "out").string());
    CHECK(r.code == 2);
    CHECK_THAT(r.err, ContainsSubstring("grid.start"));
    CHECK(cli(dir, "fisher --config " + cfg.string() + " --out " + (dir / "out").string()).code == 2);
    CHECK(cli(dir, "dtop --config " + (dir / "absent.ini").string()).code == 4);
    CHECK(cli(dir, "reproduce fig9 --out " + (dir / "out").string()).code == 2);
    CHECK(cli(dir, "dtop --bogus").code == 2);
}

TEST_CASE("unwritable output exits with code 4") {
    const auto dir = scratch("io");
    std::ofstream(dir / "file") << "x";
    const auto cfg = write_config(dir, harmonic1k);
    CHECK(cli(dir, "spectrum --config " + cfg.string() + " --out " + (dir / "file" / "sub").string()).code == 4);
}

TEST_CASE("scaling needs three sizes and a real critical point") {
    const auto dir = scratch("scaling");
    const std::string grid = "[grid]\nstart = 0.005\nend = 3.5\nstep = 0.005\n";
    auto cfg = write_config(dir, harmonic1k + grid + "[scaling]\nsizes = 1000, 10000\n");
    CHECK(cli(dir, "scaling --config " + cfg.string() + " --out " + (dir / "out").string()).code == 2);
    cfg = write_config(dir, harmonic1k + grid + "[scaling]\nsizes = 100, 1000, 10000\ncritical_times = 0.7\n");
    const auto r = cli(dir, "scaling --config " + cfg.string() + " --out " + (dir / "out").string());
    CHECK(r.code == 3);
    CHECK_THAT(r.err, ContainsSubstring("no-critical-point"));
}

TEST_CASE("fisher command outputs") {
    const auto dir = scratch("fisher");
    const std::string window = "[complex_window]\nt_min = 0.9\nt_max = 1.1\ns_min = -0.01\ns_max = 0.02\nn_t = 41\nn_s = 17\n"
                               "check_symmetry = true\n";
    auto cfg = write_config(dir, "[spectrum]\nkind = harmonic-bec\nn_modes = 100\ncoupling_amplitude = 0\n" + window);
    REQUIRE(cli(dir, "fisher --svg --config " + cfg.string() + " --out " + (dir / "out").string()).code == 0);
    CHECK(data_lines(dir / "out" / "regions.csv") == std::vector<std::string>{"region_id,t,s"});
    CHECK(data_lines(dir / "out" / "field.csv").size() == 1 + 41 * 17);
    CHECK(fs::exists(dir / "out" / "field.svg"));
    CHECK_THAT(slurp(dir / "out" / "manifest.json"), ContainsSubstring("not symmetric"));
}

TEST_CASE("reproduce fig1 writes three order-parameter series") {
    const auto dir = scratch("fig1");
    REQUIRE(cli(dir, "reproduce fig1 --out " + dir.string()).code == 0);
    for (const char* run : {"alpha_p1", "alpha_0", "alpha_m1"}) {
        const auto rows = data_lines(dir / "fig1" / run / "dtop.csv");
        CHECK(rows.front() == "t,nu_D,nu_D_dot,nu_D_ddot");
        CHECK(rows.size() == 1402);
    }
    CHECK_THAT(slurp(dir / "fig1" / "alpha_0" / "dtop.csv"), ContainsSubstring("n_modes=1000"));
}

TEST_CASE("outputs do not depend on the worker count") {
    const auto dir = scratch("threads");
    const auto cfg = write_config(dir, harmonic1k + "[grid]\nstart = 0\nend = 2\nstep = 0.001\n[thermal]\nn_th = 0, 3\n");
    REQUIRE(cli(dir, "dtop --config " + cfg.string() + " --out " + (dir / "a").string() + " --threads 1").code == 0);
    REQUIRE(cli(dir, "dtop --config " + cfg.string() + " --out " + (dir / "b").string(), "DTPT_THREADS=3").code == 0);
    CHECK_THAT(slurp(dir / "b" / "manifest.json"), ContainsSubstring("\"threads\": 3"));
    for (const char* f : {"dtop_nth_0.csv", "dtop_nth_3.csv"}) CHECK(slurp(dir / "a" / f) == slurp(dir / "b" / f));
}
