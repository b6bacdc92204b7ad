#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dtpt/app/commands.hpp"

namespace fs = std::filesystem;
using namespace dtpt;
using namespace dtpt::app;

namespace {

struct Options {
    std::string command;
    std::string target;  // preset name for reproduce
    std::string config;
    std::string preset;
    std::string out;
    bool svg = false;
    int threads = 0;
};

int run(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    manifest.threads = resolve_threads(o.threads);
    fs::path out = o.out;

    if (o.command == "reproduce") {
        const std::string name = !o.target.empty() ? o.target : o.preset;
        if (name.empty()) throw Error(ErrorCode::config_parse, "reproduce needs a preset name");
        const auto p = preset(name);
        if (out.empty()) out = "out";
        out /= name;
        manifest.command = "reproduce " + name;
        OutputSink sink(out, manifest);
        reproduce(p, sink, manifest.threads, o.svg);
    } else if (!o.preset.empty()) {
        if (!o.config.empty()) throw Error(ErrorCode::config_parse, "--config and --preset are exclusive");
        const auto p = preset(o.preset);
        if (out.empty()) out = "out";
        manifest.command = o.command + " --preset " + o.preset;
        manifest.assumptions = p.assumptions;
        OutputSink sink(out, manifest);
        bool any = false;
        for (const auto& r : p.runs) {
            if (r.command != o.command) continue;
            any = true;
            Context ctx{sink, r.name, manifest.threads, o.svg || r.config.output.svg};
            run_command(r.command, r.config, ctx);
        }
        if (!any) throw Error(ErrorCode::config_parse, "preset '" + o.preset + "' has no " + o.command + " run");
    } else {
        if (o.config.empty()) throw Error(ErrorCode::config_parse, "missing --config or --preset");
        const auto cfg = load_config(o.config);
        if (out.empty()) out = cfg.output.dir;
        manifest.command = o.command + " --config " + o.config;
        OutputSink sink(out, manifest);
        Context ctx{sink, {}, manifest.threads, o.svg || cfg.output.svg};
        run_command(o.command, cfg, ctx);
    }

    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const fs::path path = out / "manifest.json";
    std::ofstream os(path);
    if (!os) throw Error(ErrorCode::io, "cannot write '" + path.string() + "'");
    manifest.write_json(os);
    if (!os) throw Error(ErrorCode::io, "write failed for '" + path.string() + "'");
    for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << "wrote " << manifest.files.size() << " files to " << out.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dynamical topological phase transitions in dephasing spin-boson baths"};
    app.require_subcommand(1);
    Options o;
    auto common = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "INI config file");
        sub->add_option("--preset", o.preset, "figure preset (fig1, fig2, fig3a, fig3c, fig4, fig4d)");
        sub->add_option("--out", o.out, "output directory (default: [output] dir, or ./out)");
        sub->add_flag("--svg", o.svg, "also write SVG plots");
        sub->add_option("--threads", o.threads, "worker threads (default: DTPT_THREADS, or 1)")->check(CLI::PositiveNumber);
    };
    const std::pair<const char*, const char*> commands[] = {
        {"spectrum", "mode bank and binned spectral density"},
        {"dtop", "order parameter and its time derivatives"},
        {"phase", "total geometric phase"},
        {"fid", "free-induction decay |G(t)|"},
        {"fisher", "Fisher zeros: field, regions, tongue tips and crossings"},
        {"scaling", "critical points and their size/time scaling"},
    };
    for (const auto& [name, help] : commands) common(app.add_subcommand(name, help));
    auto* rep = app.add_subcommand("reproduce", "run a figure preset");
    rep->add_option("name", o.target, "fig1, fig2, fig3a, fig3c, fig4 or fig4d");
    common(rep);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    o.command = app.get_subcommands().front()->get_name();

    try {
        return run(o);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_code(e.code());
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "error: io: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
