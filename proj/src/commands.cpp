#include "dtpt/app/commands.hpp"

#include <cmath>
#include <map>

#include "dtpt/app/svg.hpp"
#include "dtpt/geometry.hpp"

namespace dtpt::app {

namespace fs = std::filesystem;

namespace {

std::string nth_tag(double n_th) { return "nth_" + csv::num(n_th); }

std::string flag(bool b) { return b ? "1" : "0"; }

void write(Context& ctx, const std::string& name, const std::function<void(std::ostream&)>& body) {
    ctx.sink.write(ctx.prefix / name, body);
}

std::vector<double> in_units(std::span<const double> t, double unit) {
    std::vector<double> x(t.begin(), t.end());
    for (double& v : x) v /= unit;
    return x;
}

ModeBank bank_of_size(const RunConfig& cfg, long long n) {
    SpectrumSpec s = cfg.spectrum;
    s.n_modes = n;
    return build_mode_bank(s);
}

}  // namespace

SpectrumOutput cmd_spectrum(const RunConfig& cfg, Context& ctx) {
    StageTimer timer(ctx.sink.manifest(), (ctx.prefix / "spectrum").generic_string());
    SpectrumOutput out{build_mode_bank(cfg.spectrum), {}};
    out.density = spectral_density(out.bank, cfg.output.density_bins);
    const auto comment = cfg.resolved_text();
    write(ctx, "modes.csv", [&](std::ostream& os) { write_mode_bank_csv(os, out.bank, comment); });
    write(ctx, "spectral_density.csv", [&](std::ostream& os) { write_spectral_density_csv(os, out.density, comment); });
    return out;
}

std::vector<DtopSeries> cmd_dtop(const RunConfig& cfg, Context& ctx) {
    StageTimer timer(ctx.sink.manifest(), (ctx.prefix / "dtop").generic_string());
    const auto grid = cfg.times();
    const auto bank = build_mode_bank(cfg.spectrum);
    const double unit = cfg.unit_length();
    const bool many = cfg.thermal.n_th.size() > 1;
    std::vector<DtopSeries> out;
    for (double n_th : cfg.thermal.n_th) {
        DtopOptions opt;
        opt.thermal.n_th = n_th;
        out.push_back(dtop(bank, grid, opt, ctx.threads));
        const auto& d = out.back();
        const std::string stem = many ? "dtop_" + nth_tag(n_th) : "dtop";
        const auto comment = cfg.resolved_text() + "n_th=" + csv::num(n_th);
        write(ctx, stem + ".csv", [&](std::ostream& os) { write_dtop_csv(os, d, comment); });
        if (ctx.svg) {
            const auto x = in_units(d.times, unit);
            const std::pair<const char*, const std::vector<double>*> panels[] = {
                {"nu_D", &d.nu}, {"nu_D_dot", &d.nu_dot}, {"nu_D_ddot", &d.nu_ddot}};
            for (const auto& [name, values] : panels) {
                const std::vector<svg::Series> s{{name, *values}};
                write(ctx, stem + "_" + name + ".svg", [&](std::ostream& os) {
                    svg::line_plot(os, name, "t / " + std::string(to_string(cfg.resolved_unit())), x, s);
                });
            }
        }
    }
    return out;
}

PhaseSeries cmd_phase(const RunConfig& cfg, Context& ctx) {
    StageTimer timer(ctx.sink.manifest(), (ctx.prefix / "phase").generic_string());
    const auto grid = cfg.times();
    const auto bank = build_mode_bank(cfg.spectrum);
    auto out = total_geometric_phase(bank, grid, cfg.output.include_linear, ctx.threads);
    write(ctx, "phase.csv", [&](std::ostream& os) { write_phase_csv(os, out, cfg.resolved_text()); });
    if (ctx.svg) {
        const auto x = in_units(out.times, cfg.unit_length());
        const std::vector<svg::Series> s{{"phi_G", out.values}};
        write(ctx, "phase.svg", [&](std::ostream& os) {
            svg::line_plot(os, "geometric phase", "t / " + std::string(to_string(cfg.resolved_unit())), x, s);
        });
    }
    return out;
}

std::vector<FidSeries> cmd_fid(const RunConfig& cfg, Context& ctx) {
    StageTimer timer(ctx.sink.manifest(), (ctx.prefix / "fid").generic_string());
    const auto grid = cfg.times();
    const auto bank = build_mode_bank(cfg.spectrum);
    const bool many = cfg.thermal.n_th.size() > 1;
    std::vector<FidSeries> out;
    std::vector<svg::Series> curves;
    for (double n_th : cfg.thermal.n_th) {
        ThermalSpec th;
        th.n_th = n_th;
        out.push_back(fid(bank, th, grid, ctx.threads));
        const auto comment = cfg.resolved_text() + "n_th=" + csv::num(n_th);
        write(ctx, many ? "fid_" + nth_tag(n_th) + ".csv" : "fid.csv",
              [&](std::ostream& os) { write_fid_csv(os, out.back(), comment); });
        curves.push_back({"n_th=" + csv::num(n_th), out.back().coherence});
    }
    if (ctx.svg) {
        const auto x = in_units(grid, cfg.unit_length());
        write(ctx, "fid.svg", [&](std::ostream& os) {
            svg::line_plot(os, "|G(t)|", "t / " + std::string(to_string(cfg.resolved_unit())), x, curves);
        });
    }
    return out;
}

namespace {

void write_crossings_csv(std::ostream& os, const std::vector<CrossingEstimate>& rows, double unit,
                         const std::string& comment) {
    csv::write_comment(os, comment);
    os << "window_id,t_c,t_c_unit,s_intercept,slope,cell_height,converges,stable,prominent,interior,decreasing,"
          "declared\n";
    for (const auto& c : rows)
        csv::write_row(os, {csv::num(static_cast<long long>(c.window_id)), csv::num(c.t_c), csv::num(c.t_c / unit),
                            csv::num(c.s_intercept), csv::num(c.slope), csv::num(c.cell_height), flag(c.converges),
                            flag(c.stable), flag(c.prominent), flag(c.interior), flag(c.decreasing), flag(c.declared)});
}

}  // namespace

FisherOutput cmd_fisher(const RunConfig& cfg, Context& ctx) {
    require_window(cfg);
    auto& manifest = ctx.sink.manifest();
    StageTimer timer(manifest, (ctx.prefix / "fisher").generic_string());
    const double unit = cfg.unit_length();
    const auto& wc = cfg.window;
    const double eps = cfg.scaling.eps_zero;
    const auto comment = cfg.resolved_text();
    FisherOutput out;

    std::vector<long long> sizes = cfg.scaling.sizes;
    if (sizes.empty()) sizes.push_back(cfg.spectrum.n_modes);

    if (!wc.tongues()) {
        const ComplexWindow w{wc.t_min * unit, wc.t_max * unit, wc.s_min * unit, wc.s_max * unit, wc.n_t, wc.n_s};
        if (wc.check_symmetry && w.s_min != -w.s_max)
            manifest.warnings.push_back("complex window is not symmetric about s = 0 (s_min=" + csv::num(wc.s_min) +
                                        ", s_max=" + csv::num(wc.s_max) + ")");
        const auto bank = build_mode_bank(cfg.spectrum);
        out.field = scan(bank, w, ctx.threads);
        manifest.clamp_events += out.field->clamp_events;
        out.regions = extract_zero_regions(*out.field, eps);
        write(ctx, "field.csv", [&](std::ostream& os) { write_field_csv(os, *out.field, comment); });
        write(ctx, "regions.csv", [&](std::ostream& os) { write_regions_csv(os, out.regions, comment); });
        if (ctx.svg)
            write(ctx, "field.svg", [&](std::ostream& os) {
                svg::field_map(os, "Re log G", *out.field, out.regions, std::log(eps));
            });
        if (!cfg.scaling.sizes.empty())
            out.tips = tongue_tip_trajectory(
                cfg.spectrum, sizes, 1, [&](const ModeBank&, int) { return w; }, eps, ctx.threads);
    } else {
        // Tongue windows scale with the fastest mode, so the field itself is
        // not written; boundaries and tips are.
        for (long long n : sizes) {
            const auto bank = bank_of_size(cfg, n);
            std::vector<ZeroRegion> all;
            int next_id = 0;
            for (std::size_t k = 0; k < wc.centers.size(); ++k) {
                const auto w = tongue_window(bank, wc.centers[k] * unit, wc.tongue);
                const auto field = scan(bank, w, ctx.threads, default_gamma_max, false);
                manifest.clamp_events += field.clamp_events;
                auto regions = extract_zero_regions(field, eps);
                out.tips.scans.push_back({n, static_cast<int>(k), w, regions.size(), field.clamp_events});
                for (auto& r : regions) {
                    r.id += next_id;
                    out.tips.rows.push_back({n, static_cast<int>(k), r.id, r.tip.t, r.tip.s});
                    all.push_back(std::move(r));
                }
                next_id += static_cast<int>(out.tips.scans.back().region_count);
            }
            const auto c = comment + "n_modes=" + std::to_string(n);
            write(ctx, "regions_N" + std::to_string(n) + ".csv", [&](std::ostream& os) { write_regions_csv(os, all, c); });
            if (n == cfg.spectrum.n_modes) out.regions = std::move(all);
        }
    }
    if (!out.tips.scans.empty())
        write(ctx, "tips.csv", [&](std::ostream& os) { write_tips_csv(os, out.tips, comment); });
    if (sizes.size() >= 3 && !out.tips.rows.empty()) {
        out.crossings = crossing_times(out.tips);
        write(ctx, "crossings.csv", [&](std::ostream& os) { write_crossings_csv(os, out.crossings, unit, comment); });
    }
    return out;
}

namespace {

void write_points_csv(std::ostream& os, const std::vector<CriticalPoint>& points, double unit, const std::string& comment) {
    csv::write_comment(os, comment);
    os << "t_c,t_c_unit,observable,kind,value,strength\n";
    for (const auto& p : points)
        csv::write_row(os, {csv::num(p.t_c), csv::num(p.t_c / unit), std::string(to_string(p.observable)),
                            std::string(to_string(p.kind)), csv::num(p.value), csv::num(p.strength)});
}

void fit_row(std::vector<std::vector<std::string>>& rows, const PointScaling& p, double unit, const ScalingFit& f) {
    rows.push_back({csv::num(p.t_c / unit), std::string(to_string(p.point.observable)),
                    std::string(to_string(p.point.kind)), std::string(to_string(f.model)), csv::num(f.kappa),
                    csv::num(f.upsilon), csv::num(f.r2), fit_window(f), csv::num(f.kappa_left),
                    csv::num(f.kappa_right), flag(f.branches_agree)});
}

}  // namespace

ScalingOutput cmd_scaling(const RunConfig& cfg, Context& ctx) {
    require_grid(cfg);
    require_sizes(cfg);
    auto& manifest = ctx.sink.manifest();
    const auto& sc = cfg.scaling;
    const double unit = cfg.unit_length();
    const auto comment = cfg.resolved_text();
    ScalingOutput out;
    {
        StageTimer timer(manifest, (ctx.prefix / "detect").generic_string());
        const auto grid = cfg.times();
        std::map<long long, DtopSeries> by_size;
        for (long long n : sc.detect_sizes) by_size[n] = dtop(bank_of_size(cfg, n), grid, {}, ctx.threads);
        out.detected = find_critical_points(by_size, sc.search);
    }
    write(ctx, "critical_points.csv", [&](std::ostream& os) { write_points_csv(os, out.detected, unit, comment); });

    if (sc.critical_times.empty()) {
        for (const auto& p : out.detected) out.points.push_back({p, p.t_c});
    } else {
        for (double x : sc.critical_times) {
            const CriticalPoint* hit = nullptr;
            for (const auto& p : out.detected)
                if (std::abs(p.t_c / unit - x) <= 0.5 * cfg.grid.step) hit = &p;
            if (!hit)
                throw Error(ErrorCode::no_critical_point,
                            "no critical point detected near t = " + csv::num(x) + " " +
                                std::string(to_string(cfg.resolved_unit())));
            out.points.push_back({*hit, x * unit});
        }
    }

    StageTimer timer(manifest, (ctx.prefix / "fits").generic_string());
    const ModeBank largest = bank_of_size(cfg, sc.sizes.back());
    std::vector<std::vector<std::string>> fit_rows, exponent_rows, thermal_rows;
    for (std::size_t k = 0; k < out.points.size(); ++k) {
        auto& p = out.points[k];
        const auto obs = p.point.observable;
        const auto series = dtop(largest, annulus_grid(p.t_c, sc.annulus), {}, ctx.threads);
        std::vector<double> offsets;
        for (double t : series.times) offsets.push_back((t - p.t_c) / p.t_c);
        const std::string tag = std::to_string(k + 1);
        const auto c = comment + "t_c=" + csv::num(p.t_c / unit) + " observable=" + std::string(to_string(obs)) +
                       " n_modes=" + std::to_string(sc.sizes.back());
        write(ctx, "time_scaling_" + tag + ".csv",
              [&](std::ostream& os) { write_time_scaling_csv(os, offsets, observable(series, obs), c); });

        if (p.point.kind == KinkType::log_divergent) {
            const std::vector<double> at{p.t_c};
            p.sizes = sc.sizes;
            for (long long n : sc.sizes) p.size_values.push_back(observable(dtop(bank_of_size(cfg, n), at), obs)[0]);
            p.size_fit = fit_log_size(p.sizes, p.size_values);
            p.time_fit = fit_log_time(series, obs, p.t_c, sc.annulus);
            write(ctx, "size_scaling_" + tag + ".csv",
                  [&](std::ostream& os) { write_size_scaling_csv(os, p.sizes, p.size_values, c); });
            fit_row(fit_rows, p, unit, *p.size_fit);
            fit_row(fit_rows, p, unit, *p.time_fit);
            try {
                p.dynamical_exponent = dynamical_exponent(*p.size_fit, *p.time_fit, sc.min_r2);
            } catch (const Error& e) {
                manifest.warnings.push_back("t_c=" + csv::num(p.t_c / unit) + ": " + e.what());
            }
            exponent_rows.push_back({csv::num(p.t_c / unit), csv::num(p.size_fit->kappa), csv::num(p.time_fit->kappa),
                                     p.dynamical_exponent ? csv::num(*p.dynamical_exponent) : "nan"});
        } else {
            p.power_fit = fit_power_law(series, obs, p.t_c, sc.annulus);
            fit_row(fit_rows, p, unit, *p.power_fit);
            const bool warm = cfg.thermal.n_th.size() > 1 || cfg.thermal.n_th.front() != 0.0;
            if (warm) {
                ThermalSweepOptions opt;
                opt.observable = obs;
                opt.annulus = sc.annulus;
                opt.min_r2 = sc.thermal_min_r2;
                opt.exponent_tolerance = sc.exponent_tolerance;
                p.thermal = thermal_scaling_sweep(largest, cfg.thermal.n_th, p.t_c, opt, ctx.threads);
                for (const auto& r : p.thermal)
                    thermal_rows.push_back({csv::num(p.t_c / unit), csv::num(r.n_th), csv::num(r.fit.kappa),
                                            csv::num(r.fit.r2), flag(r.deviates)});
            }
        }
    }
    auto table = [&](const std::string& name, const std::string& header, const std::vector<std::vector<std::string>>& rows) {
        write(ctx, name, [&](std::ostream& os) {
            csv::write_comment(os, comment);
            os << header << '\n';
            for (const auto& r : rows) csv::write_row(os, r);
        });
    };
    table("fits.csv", "t_c_unit,observable,kind,model,kappa,upsilon,r2,window,kappa_left,kappa_right,branches_agree",
          fit_rows);
    if (!exponent_rows.empty()) table("exponents.csv", "t_c_unit,kappa,kappa_prime,z", exponent_rows);
    if (!thermal_rows.empty()) table("thermal.csv", "t_c_unit,n_th,exponent,r2,deviates", thermal_rows);
    return out;
}

void run_command(const std::string& command, const RunConfig& cfg, Context& ctx) {
    ctx.sink.manifest().configs.push_back((ctx.prefix.empty() ? "" : "run " + ctx.prefix.generic_string() + "\n") +
                                          cfg.resolved_text());
    if (command == "spectrum") cmd_spectrum(cfg, ctx);
    else if (command == "dtop") cmd_dtop(cfg, ctx);
    else if (command == "phase") cmd_phase(cfg, ctx);
    else if (command == "fid") cmd_fid(cfg, ctx);
    else if (command == "fisher") cmd_fisher(cfg, ctx);
    else if (command == "scaling") cmd_scaling(cfg, ctx);
    else throw Error(ErrorCode::config_parse, "unknown command '" + command + "'");
}

void reproduce(const Preset& p, OutputSink& sink, unsigned threads, bool svg) {
    auto& m = sink.manifest();
    m.assumptions.insert(m.assumptions.end(), p.assumptions.begin(), p.assumptions.end());
    for (const auto& run : p.runs) {
        Context ctx{sink, run.name, threads, svg || run.config.output.svg};
        run_command(run.command, run.config, ctx);
    }
}

int exit_code(ErrorCode code) {
    switch (code) {
    case ErrorCode::config_parse:
    case ErrorCode::invalid_spec:
    case ErrorCode::window_missing:
    case ErrorCode::insufficient_sizes: return 2;
    case ErrorCode::io: return 4;
    default: return 3;
    }
}

}  // namespace dtpt::app
