#include "dtpt/app/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace dtpt::app {

namespace pt = boost::property_tree;

std::string_view to_string(TimeUnit u) {
    switch (u) {
    case TimeUnit::tau0: return "tau0";
    case TimeUnit::taubar: return "taubar";
    case TimeUnit::raw: return "raw";
    }
    return "raw";
}

std::size_t GridConfig::count() const {
    if (!(step > 0.0) || !(end >= start) || !std::isfinite(end - start)) return 0;
    return static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::config_parse, msg); }

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

template <class T>
T parse_number(const std::string& text, const std::string& key) {
    T v{};
    const auto* b = text.data();
    const auto* e = b + text.size();
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) fail("bad value '" + text + "' for config key '" + key + "'");
    return v;
}

bool parse_bool(const std::string& text, const std::string& key) {
    std::string t = text;
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "yes" || t == "1" || t == "on") return true;
    if (t == "false" || t == "no" || t == "0" || t == "off") return false;
    fail("bad value '" + text + "' for config key '" + key + "'");
}

class Section {
public:
    Section(const pt::ptree& root, std::string name) : m_name(std::move(name)) {
        if (auto child = root.get_child_optional(pt::ptree::path_type(m_name, '\0'))) m_node = &*child;
    }

    bool present() const { return m_node != nullptr; }

    std::optional<std::string> raw(const std::string& key) {
        m_used.insert(key);
        if (!m_node) return std::nullopt;
        auto v = m_node->get_optional<std::string>(pt::ptree::path_type(key, '\0'));
        if (!v) return std::nullopt;
        return trim(*v);
    }

    std::string full(const std::string& key) const { return m_name + "." + key; }

    std::string required(const std::string& key) {
        auto v = raw(key);
        if (!v || v->empty()) fail("missing config key '" + full(key) + "'");
        return *v;
    }

    template <class T>
    void number(const std::string& key, T& out) {
        if (auto v = raw(key)) out = parse_number<T>(*v, full(key));
    }

    template <class T>
    T required_number(const std::string& key) {
        return parse_number<T>(required(key), full(key));
    }

    void flag(const std::string& key, bool& out) {
        if (auto v = raw(key)) out = parse_bool(*v, full(key));
    }

    template <class T>
    bool list(const std::string& key, std::vector<T>& out) {
        auto v = raw(key);
        if (!v) return false;
        out.clear();
        for (const auto& item : split_list(*v)) out.push_back(parse_number<T>(item, full(key)));
        return true;
    }

    void reject_unknown() const {
        if (!m_node) return;
        for (const auto& [key, child] : *m_node)
            if (!m_used.count(key)) fail("unknown config key '" + full(key) + "'");
    }

private:
    std::string m_name;
    const pt::ptree* m_node = nullptr;
    std::set<std::string> m_used;
};

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += csv::num(v[i]);
    }
    return s;
}

}  // namespace

TimeUnit RunConfig::resolved_unit() const {
    if (grid.unit) return *grid.unit;
    return spectrum.kind == SpectrumKind::membrane_uniform ? TimeUnit::taubar : TimeUnit::tau0;
}

double RunConfig::unit_length() const {
    switch (resolved_unit()) {
    case TimeUnit::tau0: return two_pi / spectrum.base_frequency;
    case TimeUnit::taubar: return 2.0 * two_pi / spectrum.base_frequency;
    case TimeUnit::raw: return 1.0;
    }
    return 1.0;
}

std::vector<double> RunConfig::times() const {
    require_grid(*this);
    // start and step are usually dyadic, so t = unit * (start + i step) hits
    // the critical multiples of the unit exactly.
    return uniform_grid(unit_length(), grid.start, grid.step, grid.count());
}

std::string RunConfig::resolved_text() const {
    std::ostringstream os;
    const auto& s = spectrum;
    os << "[spectrum] kind=" << to_string(s.kind) << " n_modes=" << s.n_modes
       << " base_frequency=" << csv::num(s.base_frequency) << " offset=" << csv::num(s.offset)
       << " coupling_amplitude=" << csv::num(s.coupling_amplitude)
       << " spectral_exponent=" << csv::num(s.spectral_exponent)
       << " dispersion_exponent=" << csv::num(s.dispersion_exponent) << '\n';
    os << "[grid] unit=" << to_string(resolved_unit());
    if (grid.present)
        os << " start=" << csv::num(grid.start) << " end=" << csv::num(grid.end) << " step=" << csv::num(grid.step);
    os << '\n';
    if (window.present) {
        os << "[complex_window]";
        if (window.tongues()) {
            os << " centers=" << join(window.centers) << " rel_halfwidth=" << csv::num(window.tongue.rel_halfwidth)
               << " columns_per_oscillation=" << csv::num(window.tongue.columns_per_oscillation)
               << " rows=" << window.tongue.rows << " s_extent=" << csv::num(window.tongue.s_extent);
        } else {
            os << " t_min=" << csv::num(window.t_min) << " t_max=" << csv::num(window.t_max)
               << " s_min=" << csv::num(window.s_min) << " s_max=" << csv::num(window.s_max) << " n_t=" << window.n_t
               << " n_s=" << window.n_s;
        }
        os << " check_symmetry=" << (window.check_symmetry ? "true" : "false") << '\n';
    }
    os << "[thermal] n_th=" << join(thermal.n_th) << '\n';
    const auto& c = scaling;
    os << "[scaling] sizes=" << join(c.sizes) << " detect_sizes=" << join(c.detect_sizes)
       << " critical_times=" << join(c.critical_times) << " eps_zero=" << csv::num(c.eps_zero)
       << " annulus_inner_steps=" << csv::num(c.annulus.inner_steps)
       << " annulus_outer=" << csv::num(c.annulus.outer_fraction) << " annulus_steps=" << c.annulus.steps
       << " branch_agreement=" << csv::num(c.annulus.agreement) << " growth_factor=" << csv::num(c.search.growth_factor)
       << " jump_factor=" << csv::num(c.search.jump_factor)
       << " relative_magnitude=" << csv::num(c.search.relative_magnitude)
       << " isolation=" << csv::num(c.search.isolation) << " min_r2=" << csv::num(c.min_r2)
       << " thermal_min_r2=" << csv::num(c.thermal_min_r2) << " exponent_tolerance=" << csv::num(c.exponent_tolerance)
       << '\n';
    os << "[output] svg=" << (output.svg ? "true" : "false")
       << " include_linear=" << (output.include_linear ? "true" : "false") << " density_bins=" << output.density_bins
       << '\n';
    return os.str();
}

void RunConfig::validate() const {
    try {
        spectrum.validate();
        ThermalSpec probe;
        for (double n : thermal.n_th) {
            probe.n_th = n;
            probe.beta(1.0);
        }
    } catch (const Error& e) {
        fail(e.what());
    }
    if (grid.present && grid.count() == 0) fail("empty time grid: need step > 0 and end >= start");
    auto increasing = [](const std::vector<long long>& v) {
        return std::adjacent_find(v.begin(), v.end(), [](long long a, long long b) { return b <= a; }) == v.end();
    };
    if (!increasing(scaling.sizes)) fail("scaling.sizes must be strictly increasing");
    if (!increasing(scaling.detect_sizes)) fail("scaling.detect_sizes must be strictly increasing");
    for (long long n : scaling.sizes)
        if (n < 1) fail("scaling.sizes entries must be >= 1");
    if (!(scaling.eps_zero > 0.0 && scaling.eps_zero < 1.0)) fail("scaling.eps_zero must be in (0, 1)");
    if (window.present && !window.tongues()) {
        try {
            ComplexWindow w{window.t_min, window.t_max, window.s_min, window.s_max, window.n_t, window.n_s};
            w.validate();
        } catch (const Error& e) {
            fail(e.what());
        }
    }
    if (output.density_bins < 2) fail("output.density_bins must be >= 2");
}

RunConfig parse_config(std::istream& is) {
    pt::ptree root;
    try {
        pt::read_ini(is, root);
    } catch (const pt::ini_parser_error& e) {
        fail(std::string("malformed config: ") + e.message() + " at line " + std::to_string(e.line()));
    }
    static const std::set<std::string> sections{"spectrum", "grid", "complex_window", "thermal", "scaling", "output"};
    for (const auto& [name, child] : root) {
        if (!sections.count(name)) fail("unknown config section '[" + name + "]'");
    }

    RunConfig cfg;
    Section sp(root, "spectrum");
    auto& s = cfg.spectrum;
    try {
        s.kind = parse_spectrum_kind(sp.required("kind"));
    } catch (const Error& e) {
        if (e.code() == ErrorCode::config_parse) throw;
        fail(std::string("spectrum.kind: ") + e.what());
    }
    s.n_modes = sp.required_number<long long>("n_modes");
    s.coupling_amplitude = sp.required_number<double>("coupling_amplitude");
    sp.number("base_frequency", s.base_frequency);
    sp.number("offset", s.offset);
    sp.number("spectral_exponent", s.spectral_exponent);
    sp.number("dispersion_exponent", s.dispersion_exponent);
    sp.reject_unknown();

    Section gr(root, "grid");
    cfg.grid.present = gr.present();
    if (auto u = gr.raw("unit")) {
        if (*u == "tau0") cfg.grid.unit = TimeUnit::tau0;
        else if (*u == "taubar") cfg.grid.unit = TimeUnit::taubar;
        else if (*u == "raw") cfg.grid.unit = TimeUnit::raw;
        else fail("bad value '" + *u + "' for config key 'grid.unit' (tau0, taubar or raw)");
    }
    if (cfg.grid.present) {
        cfg.grid.start = gr.required_number<double>("start");
        cfg.grid.end = gr.required_number<double>("end");
        cfg.grid.step = gr.required_number<double>("step");
    }
    gr.reject_unknown();

    Section cw(root, "complex_window");
    auto& w = cfg.window;
    w.present = cw.present();
    if (w.present) {
        cw.list("centers", w.centers);
        cw.number("rel_halfwidth", w.tongue.rel_halfwidth);
        cw.number("columns_per_oscillation", w.tongue.columns_per_oscillation);
        cw.number("rows", w.tongue.rows);
        cw.number("s_extent", w.tongue.s_extent);
        if (!w.tongues()) {
            w.t_min = cw.required_number<double>("t_min");
            w.t_max = cw.required_number<double>("t_max");
            w.s_min = cw.required_number<double>("s_min");
            w.s_max = cw.required_number<double>("s_max");
            w.n_t = cw.required_number<std::size_t>("n_t");
            w.n_s = cw.required_number<std::size_t>("n_s");
        }
        cw.flag("check_symmetry", w.check_symmetry);
    }
    cw.reject_unknown();

    Section th(root, "thermal");
    th.list("n_th", cfg.thermal.n_th);
    std::vector<double> kelvin;
    if (th.list("kelvin", kelvin)) {
        double f_hz = 0.0;
        if (auto v = th.raw("fundamental_hz")) f_hz = parse_number<double>(*v, th.full("fundamental_hz"));
        else fail("missing config key 'thermal.fundamental_hz' (needed with thermal.kelvin)");
        cfg.thermal.n_th.clear();
        for (double k : kelvin) cfg.thermal.n_th.push_back(occupation_from_temperature(f_hz, k));
    } else {
        th.raw("fundamental_hz");
    }
    if (cfg.thermal.n_th.empty()) fail("thermal.n_th must list at least one occupation");
    th.reject_unknown();

    Section sc(root, "scaling");
    auto& c = cfg.scaling;
    sc.list("sizes", c.sizes);
    sc.list("detect_sizes", c.detect_sizes);
    sc.list("critical_times", c.critical_times);
    sc.number("eps_zero", c.eps_zero);
    sc.number("annulus_inner_steps", c.annulus.inner_steps);
    sc.number("annulus_outer", c.annulus.outer_fraction);
    sc.number("annulus_steps", c.annulus.steps);
    sc.number("branch_agreement", c.annulus.agreement);
    sc.number("growth_factor", c.search.growth_factor);
    sc.number("jump_factor", c.search.jump_factor);
    sc.number("relative_magnitude", c.search.relative_magnitude);
    sc.number("isolation", c.search.isolation);
    sc.number("min_r2", c.min_r2);
    sc.number("thermal_min_r2", c.thermal_min_r2);
    sc.number("exponent_tolerance", c.exponent_tolerance);
    sc.reject_unknown();

    Section out(root, "output");
    if (auto d = out.raw("dir")) cfg.output.dir = *d;
    out.flag("svg", cfg.output.svg);
    out.flag("include_linear", cfg.output.include_linear);
    out.number("density_bins", cfg.output.density_bins);
    out.reject_unknown();

    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error(ErrorCode::io, "cannot open config '" + path.string() + "'");
    return parse_config(is);
}

void require_grid(const RunConfig& cfg) {
    if (!cfg.grid.present) fail("missing config key 'grid.start'");
    if (cfg.grid.count() == 0) fail("empty time grid: need step > 0 and end >= start");
}

void require_window(const RunConfig& cfg) {
    if (!cfg.window.present) throw Error(ErrorCode::window_missing, "config has no [complex_window] section");
}

void require_sizes(const RunConfig& cfg) {
    if (cfg.scaling.sizes.empty()) fail("missing config key 'scaling.sizes'");
    if (cfg.scaling.sizes.size() < 3)
        throw Error(ErrorCode::insufficient_sizes, "scaling.sizes needs at least three entries");
}

}  // namespace dtpt::app
