#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dtpt/fisher.hpp"
#include "dtpt/scaling.hpp"

namespace dtpt::app {

enum class TimeUnit { tau0, taubar, raw };

std::string_view to_string(TimeUnit u);

/// Uniform time grid in units of `unit`: start, start + step, ... <= end.
struct GridConfig {
    bool present = false;
    std::optional<TimeUnit> unit;  ///< unset means the spectrum's natural period
    double start = 0.0;
    double end = 0.0;
    double step = 0.0;

    std::size_t count() const;
};

/// Either a fixed box or tongue windows centred on `centers`.  Times and
/// imaginary parts are in the grid unit.
struct WindowConfig {
    bool present = false;
    double t_min = 0.0;
    double t_max = 0.0;
    double s_min = 0.0;
    double s_max = 0.0;
    std::size_t n_t = 0;
    std::size_t n_s = 0;
    std::vector<double> centers;
    TongueWindowOptions tongue{};
    bool check_symmetry = false;

    bool tongues() const { return !centers.empty(); }
};

struct ThermalConfig {
    std::vector<double> n_th{0.0};
};

struct ScalingConfig {
    std::vector<long long> sizes;
    std::vector<long long> detect_sizes{100, 300, 1000};
    std::vector<double> critical_times;  ///< in the grid unit; empty keeps every detected point
    double eps_zero = default_eps_zero;
    Annulus annulus{};
    CriticalSearchOptions search{};
    double min_r2 = 0.99;
    double thermal_min_r2 = 0.98;
    double exponent_tolerance = 0.05;
};

struct OutputConfig {
    std::filesystem::path dir = "out";
    bool svg = false;
    bool include_linear = false;
    std::size_t density_bins = 50;
};

struct RunConfig {
    SpectrumSpec spectrum{};
    GridConfig grid{};
    WindowConfig window{};
    ThermalConfig thermal{};
    ScalingConfig scaling{};
    OutputConfig output{};

    /// Length of one grid unit in raw time.
    double unit_length() const;
    TimeUnit resolved_unit() const;
    std::vector<double> times() const;

    /// Every setting, including defaults, one "[section] key=value ..." line
    /// per section.  The output directory is left out so artifacts do not
    /// depend on where they were written.
    std::string resolved_text() const;

    void validate() const;
};

/// Parses an INI-style config.  Unknown keys and missing required keys throw
/// config_parse naming the key.
RunConfig parse_config(std::istream& is);
RunConfig load_config(const std::filesystem::path& path);

/// Keys needed beyond [spectrum] by each command.
void require_grid(const RunConfig& cfg);
void require_window(const RunConfig& cfg);
void require_sizes(const RunConfig& cfg);

}  // namespace dtpt::app
