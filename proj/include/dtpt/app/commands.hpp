#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "dtpt/app/config.hpp"
#include "dtpt/app/manifest.hpp"
#include "dtpt/app/presets.hpp"
#include "dtpt/fisher.hpp"
#include "dtpt/loschmidt.hpp"
#include "dtpt/scaling.hpp"

namespace dtpt::app {

/// Where a command writes: files go to sink.root() / prefix.
struct Context {
    OutputSink& sink;
    std::filesystem::path prefix;
    unsigned threads = 1;
    bool svg = false;
};

struct SpectrumOutput {
    ModeBank bank;
    SpectralDensityEstimate density;
};

struct FisherOutput {
    std::optional<AmplitudeField> field;  ///< box windows only
    std::vector<ZeroRegion> regions;      ///< box window at spectrum.n_modes
    TipTable tips;
    std::vector<CrossingEstimate> crossings;
};

struct PointScaling {
    CriticalPoint point;
    double t_c = 0.0;  ///< fit centre
    std::vector<long long> sizes;
    std::vector<double> size_values;
    std::optional<ScalingFit> size_fit;
    std::optional<ScalingFit> time_fit;
    std::optional<ScalingFit> power_fit;
    std::optional<double> dynamical_exponent;
    std::vector<ThermalFitRow> thermal;
};

struct ScalingOutput {
    std::vector<CriticalPoint> detected;
    std::vector<PointScaling> points;
};

SpectrumOutput cmd_spectrum(const RunConfig& cfg, Context& ctx);
std::vector<DtopSeries> cmd_dtop(const RunConfig& cfg, Context& ctx);
PhaseSeries cmd_phase(const RunConfig& cfg, Context& ctx);
std::vector<FidSeries> cmd_fid(const RunConfig& cfg, Context& ctx);
FisherOutput cmd_fisher(const RunConfig& cfg, Context& ctx);
ScalingOutput cmd_scaling(const RunConfig& cfg, Context& ctx);

/// Runs one command by name.
void run_command(const std::string& command, const RunConfig& cfg, Context& ctx);

/// Runs every configuration of a preset into sink.root() / run.
void reproduce(const Preset& p, OutputSink& sink, unsigned threads, bool svg);

/// Exit status for an error: 2 configuration, 3 numerical, 4 input/output.
int exit_code(ErrorCode code);

}  // namespace dtpt::app
