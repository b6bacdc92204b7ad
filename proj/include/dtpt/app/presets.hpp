#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dtpt/app/config.hpp"

namespace dtpt::app {

struct PresetRun {
    std::string name;     ///< output subdirectory
    std::string command;  ///< spectrum, dtop, phase, fid, fisher or scaling
    RunConfig config;
};

struct Preset {
    std::string name;
    std::string description;
    std::vector<std::string> assumptions;
    std::vector<PresetRun> runs;
};

std::vector<std::string> preset_names();

/// Throws config_parse for unknown names.
Preset preset(std::string_view name);

}  // namespace dtpt::app
