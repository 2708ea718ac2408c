#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "spinflip/experiment.hpp"

namespace spinflip {

/// Builds an experiment from the JSON config layout documented in README.md.
/// Errors are ConfigError with the offending field path as prefix, e.g.
/// "model.spin: not a half-integer".
ExperimentSpec parse_experiment(const nlohmann::json& doc);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// "1.5", "0.2,0.4,1.0" or "start:stop:step" (inclusive of stop).
std::vector<double> parse_axis(std::string_view text);

}  // namespace spinflip
