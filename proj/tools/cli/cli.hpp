#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "stereosal/pipeline.hpp"

namespace stereosal::cli {

/// Entry point of the `stereosal` tool: run | batch | eval.
int run_cli(int argc, const char* const* argv);
int run_cli(const std::vector<std::string>& args);

nlohmann::json config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const nlohmann::json& j);

// Applies the STEREOSAL_LOG environment variable to the default logger.
void configure_logging();

}  // namespace stereosal::cli
