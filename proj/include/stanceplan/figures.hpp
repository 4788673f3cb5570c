#pragma once

#include <string>
#include <vector>

#include "stanceplan/pipeline.hpp"

namespace stanceplan {

// Writes the figure set for one pipeline run into out_dir:
//   overlay.svg  - regions, tolerance circles, planned path, executed trace
//   errors.svg   - terminal-error scatter with a box summary
//   metrics.txt  - RunReport key-value dump
// Returns the list of files written. The error figure is omitted (and noted
// in metrics.txt) when the trace holds no arrivals. Throws IoError on write
// failure.
std::vector<std::string> emit_figures(const PipelineOutput& output, const std::string& out_dir);

}  // namespace stanceplan
