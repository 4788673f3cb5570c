#pragma once

#include <string>
#include <vector>

#include "stanceplan/scenario.hpp"

namespace stanceplan {

// Wall-clock seconds per pipeline stage.
struct StageTimings {
    double sampling = 0.0;
    double hulls = 0.0;
    double overlaps_circles = 0.0;
    double mip = 0.0;
    double simulation = 0.0;
};

struct RunReport {
    StageTimings timings;
    int n_targets = 0;
    int n_candidates = 0;
    int stop_count = 0;
    int naive_stop_count = 0;
    double objective = 0.0;
    double travel_distance = 0.0;
    double estimated_time = 0.0;        // MIP plan, estimate_plan_time
    double naive_estimated_time = 0.0;  // baseline
    double improvement_ratio = 0.0;     // 1 - estimated_time / naive_estimated_time
    bool proven_optimal = true;
    double lower_bound = 0.0;
};

struct PipelineOutput {
    std::vector<FeasibleRegion> regions;
    std::vector<StanceCandidate> candidates;
    PlanResult plan;
    PlanResult naive;
    SimTrace trace;
    RunReport report;
};

// Full pipeline: sampling -> hulls -> overlap cells + tolerance circles ->
// MIP -> naive baseline -> simulation. Stage failures are rethrown as
// PipelineError carrying the stage name; the stage tags are "sampling",
// "hulls", "candidates", "mip", "simulation".
PipelineOutput run_pipeline(const Scenario& scenario);

struct BenchRow {
    int n_targets = 0;
    int runs = 0;
    StageTimings mean;
    double mean_candidates = 0.0;
    double mean_stop_count = 0.0;
    double max_run_seconds = 0.0;  // slowest single pipeline run at this size
    bool all_bounded = true;  // every MIP result proven optimal or a bounded incumbent
};

// Seeded random scenarios per size, pipeline timing means per size.
std::vector<BenchRow> bench_scaling(const std::vector<int>& n_targets_list, int seeds,
                                    std::uint64_t base_seed = 1);

// Structured text forms of the artifacts.
std::string plan_to_text(const PlanResult& plan);
std::string report_to_text(const RunReport& report);
std::string bench_to_text(const std::vector<BenchRow>& rows);

}  // namespace stanceplan
