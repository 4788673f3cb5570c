#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stanceplan/execution_sim.hpp"
#include "stanceplan/reachability.hpp"

namespace stanceplan {

// Full problem description as serialized in the scenario file.
struct Scenario {
    std::uint64_t seed = 1;
    Point2 start{0.0, 0.0};
    Point2 end{1.0, 0.0};
    std::vector<TargetPose> targets;
    ArmModel arm;
    std::vector<Obstacle> obstacles;

    // Planner parameters.
    double alpha = 13.0;
    double lambda = -1.0;  // < 0 means the 0.1 * alpha default
    double walk_speed = 0.32;  // v in the travel term of the objective
    double r_min_tolerance = 0.05;
    int n_samples = 10000;
    double alpha_hull = 0.25;
    double time_budget = 120.0;

    GaitParams gait;

    // Timing model for estimate_plan_time.
    double t_stop = 8.0;
    double t_scan = 5.0;
};

// Throws ValidationError naming the offending field.
void validate_scenario(const Scenario& scenario);

// JSON text form (the scenario file grammar). parse throws ParseError on
// malformed input and ValidationError on invariant violations.
std::string scenario_to_json(const Scenario& scenario);
Scenario scenario_from_json(const std::string& text);

// File wrappers; throw IoError on filesystem failures.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

// Synthetic 14-target inspection layout: 5 two-target clusters around a
// rectangular vehicle footprint plus 4 singletons, built so that at most 9
// tolerance circles cover everything.
Scenario make_inspection14();

// Seeded random scenario with n targets placed along a corridor so that
// neighboring feasible regions overlap with substantial probability.
Scenario make_random_scenario(std::uint64_t seed, int n_targets);

}  // namespace stanceplan
