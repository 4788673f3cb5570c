#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "stanceplan/geometry.hpp"

namespace stanceplan {

struct TargetPose {
    int id = 0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    double approach_yaw = 0.0;  // recorded, not constrained in region generation

    Point2 xy() const { return {x, y}; }
};

// Two-link vertical-plane reach model with a horizontal standoff floor.
struct ArmModel {
    double shoulder_height = 1.0;
    double l1 = 0.4;
    double l2 = 0.4;
    double d_floor = 0.2;  // minimum horizontal standoff
};

struct Obstacle {
    Polygon2 footprint;
    double clearance = 0.0;
};

struct FeasibleRegion {
    int target_id = 0;
    Polygon2 polygon;
    int sample_count = 0;
    bool multiple_components = false;
};

struct ReachBand {
    double d_min = 0.0;
    double d_max = 0.0;
};

// Horizontal distance band from which the arm reaches the target height.
// nullopt when the target is out of reach (|dz| > l1+l2 or the band is empty).
std::optional<ReachBand> reach_band(const TargetPose& target, const ArmModel& arm);

// Min over obstacles of (signed distance to footprint) - clearance;
// +infinity with no obstacles. Negative inside an inflated footprint.
double sdf_clearance(const Point2& p, const std::vector<Obstacle>& obstacles);

// Seeded rejection sampling of base positions in the reach annulus with
// positive obstacle clearance. Deterministic given (target, arm, obstacles,
// n_samples, seed); the per-target stream is derived from (seed, target.id).
// Throws Unreachable when the band is empty, EmptyRegion when the retry
// budget (20 * n_samples attempts) yields no accepted sample.
std::vector<Point2> sample_feasible_bases(const TargetPose& target, const ArmModel& arm,
                                          const std::vector<Obstacle>& obstacles, int n_samples,
                                          std::uint64_t seed);

// Concave hull of the accepted samples.
FeasibleRegion build_feasible_region(const TargetPose& target, const std::vector<Point2>& samples,
                                     double alpha);

}  // namespace stanceplan
