#include "stanceplan/reachability.hpp"

#include <cmath>
#include <limits>

#include "stanceplan/errors.hpp"
#include "stanceplan/rng.hpp"

namespace stanceplan {

std::optional<ReachBand> reach_band(const TargetPose& target, const ArmModel& arm) {
    const double dz = target.z - arm.shoulder_height;
    const double reach = arm.l1 + arm.l2;
    if (std::abs(dz) > reach) return std::nullopt;
    const double d_max = std::sqrt(std::max(0.0, reach * reach - dz * dz));
    const double inner = (arm.l1 - arm.l2) * (arm.l1 - arm.l2) - dz * dz;
    const double d_min = std::max(arm.d_floor, std::sqrt(std::max(0.0, inner)));
    if (d_max <= d_min) return std::nullopt;
    return ReachBand{d_min, d_max};
}

double sdf_clearance(const Point2& p, const std::vector<Obstacle>& obstacles) {
    double best = std::numeric_limits<double>::infinity();
    for (const Obstacle& obs : obstacles) {
        best = std::min(best, signed_distance(p, obs.footprint) - obs.clearance);
    }
    return best;
}

std::vector<Point2> sample_feasible_bases(const TargetPose& target, const ArmModel& arm,
                                          const std::vector<Obstacle>& obstacles, int n_samples,
                                          std::uint64_t seed) {
    if (n_samples <= 0) throw ValidationError("sample_feasible_bases: n_samples must be > 0");
    const auto band = reach_band(target, arm);
    if (!band) throw Unreachable("target " + std::to_string(target.id) + " outside arm reach");

    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(target.id)));
    const double r_min2 = band->d_min * band->d_min;
    const double r_max2 = band->d_max * band->d_max;
    const Point2 c = target.xy();

    std::vector<Point2> accepted;
    accepted.reserve(n_samples);
    const long budget = 20L * n_samples;
    for (long attempt = 0; attempt < budget && static_cast<int>(accepted.size()) < n_samples;
         ++attempt) {
        const double r = std::sqrt(r_min2 + rng.uniform() * (r_max2 - r_min2));
        const double theta = rng.uniform() * 2.0 * M_PI;
        const Point2 p{c.x + r * std::cos(theta), c.y + r * std::sin(theta)};
        if (sdf_clearance(p, obstacles) > 0.0) accepted.push_back(p);
    }
    if (accepted.empty())
        throw EmptyRegion("target " + std::to_string(target.id) +
                          ": no collision-free base sample within retry budget");
    return accepted;
}

FeasibleRegion build_feasible_region(const TargetPose& target, const std::vector<Point2>& samples,
                                     double alpha) {
    const HullResult hull = concave_hull(samples, alpha);
    FeasibleRegion region;
    region.target_id = target.id;
    region.sample_count = static_cast<int>(samples.size());
    region.multiple_components = hull.multiple_components;
    // Trim hull vertex count; overlap arithmetic downstream scales with it.
    region.polygon = simplify_polygon(hull.polygon, kTolGeo);
    return region;
}

}  // namespace stanceplan
