#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "stanceplan/geometry.hpp"
#include "stanceplan/reachability.hpp"

namespace stanceplan {

// A tolerance circle extracted from one overlap cell or remainder, together
// with the targets a stance inside it can service.
struct StanceCandidate {
    int index = 0;  // 1..m node index in the sequence model
    CircleRegion circle;
    std::vector<int> covered_targets;  // sorted
    int n_covered = 0;
    bool from_overlap = false;
};

struct PlanProblem {
    Point2 start;
    Point2 end;
    std::vector<StanceCandidate> candidates;
    std::vector<int> targets;   // sorted unique target ids
    double alpha = 13.0;        // stop-cost weight
    double walk_speed = 0.4;    // v, m/s
    double lambda = -1.0;       // overlap bonus; <0 means default 0.1 * alpha

    double effective_lambda() const { return lambda < 0.0 ? 0.1 * alpha : lambda; }
};

// Explicit sequence model over nodes 0 (start), 1..m (candidates), m+1 (end):
// binary z_i selection, binary o_{i,j} edges, continuous MTZ order gamma_i,
// coverage matrix W and symmetric center-distance matrix d.
struct MipModel {
    int m = 0;
    std::vector<Point2> nodes;                     // m+2 node positions
    std::vector<std::vector<double>> dist;         // (m+2) x (m+2)
    std::vector<std::vector<std::uint8_t>> cover;  // targets x m (W)
    std::vector<int> target_ids;
    std::vector<std::uint8_t> overlap;  // per candidate, membership in O
    std::vector<std::uint8_t> z_init;   // warm-start incumbent seed
    double alpha = 0.0;
    double inv_v = 0.0;
    double lambda = 0.0;
    std::vector<StanceCandidate> candidates;
};

struct PlanResult {
    std::vector<StanceCandidate> ordered_stances;  // path order, terminals excluded
    std::map<int, int> assignment;                 // target id -> stance index (1..m)
    double objective = 0.0;
    double travel_distance = 0.0;
    int stop_count = 0;  // selected stances, terminals excluded
    double estimated_time = 0.0;

    // Solution-level variables for structural verification.
    std::vector<int> z;                         // size m+2
    std::vector<std::pair<int, int>> edges;     // selected o_{i,j}
    std::vector<double> gamma;                  // size m+2
    Point2 start;
    Point2 end;

    bool proven_optimal = true;
    double lower_bound = 0.0;
};

// One candidate per overlap cell / remainder of the region arrangement,
// carrying that cell's largest inscribed circle. Cells whose circle radius
// falls below r_min_tolerance are dropped. Throws UncoverableTarget when a
// target ends up with no candidate.
std::vector<StanceCandidate> enumerate_candidates(const std::vector<FeasibleRegion>& regions,
                                                  double r_min_tolerance);

MipModel build_mip(const PlanProblem& problem);

// Exact best-first branch-and-bound over the z variables with an admissible
// stop-count + travel lower bound; optimal path order per selected set.
// When the time budget expires, returns the incumbent with
// proven_optimal = false and a valid lower_bound. Throws Infeasible when
// coverage cannot be met, TimeBudgetExceeded when no incumbent exists at the
// deadline.
PlanResult solve_mip(const MipModel& model, double time_budget_seconds);

// Exhaustive oracle over candidate subsets x visiting orders. Guarded to
// m <= 12 (TooLarge beyond).
PlanResult brute_force_plan(const PlanProblem& problem);

// One stop per target in the given order, no stance sharing or global
// optimization.
PlanResult naive_plan(const PlanProblem& problem, const std::vector<int>& target_order);

// CPLEX-style LP text export of the model for external cross-checking.
std::string write_lp(const MipModel& model);

}  // namespace stanceplan
