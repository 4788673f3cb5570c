#include "stanceplan/stance_planner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <sstream>

#include "stanceplan/errors.hpp"

namespace stanceplan {

namespace {

using Clock = std::chrono::steady_clock;

constexpr double kObjTieTol = 1e-9;
constexpr int kMaxTargets = 64;  // coverage masks are uint64_t

double path_travel(const MipModel& model, const std::vector<int>& order) {
    double travel = 0.0;
    int prev = 0;
    for (int idx : order) {
        travel += model.dist[prev][idx];
        prev = idx;
    }
    travel += model.dist[prev][model.m + 1];
    return travel;
}

// Single shared objective evaluation (stop + travel terms with the overlap
// bonus): alpha * (stops incl. terminals) + travel / v - lambda * |O ∩ sel|.
// Both the solver and the brute-force oracle report through this function so
// identical solutions produce bit-identical objectives.
double canonical_objective(const MipModel& model, const std::vector<int>& order) {
    const double travel = path_travel(model, order);
    int overlaps = 0;
    for (int idx : order) overlaps += model.overlap[idx - 1] ? 1 : 0;
    return model.alpha * static_cast<double>(order.size() + 2) + model.inv_v * travel -
           model.lambda * overlaps;
}

// z-vector lexicographic comparison over candidate nodes 1..m.
bool z_lex_less(const std::vector<int>& sel_a, const std::vector<int>& sel_b, int m) {
    std::size_t ia = 0, ib = 0;
    for (int i = 1; i <= m; ++i) {
        const bool a = ia < sel_a.size() && sel_a[ia] == i;
        const bool b = ib < sel_b.size() && sel_b[ib] == i;
        if (a != b) return !a;  // 0 before 1
        if (a) ++ia;
        if (b) ++ib;
    }
    return false;
}

struct PathSolution {
    double travel = 0.0;
    std::vector<int> order;  // node indices 1..m
    bool proven = true;
    double travel_lower_bound = 0.0;
};

std::vector<int> nearest_neighbor_order(const MipModel& model, std::vector<int> sel) {
    std::vector<int> order;
    order.reserve(sel.size());
    int at = 0;
    while (!sel.empty()) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < sel.size(); ++i) {
            if (model.dist[at][sel[i]] < model.dist[at][sel[best]]) best = i;
        }
        at = sel[best];
        order.push_back(at);
        sel.erase(sel.begin() + best);
    }
    return order;
}

void two_opt(const MipModel& model, std::vector<int>& order) {
    const int n = static_cast<int>(order.size());
    if (n < 3) return;
    auto node = [&](int i) {
        if (i < 0) return 0;
        if (i >= n) return model.m + 1;
        return order[i];
    };
    bool improved = true;
    int rounds = 0;
    while (improved && rounds++ < 50) {
        improved = false;
        for (int i = 0; i < n - 1; ++i) {
            for (int j = i + 1; j < n; ++j) {
                const double before = model.dist[node(i - 1)][node(i)] + model.dist[node(j)][node(j + 1)];
                const double after = model.dist[node(i - 1)][node(j)] + model.dist[node(i)][node(j + 1)];
                if (after < before - 1e-12) {
                    std::reverse(order.begin() + i, order.begin() + j + 1);
                    improved = true;
                }
            }
        }
    }
}

PathSolution held_karp(const MipModel& model, const std::vector<int>& sel) {
    const int k = static_cast<int>(sel.size());
    const int end = model.m + 1;
    const std::size_t full = std::size_t{1} << k;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dp(full * k, inf);
    std::vector<int> parent(full * k, -1);
    for (int j = 0; j < k; ++j) dp[(std::size_t{1} << j) * k + j] = model.dist[0][sel[j]];
    for (std::size_t mask = 1; mask < full; ++mask) {
        for (int j = 0; j < k; ++j) {
            if (!(mask >> j & 1)) continue;
            const double cur = dp[mask * k + j];
            if (cur == inf) continue;
            for (int t = 0; t < k; ++t) {
                if (mask >> t & 1) continue;
                const std::size_t nmask = mask | (std::size_t{1} << t);
                const double cand = cur + model.dist[sel[j]][sel[t]];
                if (cand < dp[nmask * k + t]) {
                    dp[nmask * k + t] = cand;
                    parent[nmask * k + t] = j;
                }
            }
        }
    }
    PathSolution sol;
    double best = inf;
    int best_j = 0;
    for (int j = 0; j < k; ++j) {
        const double total = dp[(full - 1) * k + j] + model.dist[sel[j]][end];
        if (total < best) {
            best = total;
            best_j = j;
        }
    }
    std::vector<int> rev;
    std::size_t mask = full - 1;
    int j = best_j;
    while (j >= 0) {
        rev.push_back(sel[j]);
        const int pj = parent[mask * k + j];
        mask &= ~(std::size_t{1} << j);
        j = pj;
    }
    std::reverse(rev.begin(), rev.end());
    sol.order = std::move(rev);
    sol.travel = best;
    sol.travel_lower_bound = best;
    sol.proven = true;
    return sol;
}

// Exact path DFS for larger selected sets; admissible bound: every remaining
// node is entered once by a distinct edge of length >= its nearest neighbor
// within the node set.
struct PathDfs {
    const MipModel& model;
    std::vector<int> sel;
    std::vector<double> nearest_in;   // per sel position
    std::vector<int> order, best_order;
    std::vector<char> used;
    double best;
    Clock::time_point deadline;
    bool timed_out = false;
    long ticks = 0;

    PathDfs(const MipModel& m, std::vector<int> s, double incumbent, Clock::time_point dl)
        : model(m), sel(std::move(s)), best(incumbent), deadline(dl) {
        const int k = static_cast<int>(sel.size());
        used.assign(k, 0);
        nearest_in.assign(k, std::numeric_limits<double>::infinity());
        for (int i = 0; i < k; ++i) {
            nearest_in[i] = std::min(nearest_in[i], model.dist[0][sel[i]]);
            for (int j = 0; j < k; ++j) {
                if (j != i) nearest_in[i] = std::min(nearest_in[i], model.dist[sel[i]][sel[j]]);
            }
        }
    }

    double remaining_bound() const {
        double acc = 0.0;
        for (std::size_t i = 0; i < sel.size(); ++i) {
            if (!used[i]) acc += nearest_in[i];
        }
        return acc;
    }

    void run(int last, double len, std::size_t depth) {
        if ((++ticks & 1023) == 0 && Clock::now() > deadline) {
            timed_out = true;
            return;
        }
        if (timed_out) return;
        if (depth == sel.size()) {
            const double total = len + model.dist[last][model.m + 1];
            if (total < best - 1e-12) {
                best = total;
                best_order = order;
            }
            return;
        }
        if (len + remaining_bound() >= best - 1e-12) return;
        // Nearest-first expansion.
        std::vector<int> idx;
        for (int i = 0; i < static_cast<int>(sel.size()); ++i) {
            if (!used[i]) idx.push_back(i);
        }
        std::sort(idx.begin(), idx.end(), [&](int a, int b) {
            return model.dist[last][sel[a]] < model.dist[last][sel[b]];
        });
        for (int i : idx) {
            used[i] = 1;
            order.push_back(sel[i]);
            run(sel[i], len + model.dist[last][sel[i]], depth + 1);
            order.pop_back();
            used[i] = 0;
            if (timed_out) return;
        }
    }
};

PathSolution solve_path(const MipModel& model, const std::vector<int>& sel,
                        Clock::time_point deadline) {
    PathSolution sol;
    if (sel.empty()) {
        sol.travel = model.dist[0][model.m + 1];
        sol.travel_lower_bound = sol.travel;
        return sol;
    }
    if (sel.size() <= 16) return held_karp(model, sel);

    std::vector<int> heuristic = nearest_neighbor_order(model, sel);
    two_opt(model, heuristic);
    const double heuristic_travel = path_travel(model, heuristic);

    PathDfs dfs(model, sel, heuristic_travel, deadline);
    const double degree_lb = dfs.remaining_bound();
    if (sel.size() <= 40) {
        dfs.run(0, 0.0, 0);
    } else {
        dfs.timed_out = true;  // out of exact range; report the incumbent with a bound
    }
    if (!dfs.timed_out) {
        sol.travel = dfs.best;
        sol.order = dfs.best_order.empty() ? heuristic : dfs.best_order;
        sol.travel_lower_bound = dfs.best;
        sol.proven = true;
    } else {
        sol.order = dfs.best_order.empty() ? heuristic : dfs.best_order;
        sol.travel = path_travel(model, sol.order);
        sol.travel_lower_bound = std::max(degree_lb, model.dist[0][model.m + 1]);
        sol.proven = false;
    }
    return sol;
}

void finalize_result(const MipModel& model, const std::vector<int>& order, PlanResult& out) {
    const int m = model.m;
    out.ordered_stances.clear();
    for (int idx : order) out.ordered_stances.push_back(model.candidates[idx - 1]);
    out.stop_count = static_cast<int>(order.size());
    out.travel_distance = path_travel(model, order);
    out.objective = canonical_objective(model, order);
    out.start = model.nodes[0];
    out.end = model.nodes[m + 1];

    out.z.assign(m + 2, 0);
    out.z[0] = out.z[m + 1] = 1;
    for (int idx : order) out.z[idx] = 1;

    out.edges.clear();
    int prev = 0;
    for (int idx : order) {
        out.edges.emplace_back(prev, idx);
        prev = idx;
    }
    out.edges.emplace_back(prev, m + 1);

    out.gamma.assign(m + 2, 0.0);
    for (std::size_t p = 0; p < order.size(); ++p) out.gamma[order[p]] = static_cast<double>(p + 1);
    out.gamma[m + 1] = static_cast<double>(m + 1);

    out.assignment.clear();
    for (std::size_t t = 0; t < model.target_ids.size(); ++t) {
        for (int idx : order) {
            if (model.cover[t][idx - 1]) {
                out.assignment[model.target_ids[t]] = idx;
                break;
            }
        }
    }
    out.estimated_time = out.travel_distance * model.inv_v;
}

std::uint64_t coverage_mask(const MipModel& model, int candidate) {
    std::uint64_t mask = 0;
    for (std::size_t t = 0; t < model.target_ids.size(); ++t) {
        if (model.cover[t][candidate]) mask |= std::uint64_t{1} << t;
    }
    return mask;
}

}  // namespace

std::vector<StanceCandidate> enumerate_candidates(const std::vector<FeasibleRegion>& regions,
                                                  double r_min_tolerance) {
    if (regions.empty()) throw ValidationError("enumerate_candidates: no feasible regions");

    std::vector<std::pair<int, Polygon2>> inputs;
    inputs.reserve(regions.size());
    for (const FeasibleRegion& r : regions) inputs.emplace_back(r.target_id, r.polygon);

    std::vector<StanceCandidate> candidates;
    for (const OverlapRegion& cell : polygon_overlaps(inputs)) {
        CircleRegion circle;
        try {
            circle = largest_inscribed_circle(cell.polygon);
        } catch (const DegenerateInput&) {
            continue;  // sliver cell, no usable circle
        }
        if (circle.radius < r_min_tolerance) continue;
        StanceCandidate cand;
        cand.circle = circle;
        cand.covered_targets = cell.target_ids;
        cand.n_covered = static_cast<int>(cell.target_ids.size());
        cand.from_overlap = cand.n_covered >= 2;
        candidates.push_back(std::move(cand));
    }

    // Deterministic indexing: overlap candidates first, richer coverage first.
    std::sort(candidates.begin(), candidates.end(),
              [](const StanceCandidate& a, const StanceCandidate& b) {
                  if (a.from_overlap != b.from_overlap) return a.from_overlap;
                  if (a.n_covered != b.n_covered) return a.n_covered > b.n_covered;
                  return lex_less(a.circle.center, b.circle.center);
              });
    for (std::size_t i = 0; i < candidates.size(); ++i) candidates[i].index = static_cast<int>(i + 1);

    for (const FeasibleRegion& r : regions) {
        const bool covered = std::any_of(
            candidates.begin(), candidates.end(), [&](const StanceCandidate& c) {
                return std::find(c.covered_targets.begin(), c.covered_targets.end(),
                                 r.target_id) != c.covered_targets.end();
            });
        if (!covered)
            throw UncoverableTarget("target " + std::to_string(r.target_id) +
                                    " has no tolerance circle after filtering");
    }
    return candidates;
}

MipModel build_mip(const PlanProblem& problem) {
    MipModel model;
    model.m = static_cast<int>(problem.candidates.size());
    model.alpha = problem.alpha;
    model.inv_v = 1.0 / problem.walk_speed;
    model.lambda = problem.effective_lambda();
    model.candidates = problem.candidates;
    model.target_ids = problem.targets;
    std::sort(model.target_ids.begin(), model.target_ids.end());

    model.nodes.resize(model.m + 2);
    model.nodes[0] = problem.start;
    model.nodes[model.m + 1] = problem.end;
    for (const StanceCandidate& c : problem.candidates) model.nodes[c.index] = c.circle.center;

    const int n = model.m + 2;
    model.dist.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double d = distance(model.nodes[i], model.nodes[j]);
            model.dist[i][j] = model.dist[j][i] = d;
        }
    }

    model.cover.assign(model.target_ids.size(), std::vector<std::uint8_t>(model.m, 0));
    for (const StanceCandidate& c : problem.candidates) {
        for (int t : c.covered_targets) {
            const auto it = std::lower_bound(model.target_ids.begin(), model.target_ids.end(), t);
            if (it != model.target_ids.end() && *it == t) {
                model.cover[it - model.target_ids.begin()][c.index - 1] = 1;
            }
        }
    }

    model.overlap.resize(model.m);
    model.z_init.resize(model.m);
    for (const StanceCandidate& c : problem.candidates) {
        model.overlap[c.index - 1] = c.from_overlap ? 1 : 0;
        model.z_init[c.index - 1] = c.from_overlap ? 1 : 0;  // warm start: prefer overlap candidates
    }
    return model;
}

namespace {

// Branch-and-bound over candidate selection. Branch order follows the warm
// start (overlap candidates first, descending coverage); include branch
// explored first. Admissible bound combines a set-cover stop bound with a
// degree-sum travel bound.
struct MipSolver {
    const MipModel& model;
    Clock::time_point deadline;
    int m;
    int n_targets;
    std::uint64_t full_mask = 0;
    std::vector<std::uint64_t> cand_mask;
    std::vector<std::uint64_t> conflict;       // per target
    std::vector<std::uint64_t> union_suffix;   // per branch depth
    std::vector<int> branch_order;             // candidate node indices 1..m
    std::vector<double> nn1, nn2;              // static two smallest distances per node
    std::vector<double> node_weight;           // alpha - lambda*overlap per candidate

    std::vector<int> selected;
    bool have_incumbent = false;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<int> best_sel;
    std::vector<int> best_order;
    bool best_path_proven = true;
    double best_leaf_lb = 0.0;

    bool timed_out = false;
    double min_abandoned_lb = std::numeric_limits<double>::infinity();
    long ticks = 0;

    explicit MipSolver(const MipModel& mdl, Clock::time_point dl) : model(mdl), deadline(dl) {
        m = model.m;
        n_targets = static_cast<int>(model.target_ids.size());
        if (n_targets > kMaxTargets)
            throw TooLarge("solve_mip: more than 64 targets is unsupported");
        full_mask = n_targets == 64 ? ~std::uint64_t{0}
                                    : (std::uint64_t{1} << n_targets) - 1;
        cand_mask.resize(m);
        for (int i = 0; i < m; ++i) cand_mask[i] = coverage_mask(model, i);
        conflict.assign(n_targets, 0);
        for (int t = 0; t < n_targets; ++t) {
            for (int i = 0; i < m; ++i) {
                if (cand_mask[i] >> t & 1) conflict[t] |= cand_mask[i];
            }
        }
        branch_order.resize(m);
        std::iota(branch_order.begin(), branch_order.end(), 1);
        std::sort(branch_order.begin(), branch_order.end(), [&](int a, int b) {
            const StanceCandidate& ca = model.candidates[a - 1];
            const StanceCandidate& cb = model.candidates[b - 1];
            if (ca.from_overlap != cb.from_overlap) return ca.from_overlap;
            if (ca.n_covered != cb.n_covered) return ca.n_covered > cb.n_covered;
            return a < b;
        });
        union_suffix.assign(m + 1, 0);
        for (int d = m - 1; d >= 0; --d)
            union_suffix[d] = union_suffix[d + 1] | cand_mask[branch_order[d] - 1];

        const int n = m + 2;
        nn1.assign(n, std::numeric_limits<double>::infinity());
        nn2.assign(n, std::numeric_limits<double>::infinity());
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (i == j) continue;
                const double d = model.dist[i][j];
                if (d < nn1[i]) {
                    nn2[i] = nn1[i];
                    nn1[i] = d;
                } else if (d < nn2[i]) {
                    nn2[i] = d;
                }
            }
        }
        node_weight.resize(m);
        for (int i = 0; i < m; ++i)
            node_weight[i] = model.alpha - (model.overlap[i] ? model.lambda : 0.0);
    }

    // Greedy independent-target bound: any candidate covers at most one of
    // the chosen targets, so each needs its own stop.
    int stops_lower_bound(std::uint64_t uncovered) const {
        int count = 0;
        std::uint64_t blocked = 0;
        std::uint64_t rest = uncovered;
        while (rest) {
            const int t = std::countr_zero(rest);
            rest &= rest - 1;
            if (blocked >> t & 1) continue;
            ++count;
            blocked |= conflict[t];
        }
        return count;
    }

    double travel_lower_bound() const {
        double acc = nn1[0] + nn1[m + 1];
        for (int idx : selected) acc += nn1[idx] + nn2[idx];
        return std::max(acc / 2.0, model.dist[0][m + 1]);
    }

    double node_cost() const {
        double acc = 2.0 * model.alpha;
        for (int idx : selected) acc += node_weight[idx - 1];
        return acc;
    }

    double bound(std::uint64_t covered, std::size_t depth) const {
        const double min_extra = model.alpha - model.lambda;  // cheapest possible future stop
        double future = 0.0;
        if (min_extra >= 0.0) {
            future = stops_lower_bound(full_mask & ~covered) * min_extra;
        } else {
            // Negative net stop cost (lambda >= alpha): every undecided
            // candidate could lower the objective.
            future = static_cast<double>(branch_order.size() - depth) * min_extra;
        }
        return node_cost() + future + model.inv_v * travel_lower_bound();
    }

    // Admissible travel bound over the selected subset: the path enters each
    // of sel ∪ {end} once, by distinct edges no shorter than each node's
    // nearest neighbor within the subset (plus terminals).
    double subset_travel_lb() const {
        double acc = 0.0;
        auto nearest = [&](int node) {
            double best = model.dist[node][0];
            for (int s : selected) {
                if (s != node) best = std::min(best, model.dist[node][s]);
            }
            if (node != m + 1) best = std::min(best, model.dist[node][m + 1]);
            return best;
        };
        for (int s : selected) acc += nearest(s);
        acc += nearest(m + 1);
        return std::max(acc, model.dist[0][m + 1]);
    }

    void offer_leaf() {
        if (have_incumbent &&
            node_cost() + model.inv_v * subset_travel_lb() > best_obj + kObjTieTol) {
            return;  // cannot beat or tie the incumbent; skip the exact path solve
        }
        PathSolution path = solve_path(model, selected, deadline);
        std::vector<int> sel_sorted = selected;
        std::sort(sel_sorted.begin(), sel_sorted.end());
        const double obj = canonical_objective(model, path.order);
        bool better = false;
        if (!have_incumbent || obj < best_obj - kObjTieTol) {
            better = true;
        } else if (obj < best_obj + kObjTieTol) {
            std::vector<int> cur_sorted = best_sel;
            if (z_lex_less(sel_sorted, cur_sorted, m)) {
                better = true;
            } else if (sel_sorted == cur_sorted && path.order < best_order) {
                better = true;
            }
        }
        if (better) {
            have_incumbent = true;
            best_obj = obj;
            best_sel = sel_sorted;
            best_order = path.order;
            best_path_proven = path.proven;
            best_leaf_lb = node_cost() + model.inv_v * path.travel_lower_bound;
        }
        if (!path.proven) {
            min_abandoned_lb =
                std::min(min_abandoned_lb, node_cost() + model.inv_v * path.travel_lower_bound);
        }
    }

    void dfs(std::size_t depth, std::uint64_t covered) {
        if ((++ticks & 1023) == 0 && Clock::now() > deadline) timed_out = true;
        if (timed_out) {
            min_abandoned_lb = std::min(min_abandoned_lb, bound(covered, depth));
            return;
        }
        const bool superset_dominated = model.alpha - model.lambda > 0.0;
        if (covered == full_mask) {
            offer_leaf();
            // With alpha > lambda, supersets of a covering set cost strictly
            // more; otherwise keep branching.
            if (superset_dominated) return;
        }
        if (depth == branch_order.size()) return;
        if ((covered | union_suffix[depth]) != full_mask) return;
        if (have_incumbent && bound(covered, depth) > best_obj + kObjTieTol) return;

        const int idx = branch_order[depth];
        const std::uint64_t add = cand_mask[idx - 1] & ~covered;
        if (add || !superset_dominated) {
            selected.push_back(idx);
            dfs(depth + 1, covered | add);
            selected.pop_back();
        }
        dfs(depth + 1, covered);
    }
};

}  // namespace

PlanResult solve_mip(const MipModel& model, double time_budget_seconds) {
    const auto deadline =
        Clock::now() + std::chrono::duration_cast<Clock::duration>(
                           std::chrono::duration<double>(time_budget_seconds));
    MipSolver solver(model, deadline);

    // Feasibility: every target needs at least one covering candidate.
    if (solver.union_suffix.empty() ||
        (solver.union_suffix.front() != solver.full_mask && solver.full_mask != 0)) {
        throw Infeasible("solve_mip: some target is covered by no candidate");
    }

    solver.dfs(0, 0);

    if (!solver.have_incumbent) {
        if (solver.timed_out)
            throw TimeBudgetExceeded("solve_mip: no incumbent found within the time budget");
        throw Infeasible("solve_mip: no feasible selection exists");
    }

    PlanResult result;
    finalize_result(model, solver.best_order, result);
    result.proven_optimal = !solver.timed_out && solver.best_path_proven &&
                            solver.min_abandoned_lb >= result.objective - kObjTieTol;
    result.lower_bound = result.proven_optimal
                             ? result.objective
                             : std::min(result.objective, solver.min_abandoned_lb);
    return result;
}

PlanResult brute_force_plan(const PlanProblem& problem) {
    const MipModel model = build_mip(problem);
    const int m = model.m;
    if (m > 12) throw TooLarge("brute_force_plan: guarded to m <= 12 candidates");
    const int n_targets = static_cast<int>(model.target_ids.size());
    if (n_targets > kMaxTargets) throw TooLarge("brute_force_plan: more than 64 targets");
    const std::uint64_t full =
        n_targets == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n_targets) - 1;

    std::vector<std::uint64_t> masks(m);
    for (int i = 0; i < m; ++i) masks[i] = coverage_mask(model, i);

    bool found = false;
    double best_obj = std::numeric_limits<double>::infinity();
    std::vector<int> best_sel, best_order;

    for (std::uint32_t subset = 0; subset < (1u << m); ++subset) {
        std::uint64_t covered = 0;
        std::vector<int> sel;
        for (int i = 0; i < m; ++i) {
            if (subset >> i & 1) {
                covered |= masks[i];
                sel.push_back(i + 1);
            }
        }
        if (covered != full) continue;

        std::vector<int> order;
        double travel = std::numeric_limits<double>::infinity();
        if (sel.size() <= 8) {
            std::vector<int> perm = sel;
            do {
                const double t = path_travel(model, perm);
                if (t < travel) {
                    travel = t;
                    order = perm;
                }
            } while (std::next_permutation(perm.begin(), perm.end()));
        } else {
            PathSolution hk = held_karp(model, sel);
            travel = hk.travel;
            order = hk.order;
        }

        const double obj = canonical_objective(model, order);
        bool better = false;
        if (!found || obj < best_obj - kObjTieTol) {
            better = true;
        } else if (obj < best_obj + kObjTieTol) {
            if (z_lex_less(sel, best_sel, m)) {
                better = true;
            } else if (sel == best_sel && order < best_order) {
                better = true;
            }
        }
        if (better) {
            found = true;
            best_obj = obj;
            best_sel = sel;
            best_order = order;
        }
    }
    if (!found) throw Infeasible("brute_force_plan: no candidate subset covers all targets");

    PlanResult result;
    finalize_result(model, best_order, result);
    result.proven_optimal = true;
    result.lower_bound = result.objective;
    return result;
}

PlanResult naive_plan(const PlanProblem& problem, const std::vector<int>& target_order) {
    const MipModel model = build_mip(problem);
    PlanResult result;
    result.start = problem.start;
    result.end = problem.end;

    Point2 at = problem.start;
    std::vector<int> visit_nodes;
    for (int target : target_order) {
        const StanceCandidate* chosen = nullptr;
        // Prefer the singleton candidate dedicated to this target.
        for (const StanceCandidate& c : problem.candidates) {
            if (c.n_covered == 1 && c.covered_targets.front() == target) {
                chosen = &c;
                break;
            }
        }
        if (!chosen) {
            double best_d = std::numeric_limits<double>::infinity();
            for (const StanceCandidate& c : problem.candidates) {
                if (std::find(c.covered_targets.begin(), c.covered_targets.end(), target) ==
                    c.covered_targets.end())
                    continue;
                const double d = distance(at, c.circle.center);
                if (d < best_d - 1e-12 ||
                    (d < best_d + 1e-12 && chosen && lex_less(c.circle.center, chosen->circle.center))) {
                    best_d = d;
                    chosen = &c;
                }
            }
        }
        if (!chosen)
            throw Infeasible("naive_plan: target " + std::to_string(target) +
                             " covered by no candidate");
        result.ordered_stances.push_back(*chosen);
        result.assignment[target] = chosen->index;
        visit_nodes.push_back(chosen->index);
        at = chosen->circle.center;
    }

    double travel = 0.0;
    Point2 prev = problem.start;
    for (const StanceCandidate& s : result.ordered_stances) {
        travel += distance(prev, s.circle.center);
        prev = s.circle.center;
    }
    travel += distance(prev, problem.end);

    result.travel_distance = travel;
    result.stop_count = static_cast<int>(target_order.size());

    std::vector<int> distinct = visit_nodes;
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    int overlap_count = 0;
    for (int idx : distinct) overlap_count += model.overlap[idx - 1] ? 1 : 0;
    result.objective = model.alpha * static_cast<double>(result.stop_count + 2) +
                       model.inv_v * travel - model.lambda * overlap_count;

    result.z.assign(model.m + 2, 0);
    result.z[0] = result.z[model.m + 1] = 1;
    for (int idx : distinct) result.z[idx] = 1;
    result.estimated_time = travel * model.inv_v;
    result.proven_optimal = true;
    result.lower_bound = result.objective;
    return result;
}

std::string write_lp(const MipModel& model) {
    const int m = model.m;
    std::ostringstream lp;
    lp.precision(12);
    auto zvar = [](int i) { return "z" + std::to_string(i); };
    auto ovar = [](int i, int j) { return "o_" + std::to_string(i) + "_" + std::to_string(j); };
    auto gvar = [](int i) { return "g" + std::to_string(i); };

    lp << "\\ stance sequence selection model\n";
    lp << "Minimize\n obj:";
    for (int i = 0; i <= m + 1; ++i) {
        double coef = model.alpha;
        if (i >= 1 && i <= m && model.overlap[i - 1]) coef -= model.lambda;
        lp << " + " << coef << " " << zvar(i);
    }
    for (int i = 0; i <= m + 1; ++i) {
        for (int j = 0; j <= m + 1; ++j) {
            if (i == j) continue;
            lp << " + " << model.inv_v * model.dist[i][j] << " " << ovar(i, j);
        }
    }
    lp << "\nSubject To\n";
    lp << " term_start: " << zvar(0) << " = 1\n";
    lp << " term_end: " << zvar(m + 1) << " = 1\n";
    for (std::size_t t = 0; t < model.target_ids.size(); ++t) {
        lp << " cover_" << model.target_ids[t] << ":";
        for (int i = 1; i <= m; ++i) {
            if (model.cover[t][i - 1]) lp << " + " << zvar(i);
        }
        lp << " >= 1\n";
    }
    lp << " flow_start_out:";
    for (int j = 1; j <= m + 1; ++j) lp << " + " << ovar(0, j);
    lp << " = 1\n flow_start_in:";
    for (int j = 1; j <= m + 1; ++j) lp << " + " << ovar(j, 0);
    lp << " = 0\n flow_end_out:";
    for (int j = 0; j <= m; ++j) lp << " + " << ovar(m + 1, j);
    lp << " = 0\n flow_end_in:";
    for (int j = 0; j <= m; ++j) lp << " + " << ovar(j, m + 1);
    lp << " = 1\n";
    for (int i = 1; i <= m; ++i) {
        lp << " flow_out_" << i << ":";
        for (int j = 0; j <= m + 1; ++j) {
            if (j != i) lp << " + " << ovar(i, j);
        }
        lp << " - " << zvar(i) << " = 0\n";
        lp << " flow_in_" << i << ":";
        for (int j = 0; j <= m + 1; ++j) {
            if (j != i) lp << " + " << ovar(j, i);
        }
        lp << " - " << zvar(i) << " = 0\n";
    }
    lp << " order_start: " << gvar(0) << " = 0\n";
    lp << " order_end: " << gvar(m + 1) << " = " << m + 1 << "\n";
    for (int i = 1; i <= m; ++i) {
        lp << " order_lo_" << i << ": " << gvar(i) << " - " << zvar(i) << " >= 0\n";
        lp << " order_hi_" << i << ": " << gvar(i) << " - " << m << " " << zvar(i) << " <= 0\n";
    }
    for (int i = 0; i <= m + 1; ++i) {
        for (int j = 0; j <= m + 1; ++j) {
            if (i == j) continue;
            lp << " mtz_" << i << "_" << j << ": " << gvar(i) << " - " << gvar(j) << " + "
               << m + 2 << " " << ovar(i, j) << " <= " << m + 1 << "\n";
        }
    }
    lp << " total_flow:";
    for (int i = 0; i <= m + 1; ++i) {
        for (int j = 0; j <= m + 1; ++j) {
            if (i != j) lp << " + " << ovar(i, j);
        }
    }
    for (int i = 0; i <= m + 1; ++i) lp << " - " << zvar(i);
    lp << " = -1\n";
    lp << "Bounds\n";
    for (int i = 0; i <= m + 1; ++i) lp << " 0 <= " << gvar(i) << " <= " << m + 1 << "\n";
    lp << "Binary\n";
    for (int i = 0; i <= m + 1; ++i) lp << " " << zvar(i) << "\n";
    for (int i = 0; i <= m + 1; ++i) {
        for (int j = 0; j <= m + 1; ++j) {
            if (i != j) lp << " " << ovar(i, j) << "\n";
        }
    }
    lp << "End\n";
    return lp.str();
}

}  // namespace stanceplan
