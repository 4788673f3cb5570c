#include "stanceplan/pipeline.hpp"

#include <chrono>
#include <numeric>
#include <sstream>

#include "stanceplan/errors.hpp"

namespace stanceplan {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
auto run_stage(const char* name, F&& fn, double& elapsed) {
    const auto t0 = Clock::now();
    try {
        auto result = fn();
        elapsed = seconds_since(t0);
        return result;
    } catch (const PlannerError& e) {
        elapsed = seconds_since(t0);
        int hint = 2;
        if (dynamic_cast<const Infeasible*>(&e) || dynamic_cast<const UncoverableTarget*>(&e) ||
            dynamic_cast<const Unreachable*>(&e) || dynamic_cast<const EmptyRegion*>(&e) ||
            dynamic_cast<const NonConvergence*>(&e)) {
            hint = 3;
        } else if (dynamic_cast<const TimeBudgetExceeded*>(&e)) {
            hint = 4;
        }
        throw PipelineError(name, e.what(), hint);
    }
}

}  // namespace

PipelineOutput run_pipeline(const Scenario& scenario) {
    validate_scenario(scenario);
    PipelineOutput out;
    RunReport& rep = out.report;
    rep.n_targets = static_cast<int>(scenario.targets.size());

    const auto samples = run_stage(
        "sampling",
        [&] {
            std::vector<std::vector<Point2>> all;
            for (const TargetPose& t : scenario.targets) {
                all.push_back(sample_feasible_bases(t, scenario.arm, scenario.obstacles,
                                                    scenario.n_samples, scenario.seed));
            }
            return all;
        },
        rep.timings.sampling);

    out.regions = run_stage(
        "hulls",
        [&] {
            std::vector<FeasibleRegion> regions;
            for (std::size_t i = 0; i < scenario.targets.size(); ++i) {
                regions.push_back(build_feasible_region(scenario.targets[i], samples[i],
                                                        scenario.alpha_hull));
            }
            return regions;
        },
        rep.timings.hulls);

    out.candidates = run_stage(
        "candidates",
        [&] { return enumerate_candidates(out.regions, scenario.r_min_tolerance); },
        rep.timings.overlaps_circles);
    rep.n_candidates = static_cast<int>(out.candidates.size());

    PlanProblem problem;
    problem.start = scenario.start;
    problem.end = scenario.end;
    problem.candidates = out.candidates;
    for (const TargetPose& t : scenario.targets) problem.targets.push_back(t.id);
    problem.alpha = scenario.alpha;
    problem.walk_speed = scenario.walk_speed;
    problem.lambda = scenario.lambda;

    std::tie(out.plan, out.naive) = run_stage(
        "mip",
        [&] {
            PlanResult plan = solve_mip(build_mip(problem), scenario.time_budget);
            PlanResult naive = naive_plan(problem, problem.targets);
            return std::make_pair(std::move(plan), std::move(naive));
        },
        rep.timings.mip);

    out.plan.estimated_time =
        estimate_plan_time(out.plan, scenario.gait, scenario.t_stop, scenario.t_scan);
    out.naive.estimated_time =
        estimate_plan_time(out.naive, scenario.gait, scenario.t_stop, scenario.t_scan);

    out.trace = run_stage(
        "simulation", [&] { return simulate(out.plan, scenario.gait, scenario.seed, true); },
        rep.timings.simulation);

    rep.stop_count = out.plan.stop_count;
    rep.naive_stop_count = out.naive.stop_count;
    rep.objective = out.plan.objective;
    rep.travel_distance = out.plan.travel_distance;
    rep.estimated_time = out.plan.estimated_time;
    rep.naive_estimated_time = out.naive.estimated_time;
    rep.improvement_ratio =
        rep.naive_estimated_time > 0.0 ? 1.0 - rep.estimated_time / rep.naive_estimated_time : 0.0;
    rep.proven_optimal = out.plan.proven_optimal;
    rep.lower_bound = out.plan.lower_bound;
    return out;
}

std::vector<BenchRow> bench_scaling(const std::vector<int>& n_targets_list, int seeds,
                                    std::uint64_t base_seed) {
    if (n_targets_list.empty()) throw ValidationError("n_targets_list: must be nonempty");
    for (int n : n_targets_list) {
        if (n <= 0) throw ValidationError("n_targets_list: sizes must be > 0");
    }
    if (seeds <= 0) throw ValidationError("seeds: must be > 0");

    std::vector<BenchRow> rows;
    for (int n : n_targets_list) {
        BenchRow row;
        row.n_targets = n;
        row.runs = seeds;
        for (int k = 0; k < seeds; ++k) {
            const Scenario sc = make_random_scenario(base_seed + k, n);
            const auto t0 = Clock::now();
            const PipelineOutput out = run_pipeline(sc);
            row.max_run_seconds = std::max(row.max_run_seconds, seconds_since(t0));
            row.mean.sampling += out.report.timings.sampling;
            row.mean.hulls += out.report.timings.hulls;
            row.mean.overlaps_circles += out.report.timings.overlaps_circles;
            row.mean.mip += out.report.timings.mip;
            row.mean.simulation += out.report.timings.simulation;
            row.mean_candidates += out.report.n_candidates;
            row.mean_stop_count += out.report.stop_count;
            // A valid incumbent always carries lower_bound <= objective.
            row.all_bounded = row.all_bounded &&
                              out.plan.lower_bound <= out.plan.objective + 1e-9;
        }
        const double inv = 1.0 / seeds;
        row.mean.sampling *= inv;
        row.mean.hulls *= inv;
        row.mean.overlaps_circles *= inv;
        row.mean.mip *= inv;
        row.mean.simulation *= inv;
        row.mean_candidates *= inv;
        row.mean_stop_count *= inv;
        rows.push_back(row);
    }
    return rows;
}

std::string plan_to_text(const PlanResult& plan) {
    std::ostringstream out;
    out.precision(9);
    out << "objective " << plan.objective << "\n";
    out << "travel_distance " << plan.travel_distance << "\n";
    out << "stop_count " << plan.stop_count << "\n";
    out << "estimated_time " << plan.estimated_time << "\n";
    out << "proven_optimal " << (plan.proven_optimal ? 1 : 0) << "\n";
    out << "lower_bound " << plan.lower_bound << "\n";
    out << "start " << plan.start.x << ' ' << plan.start.y << "\n";
    out << "end " << plan.end.x << ' ' << plan.end.y << "\n";
    for (const StanceCandidate& s : plan.ordered_stances) {
        out << "stance " << s.index << ' ' << s.circle.center.x << ' ' << s.circle.center.y << ' '
            << s.circle.radius << " covers";
        for (int t : s.covered_targets) out << ' ' << t;
        out << "\n";
    }
    for (const auto& [target, stance] : plan.assignment) {
        out << "assign " << target << ' ' << stance << "\n";
    }
    return out.str();
}

std::string report_to_text(const RunReport& rep) {
    std::ostringstream out;
    out.precision(9);
    out << "n_targets " << rep.n_targets << "\n";
    out << "n_candidates " << rep.n_candidates << "\n";
    out << "stop_count " << rep.stop_count << "\n";
    out << "naive_stop_count " << rep.naive_stop_count << "\n";
    out << "objective " << rep.objective << "\n";
    out << "travel_distance " << rep.travel_distance << "\n";
    out << "estimated_time " << rep.estimated_time << "\n";
    out << "naive_estimated_time " << rep.naive_estimated_time << "\n";
    out << "improvement_ratio " << rep.improvement_ratio << "\n";
    out << "proven_optimal " << (rep.proven_optimal ? 1 : 0) << "\n";
    out << "lower_bound " << rep.lower_bound << "\n";
    out << "time_sampling " << rep.timings.sampling << "\n";
    out << "time_hulls " << rep.timings.hulls << "\n";
    out << "time_overlaps_circles " << rep.timings.overlaps_circles << "\n";
    out << "time_mip " << rep.timings.mip << "\n";
    out << "time_simulation " << rep.timings.simulation << "\n";
    return out.str();
}

std::string bench_to_text(const std::vector<BenchRow>& rows) {
    std::ostringstream out;
    out.precision(6);
    out << "# n_targets runs sampling hulls overlaps_circles mip simulation "
           "mean_candidates mean_stops max_run_s all_bounded\n";
    for (const BenchRow& r : rows) {
        out << r.n_targets << ' ' << r.runs << ' ' << r.mean.sampling << ' ' << r.mean.hulls << ' '
            << r.mean.overlaps_circles << ' ' << r.mean.mip << ' ' << r.mean.simulation << ' '
            << r.mean_candidates << ' ' << r.mean_stop_count << ' ' << r.max_run_seconds << ' '
            << (r.all_bounded ? 1 : 0) << "\n";
    }
    return out.str();
}

}  // namespace stanceplan
