#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "stanceplan/errors.hpp"
#include "stanceplan/figures.hpp"
#include "stanceplan/pipeline.hpp"

namespace fs = std::filesystem;
using namespace stanceplan;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitBudget = 4;

std::string default_out_dir() {
    if (const char* env = std::getenv("STANCEPLAN_OUT_DIR")) return env;
    return ".";
}

void write_text(const fs::path& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw IoError("write failed: " + path.string());
}

Scenario load_with_overrides(const std::string& path, long long seed, double time_budget) {
    Scenario sc = load_scenario(path);
    if (seed >= 0) sc.seed = static_cast<std::uint64_t>(seed);
    if (time_budget > 0) sc.time_budget = time_budget;
    return sc;
}

int classify(const PlannerError& e) {
    if (const auto* p = dynamic_cast<const PipelineError*>(&e)) return p->exit_hint();
    if (dynamic_cast<const Infeasible*>(&e) || dynamic_cast<const UncoverableTarget*>(&e) ||
        dynamic_cast<const Unreachable*>(&e) || dynamic_cast<const EmptyRegion*>(&e) ||
        dynamic_cast<const NonConvergence*>(&e)) {
        return kExitInfeasible;
    }
    if (dynamic_cast<const TimeBudgetExceeded*>(&e)) return kExitBudget;
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Inspection stance planning: feasible regions, tolerance circles, "
                 "exact stance-sequence optimization, and kinematic execution"};
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();
    long long seed_override = -1;
    double time_budget = -1.0;
    app.add_option("-o,--out", out_dir, "Output directory (default $STANCEPLAN_OUT_DIR or .)")
        ->capture_default_str();
    app.add_option("-s,--seed", seed_override, "Override the scenario seed");
    app.add_option("-t,--time-budget", time_budget, "Override the MIP time budget (seconds)");

    // plan
    auto* plan_cmd = app.add_subcommand("plan", "Run the planning pipeline and write the plan");
    std::string plan_scenario;
    bool emit_lp = false;
    plan_cmd->add_option("scenario", plan_scenario, "Scenario JSON file")->required();
    plan_cmd->add_flag("--lp", emit_lp, "Also export the sequence model in LP text format");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Plan and simulate; write the trace");
    std::string sim_scenario;
    bool no_single_step = false;
    sim_cmd->add_option("scenario", sim_scenario, "Scenario JSON file")->required();
    sim_cmd->add_flag("--no-single-step", no_single_step,
                      "Disable the single-step terminal correction");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Scaling benchmark over random scenarios");
    std::vector<int> sizes{10, 20, 30, 40, 50};
    int bench_seeds = 2;
    bench_cmd->add_option("--sizes", sizes, "Target counts to benchmark")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--runs", bench_seeds, "Seeded runs per size")->capture_default_str();

    // gen
    auto* gen_cmd = app.add_subcommand("gen", "Generate a scenario file");
    std::string preset;
    int random_targets = 0;
    std::string gen_output = "scenario.json";
    gen_cmd->add_option("--preset", preset, "Named preset (inspection14)");
    gen_cmd->add_option("--random", random_targets, "Random scenario with N targets");
    gen_cmd->add_option("--file", gen_output, "Output file name")->capture_default_str();

    // figures
    auto* fig_cmd = app.add_subcommand("figures", "Run the pipeline and emit figures");
    std::string fig_scenario;
    fig_cmd->add_option("scenario", fig_scenario, "Scenario JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        fs::create_directories(out_dir);
        const fs::path out(out_dir);

        if (*plan_cmd) {
            const Scenario sc = load_with_overrides(plan_scenario, seed_override, time_budget);
            const PipelineOutput run = run_pipeline(sc);
            write_text(out / "plan.txt", plan_to_text(run.plan));
            write_text(out / "naive.txt", plan_to_text(run.naive));
            write_text(out / "report.txt", report_to_text(run.report));
            if (emit_lp) {
                PlanProblem problem;
                problem.start = sc.start;
                problem.end = sc.end;
                problem.candidates = run.candidates;
                for (const TargetPose& t : sc.targets) problem.targets.push_back(t.id);
                problem.alpha = sc.alpha;
                problem.walk_speed = sc.walk_speed;
                problem.lambda = sc.lambda;
                write_text(out / "model.lp", write_lp(build_mip(problem)));
            }
            std::cout << report_to_text(run.report);
        } else if (*sim_cmd) {
            Scenario sc = load_with_overrides(sim_scenario, seed_override, time_budget);
            PipelineOutput run = run_pipeline(sc);
            if (no_single_step) {
                run.trace = simulate(run.plan, sc.gait, sc.seed, false);
            }
            write_text(out / "trace.txt", trace_to_text(run.trace));
            write_text(out / "report.txt", report_to_text(run.report));
            std::cout << "total_time " << run.trace.total_time << "\n"
                      << "arrivals " << run.trace.stance_arrivals.size() << "\n";
        } else if (*bench_cmd) {
            const std::uint64_t base = seed_override >= 0 ? seed_override : 1;
            const auto rows = bench_scaling(sizes, bench_seeds, base);
            const std::string table = bench_to_text(rows);
            write_text(out / "bench.txt", table);
            std::cout << table;
        } else if (*gen_cmd) {
            Scenario sc;
            if (!preset.empty()) {
                if (preset != "inspection14")
                    throw ValidationError("unknown preset: " + preset);
                sc = make_inspection14();
            } else if (random_targets > 0) {
                sc = make_random_scenario(seed_override >= 0 ? seed_override : 1, random_targets);
            } else {
                throw ValidationError("gen: need --preset or --random N");
            }
            save_scenario(sc, (out / gen_output).string());
            std::cout << (out / gen_output).string() << "\n";
        } else if (*fig_cmd) {
            const Scenario sc = load_with_overrides(fig_scenario, seed_override, time_budget);
            const PipelineOutput run = run_pipeline(sc);
            for (const std::string& f : emit_figures(run, out.string())) {
                std::cout << f << "\n";
            }
        }
    } catch (const PlannerError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
