#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "stanceplan/errors.hpp"
#include "stanceplan/figures.hpp"
#include "stanceplan/pipeline.hpp"

namespace py = pybind11;
using namespace stanceplan;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Stance planning pipeline: feasible regions, tolerance circles, exact "
              "stance-sequence optimization, kinematic execution";

    py::register_exception<PlannerError>(m, "PlannerError");

    py::class_<Point2>(m, "Point2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Point2{x, y}; }))
        .def_readwrite("x", &Point2::x)
        .def_readwrite("y", &Point2::y)
        .def("__repr__", [](const Point2& p) {
            return "Point2(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")";
        });

    py::class_<CircleRegion>(m, "CircleRegion")
        .def_readonly("center", &CircleRegion::center)
        .def_readonly("radius", &CircleRegion::radius);

    py::class_<StanceCandidate>(m, "StanceCandidate")
        .def_readonly("index", &StanceCandidate::index)
        .def_readonly("circle", &StanceCandidate::circle)
        .def_readonly("covered_targets", &StanceCandidate::covered_targets)
        .def_readonly("n_covered", &StanceCandidate::n_covered)
        .def_readonly("from_overlap", &StanceCandidate::from_overlap);

    py::class_<PlanResult>(m, "PlanResult")
        .def_readonly("ordered_stances", &PlanResult::ordered_stances)
        .def_readonly("assignment", &PlanResult::assignment)
        .def_readonly("objective", &PlanResult::objective)
        .def_readonly("travel_distance", &PlanResult::travel_distance)
        .def_readonly("stop_count", &PlanResult::stop_count)
        .def_readonly("estimated_time", &PlanResult::estimated_time)
        .def_readonly("z", &PlanResult::z)
        .def_readonly("proven_optimal", &PlanResult::proven_optimal)
        .def_readonly("lower_bound", &PlanResult::lower_bound);

    py::class_<StanceArrival>(m, "StanceArrival")
        .def_readonly("stance_index", &StanceArrival::stance_index)
        .def_readonly("t", &StanceArrival::t)
        .def_readonly("terminal_error", &StanceArrival::terminal_error);

    py::class_<SimTrace>(m, "SimTrace")
        .def_readonly("stance_arrivals", &SimTrace::stance_arrivals)
        .def_readonly("total_time", &SimTrace::total_time)
        .def_property_readonly(
            "n_samples", [](const SimTrace& t) { return t.samples.size(); });

    py::class_<GaitParams>(m, "GaitParams")
        .def(py::init<>())
        .def_readwrite("vx_max", &GaitParams::vx_max)
        .def_readwrite("vy_max", &GaitParams::vy_max)
        .def_readwrite("kp", &GaitParams::kp)
        .def_readwrite("ki", &GaitParams::ki)
        .def_readwrite("kd", &GaitParams::kd)
        .def_readwrite("dt", &GaitParams::dt)
        .def_readwrite("drift_sigma", &GaitParams::drift_sigma)
        .def_readwrite("switch_distance", &GaitParams::switch_distance)
        .def_readwrite("efficiency", &GaitParams::efficiency);

    py::class_<StageTimings>(m, "StageTimings")
        .def_readonly("sampling", &StageTimings::sampling)
        .def_readonly("hulls", &StageTimings::hulls)
        .def_readonly("overlaps_circles", &StageTimings::overlaps_circles)
        .def_readonly("mip", &StageTimings::mip)
        .def_readonly("simulation", &StageTimings::simulation);

    py::class_<RunReport>(m, "RunReport")
        .def_readonly("timings", &RunReport::timings)
        .def_readonly("n_targets", &RunReport::n_targets)
        .def_readonly("n_candidates", &RunReport::n_candidates)
        .def_readonly("stop_count", &RunReport::stop_count)
        .def_readonly("naive_stop_count", &RunReport::naive_stop_count)
        .def_readonly("objective", &RunReport::objective)
        .def_readonly("estimated_time", &RunReport::estimated_time)
        .def_readonly("naive_estimated_time", &RunReport::naive_estimated_time)
        .def_readonly("improvement_ratio", &RunReport::improvement_ratio)
        .def_readonly("proven_optimal", &RunReport::proven_optimal)
        .def_readonly("lower_bound", &RunReport::lower_bound);

    py::class_<PipelineOutput>(m, "PipelineOutput")
        .def_readonly("candidates", &PipelineOutput::candidates)
        .def_readonly("plan", &PipelineOutput::plan)
        .def_readonly("naive", &PipelineOutput::naive)
        .def_readonly("trace", &PipelineOutput::trace)
        .def_readonly("report", &PipelineOutput::report);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init<>())
        .def_readwrite("seed", &Scenario::seed)
        .def_readwrite("alpha", &Scenario::alpha)
        .def_readwrite("lambda_", &Scenario::lambda)
        .def_readwrite("walk_speed", &Scenario::walk_speed)
        .def_readwrite("r_min_tolerance", &Scenario::r_min_tolerance)
        .def_readwrite("n_samples", &Scenario::n_samples)
        .def_readwrite("alpha_hull", &Scenario::alpha_hull)
        .def_readwrite("time_budget", &Scenario::time_budget)
        .def_readwrite("t_stop", &Scenario::t_stop)
        .def_readwrite("t_scan", &Scenario::t_scan)
        .def_readwrite("gait", &Scenario::gait)
        .def("to_json", &scenario_to_json)
        .def_static("from_json", &scenario_from_json);

    m.def("make_inspection14", &make_inspection14);
    m.def("make_random_scenario", &make_random_scenario, py::arg("seed"), py::arg("n_targets"));
    m.def("load_scenario", &load_scenario, py::arg("path"));
    m.def("save_scenario", &save_scenario, py::arg("scenario"), py::arg("path"));

    m.def("run_pipeline", &run_pipeline, py::arg("scenario"),
          py::call_guard<py::gil_scoped_release>());
    m.def("plan_to_text", &plan_to_text);
    m.def("report_to_text", &report_to_text);
    m.def("trace_to_text", &trace_to_text);
    m.def("emit_figures", &emit_figures, py::arg("output"), py::arg("out_dir"));
    m.def("simulate", &simulate, py::arg("plan"), py::arg("params"), py::arg("seed"),
          py::arg("single_step_enabled"), py::call_guard<py::gil_scoped_release>());
    m.def("estimate_plan_time", &estimate_plan_time, py::arg("plan"), py::arg("params"),
          py::arg("t_stop"), py::arg("t_scan"));

    // Geometry helper: largest inscribed circle of a simple polygon given as
    // a list of (x, y) exterior vertices.
    m.def("largest_inscribed_circle",
          [](const std::vector<std::pair<double, double>>& exterior) {
              Polygon2 poly;
              for (const auto& [x, y] : exterior) poly.exterior.push_back({x, y});
              return largest_inscribed_circle(poly);
          },
          py::arg("exterior"));

    // Velocity law on a bare displacement (fresh PID memory).
    m.def("velocity_command",
          [](double dx, double dy, const GaitParams& params) {
              RobotState st;
              PidState pid;
              const Point2 v = velocity_command(st, {dx, dy}, params, pid);
              return std::make_pair(v.x, v.y);
          },
          py::arg("dx"), py::arg("dy"), py::arg("params"));
}
