"""Stance planning pipeline: feasible regions, tolerance circles, exact
stance-sequence optimization, and kinematic execution simulation."""

from ._core import (
    CircleRegion,
    GaitParams,
    PipelineOutput,
    PlanResult,
    PlannerError,
    Point2,
    RunReport,
    Scenario,
    SimTrace,
    StageTimings,
    StanceArrival,
    StanceCandidate,
    emit_figures,
    estimate_plan_time,
    largest_inscribed_circle,
    load_scenario,
    make_inspection14,
    make_random_scenario,
    plan_to_text,
    report_to_text,
    run_pipeline,
    save_scenario,
    simulate,
    trace_to_text,
    velocity_command,
)

__all__ = [
    "CircleRegion",
    "GaitParams",
    "PipelineOutput",
    "PlanResult",
    "PlannerError",
    "Point2",
    "RunReport",
    "Scenario",
    "SimTrace",
    "StageTimings",
    "StanceArrival",
    "StanceCandidate",
    "emit_figures",
    "estimate_plan_time",
    "largest_inscribed_circle",
    "load_scenario",
    "make_inspection14",
    "make_random_scenario",
    "plan_to_text",
    "report_to_text",
    "run_pipeline",
    "save_scenario",
    "simulate",
    "trace_to_text",
    "velocity_command",
]
