#pragma once

#include <stdexcept>
#include <string>

namespace stanceplan {

// Base class for all planner-specific failures.
class PlannerError : public std::runtime_error {
public:
    explicit PlannerError(const std::string& what) : std::runtime_error(what) {}
};

#define STANCEPLAN_DEFINE_ERROR(Name)                                        \
    class Name : public PlannerError {                                       \
    public:                                                                  \
        explicit Name(const std::string& what) : PlannerError(what) {}       \
    }

STANCEPLAN_DEFINE_ERROR(DegenerateInput);
STANCEPLAN_DEFINE_ERROR(Unreachable);
STANCEPLAN_DEFINE_ERROR(EmptyRegion);
STANCEPLAN_DEFINE_ERROR(UncoverableTarget);
STANCEPLAN_DEFINE_ERROR(Infeasible);
STANCEPLAN_DEFINE_ERROR(TooLarge);
STANCEPLAN_DEFINE_ERROR(TimeBudgetExceeded);
STANCEPLAN_DEFINE_ERROR(OutOfRange);
STANCEPLAN_DEFINE_ERROR(NonConvergence);
STANCEPLAN_DEFINE_ERROR(ParseError);
STANCEPLAN_DEFINE_ERROR(ValidationError);
STANCEPLAN_DEFINE_ERROR(IoError);

#undef STANCEPLAN_DEFINE_ERROR

// Wraps a failure from one stage of the pipeline with the stage name.
// exit_hint carries the CLI exit-code category of the wrapped error
// (2 validation, 3 infeasible, 4 budget exhausted without incumbent).
class PipelineError : public PlannerError {
public:
    PipelineError(std::string stage, const std::string& what, int exit_hint = 2)
        : PlannerError("[" + stage + "] " + what),
          stage_(std::move(stage)),
          exit_hint_(exit_hint) {}
    const std::string& stage() const { return stage_; }
    int exit_hint() const { return exit_hint_; }

private:
    std::string stage_;
    int exit_hint_;
};

}  // namespace stanceplan
