#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "stanceplan/geometry.hpp"
#include "stanceplan/stance_planner.hpp"

namespace stanceplan {

enum class ControlMode { VelocityTracking, SingleStep };
enum class Foot { Left, Right };

struct RobotState {
    Point2 position;
    double heading = 0.0;
    ControlMode mode = ControlMode::VelocityTracking;
    Point2 left_foot;
    Point2 right_foot;
    Foot stance_foot = Foot::Left;
};

struct GaitParams {
    double vx_max = 0.4;  // m/s
    double vy_max = 0.2;
    double kp = 100.0;  // kp * dt = 1 tracks the limited error exactly
    double ki = 0.0;
    double kd = 0.0;
    double dt = 0.01;             // s
    double step_duration = 0.6;   // s per gait step
    double max_step = 0.3;        // m
    double apex_height = 0.08;    // m
    double switch_distance = 0.3; // m, VelocityTracking -> SingleStep
    double switch_angle = 0.2;    // rad
    double drift_sigma = 0.0;     // m per gait step
    double yaw_rate = 1.5;        // rad/s heading slew
    double correction_factor = 0.1;  // residual drift multiplier in SingleStep
    double stance_width = 0.2;       // lateral foot separation, m
    double efficiency = 0.8;         // v_nominal = efficiency * v_max_scalar
    double stance_timeout = 120.0;   // s per stance before NonConvergence

    // Scalar speed limit used by the error limiter of the velocity law;
    // the componentwise clip uses (vx_max, vy_max) directly.
    double v_max_scalar() const { return vx_max > vy_max ? vx_max : vy_max; }
};

struct PidState {
    Point2 integral{0.0, 0.0};
    Point2 prev_error{0.0, 0.0};
    bool has_prev = false;
};

struct FootstepStep {
    Foot swing_foot = Foot::Left;
    Point2 start;
    Point2 target;
    double duration = 0.0;
};

struct FootstepPlan {
    std::vector<FootstepStep> steps;  // alternating feet, each within max_step
    Point2 terminal_position;
    double terminal_yaw = 0.0;
};

struct StanceArrival {
    int stance_index = 0;  // 1..m node index, m+1 for the end node
    double t = 0.0;
    double terminal_error = 0.0;  // m
};

struct SimTrace {
    std::vector<std::pair<double, RobotState>> samples;  // strictly increasing t
    std::vector<StanceArrival> stance_arrivals;
    double total_time = 0.0;
};

// PID velocity law: e = (d/|d|) * min(|d|, v_max_scalar * dt); the raw PID
// output is clipped componentwise to (+-vx_max, +-vy_max). At d = 0 returns
// exactly (0,0) and resets the integral memory.
Point2 velocity_command(const RobotState& state, const Point2& target, const GaitParams& params,
                        PidState& pid);

// Terminal correction: footholds along the straight stride line to
// stance_target, n = ceil(distance / max_step) alternating swing steps each
// no longer than max_step; the terminal pose places both feet symmetrically
// about stance_target at desired_yaw. Throws OutOfRange when the distance
// exceeds switch_distance.
FootstepPlan plan_single_step(const RobotState& state, const Point2& stance_target,
                              double desired_yaw, const GaitParams& params);

// Swing-foot sample at time t in [0, duration]: x,y follow a zero-boundary-
// velocity cubic from start to target; z is a two-piece cubic arc peaking at
// apex_height at duration/2 with zero vertical velocity at ends and apex.
std::array<double, 3> swing_trajectory(const Point2& start, const Point2& target,
                                       double apex_height, double duration, double t);

// Kinematic execution of a plan: velocity tracking with per-gait-step
// Gaussian drift, switch to single-step correction inside the switch
// thresholds (when enabled), arrival when the body error drops within the
// stance's tolerance radius. Deterministic given the seed. Throws
// NonConvergence when a stance is not reached within stance_timeout.
SimTrace simulate(const PlanResult& plan, const GaitParams& params, std::uint64_t seed,
                  bool single_step_enabled);

// travel / (efficiency * v_max_scalar) + stop_count * t_stop + targets * t_scan.
double estimate_plan_time(const PlanResult& plan, const GaitParams& params, double t_stop,
                          double t_scan);

// Line-oriented export: "t x y heading mode" per sample plus a summary block.
std::string trace_to_text(const SimTrace& trace);

}  // namespace stanceplan
