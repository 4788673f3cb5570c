#include "stanceplan/execution_sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stanceplan/errors.hpp"
#include "stanceplan/rng.hpp"

namespace stanceplan {

namespace {

double wrap_angle(double a) {
    while (a > M_PI) a -= 2.0 * M_PI;
    while (a < -M_PI) a += 2.0 * M_PI;
    return a;
}

double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// Zero-boundary-velocity cubic time profile.
double smooth(double tau) { return tau * tau * (3.0 - 2.0 * tau); }

Point2 foot_offset(Foot foot, double yaw, double stance_width) {
    const double s = foot == Foot::Left ? 0.5 : -0.5;
    return {-std::sin(yaw) * s * stance_width, std::cos(yaw) * s * stance_width};
}

Foot other(Foot f) { return f == Foot::Left ? Foot::Right : Foot::Left; }

}  // namespace

Point2 velocity_command(const RobotState& state, const Point2& target, const GaitParams& params,
                        PidState& pid) {
    const double dx = target.x - state.position.x;
    const double dy = target.y - state.position.y;
    const double n = std::hypot(dx, dy);
    if (n == 0.0) {
        pid.integral = {0.0, 0.0};
        pid.has_prev = false;
        return {0.0, 0.0};
    }
    const double mag = std::min(n, params.v_max_scalar() * params.dt);
    const Point2 e{dx / n * mag, dy / n * mag};

    pid.integral.x += e.x * params.dt;
    pid.integral.y += e.y * params.dt;
    Point2 deriv{0.0, 0.0};
    if (pid.has_prev) {
        deriv = {(e.x - pid.prev_error.x) / params.dt, (e.y - pid.prev_error.y) / params.dt};
    }
    pid.prev_error = e;
    pid.has_prev = true;

    const double rx = params.kp * e.x + params.ki * pid.integral.x + params.kd * deriv.x;
    const double ry = params.kp * e.y + params.ki * pid.integral.y + params.kd * deriv.y;
    return {clip(rx, -params.vx_max, params.vx_max), clip(ry, -params.vy_max, params.vy_max)};
}

FootstepPlan plan_single_step(const RobotState& state, const Point2& stance_target,
                              double desired_yaw, const GaitParams& params) {
    const double dist = distance(state.position, stance_target);
    if (dist > params.switch_distance + 1e-9)
        throw OutOfRange("plan_single_step: body is " + std::to_string(dist) +
                         " m from the stance target, beyond switch_distance");

    FootstepPlan plan;
    plan.terminal_position = stance_target;
    plan.terminal_yaw = desired_yaw;
    const double yaw_err = std::abs(wrap_angle(desired_yaw - state.heading));
    if (dist < 1e-12 && yaw_err < 1e-12) return plan;  // already in place

    const int n = std::max(1, static_cast<int>(std::ceil(dist / params.max_step - 1e-12)));
    Foot swing = other(state.stance_foot);
    Point2 prev = state.position;
    for (int k = 1; k <= n; ++k) {
        const double f = static_cast<double>(k) / n;
        const Point2 waypoint{state.position.x + (stance_target.x - state.position.x) * f,
                              state.position.y + (stance_target.y - state.position.y) * f};
        plan.steps.push_back({swing, prev, waypoint, params.step_duration});
        prev = waypoint;
        swing = other(swing);
    }
    return plan;
}

std::array<double, 3> swing_trajectory(const Point2& start, const Point2& target,
                                       double apex_height, double duration, double t) {
    const double tau = duration > 0.0 ? clip(t / duration, 0.0, 1.0) : 1.0;
    const double s = smooth(tau);
    const double x = start.x + (target.x - start.x) * s;
    const double y = start.y + (target.y - start.y) * s;
    // Two cubic arcs meeting at the apex with zero vertical velocity.
    const double z = tau < 0.5 ? apex_height * smooth(2.0 * tau)
                               : apex_height * smooth(2.0 * (1.0 - tau));
    return {x, y, z};
}

SimTrace simulate(const PlanResult& plan, const GaitParams& params, std::uint64_t seed,
                  bool single_step_enabled) {
    SimTrace trace;
    Rng rng(mix_seed(seed, 0x73696d75ULL));

    // Visit list: each planned stance with its tolerance radius, then the end
    // node with a tight fixed radius.
    struct Goal {
        int index;
        Point2 center;
        double radius;
    };
    std::vector<Goal> goals;
    for (const StanceCandidate& s : plan.ordered_stances)
        goals.push_back({s.index, s.circle.center, s.circle.radius});
    const int end_index = static_cast<int>(plan.z.size()) - 1;
    goals.push_back({end_index, plan.end, std::max(0.02, params.drift_sigma)});

    RobotState st;
    st.position = plan.start;
    st.heading = goals.empty() ? 0.0
                               : std::atan2(goals.front().center.y - plan.start.y,
                                            goals.front().center.x - plan.start.x);
    st.left_foot = {st.position.x + foot_offset(Foot::Left, st.heading, params.stance_width).x,
                    st.position.y + foot_offset(Foot::Left, st.heading, params.stance_width).y};
    st.right_foot = {st.position.x + foot_offset(Foot::Right, st.heading, params.stance_width).x,
                     st.position.y + foot_offset(Foot::Right, st.heading, params.stance_width).y};

    double t = 0.0;
    trace.samples.emplace_back(t, st);
    auto record = [&]() { trace.samples.emplace_back(t, st); };
    auto place_feet = [&]() {
        const Point2 lo = foot_offset(Foot::Left, st.heading, params.stance_width);
        const Point2 ro = foot_offset(Foot::Right, st.heading, params.stance_width);
        st.left_foot = {st.position.x + lo.x, st.position.y + lo.y};
        st.right_foot = {st.position.x + ro.x, st.position.y + ro.y};
    };

    Point2 prev_node = plan.start;
    for (const Goal& goal : goals) {
        const double desired_yaw =
            std::atan2(goal.center.y - prev_node.y, goal.center.x - prev_node.x);
        PidState pid;
        st.mode = ControlMode::VelocityTracking;
        const double t_enter = t;
        double step_timer = 0.0;
        bool arrived = false;

        while (!arrived) {
            if (t - t_enter > params.stance_timeout)
                throw NonConvergence("stance " + std::to_string(goal.index) +
                                     " not reached within the per-stance timeout");
            const double dist = distance(st.position, goal.center);
            const double yaw_err = std::abs(wrap_angle(desired_yaw - st.heading));

            if (st.mode == ControlMode::VelocityTracking) {
                if (!single_step_enabled && dist <= goal.radius) {
                    trace.stance_arrivals.push_back({goal.index, t, dist});
                    arrived = true;
                    break;
                }
                if (single_step_enabled && dist <= params.switch_distance) {
                    if (yaw_err <= params.switch_angle) {
                        st.mode = ControlMode::SingleStep;  // no reversion for this stance
                        continue;
                    }
                    // Rotate in place until the yaw gate opens.
                    const double turn = clip(wrap_angle(desired_yaw - st.heading),
                                             -params.yaw_rate * params.dt,
                                             params.yaw_rate * params.dt);
                    st.heading = wrap_angle(st.heading + turn);
                    t += params.dt;
                    record();
                    continue;
                }
                const Point2 v = velocity_command(st, goal.center, params, pid);
                st.position.x += v.x * params.dt;
                st.position.y += v.y * params.dt;
                const double speed = std::hypot(v.x, v.y);
                if (speed > 1e-9) {
                    const double turn = clip(wrap_angle(std::atan2(v.y, v.x) - st.heading),
                                             -params.yaw_rate * params.dt,
                                             params.yaw_rate * params.dt);
                    st.heading = wrap_angle(st.heading + turn);
                }
                step_timer += params.dt;
                if (step_timer >= params.step_duration) {
                    step_timer = 0.0;
                    st.position.x += rng.gaussian() * params.drift_sigma;
                    st.position.y += rng.gaussian() * params.drift_sigma;
                    st.stance_foot = other(st.stance_foot);
                }
                place_feet();
                t += params.dt;
                record();
            } else {
                // SingleStep: execute a correction plan; residual drift is
                // attenuated by correction_factor per step.
                const FootstepPlan fsp = plan_single_step(st, goal.center, desired_yaw, params);
                for (const FootstepStep& step : fsp.steps) {
                    st.position = step.target;
                    st.position.x += rng.gaussian() * params.drift_sigma * params.correction_factor;
                    st.position.y += rng.gaussian() * params.drift_sigma * params.correction_factor;
                    if (step.swing_foot == Foot::Left) {
                        st.left_foot = step.target;
                        st.stance_foot = Foot::Right;
                    } else {
                        st.right_foot = step.target;
                        st.stance_foot = Foot::Left;
                    }
                    t += step.duration;
                    record();
                }
                if (fsp.steps.empty()) {
                    // Pure yaw alignment; snap heading within one step time.
                    st.heading = desired_yaw;
                    t += params.step_duration;
                    record();
                }
                st.heading = desired_yaw;
                const double err = distance(st.position, goal.center);
                if (err <= goal.radius) {
                    place_feet();
                    trace.stance_arrivals.push_back({goal.index, t, err});
                    arrived = true;
                }
                // else: replan another correction (stays in SingleStep)
            }
        }
        prev_node = goal.center;
    }
    trace.total_time = t;
    return trace;
}

double estimate_plan_time(const PlanResult& plan, const GaitParams& params, double t_stop,
                          double t_scan) {
    const double v_nominal = params.efficiency * params.v_max_scalar();
    return plan.travel_distance / v_nominal + plan.stop_count * t_stop +
           static_cast<double>(plan.assignment.size()) * t_scan;
}

std::string trace_to_text(const SimTrace& trace) {
    std::ostringstream out;
    out.precision(9);
    for (const auto& [t, st] : trace.samples) {
        out << t << ' ' << st.position.x << ' ' << st.position.y << ' ' << st.heading << ' '
            << (st.mode == ControlMode::VelocityTracking ? "velocity" : "single_step") << '\n';
    }
    out << "# total_time " << trace.total_time << '\n';
    for (const StanceArrival& a : trace.stance_arrivals) {
        out << "# arrival stance=" << a.stance_index << " t=" << a.t
            << " error=" << a.terminal_error << '\n';
    }
    return out.str();
}

}  // namespace stanceplan
