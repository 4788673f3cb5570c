#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "stanceplan/errors.hpp"
#include "stanceplan/execution_sim.hpp"

using namespace stanceplan;

namespace {

PlanResult straight_plan(double target_x, double radius = 0.05) {
    PlanResult plan;
    plan.start = {0, 0};
    plan.end = {target_x, 0};
    StanceCandidate s;
    s.index = 1;
    s.circle = {{target_x, 0}, radius};
    s.covered_targets = {1};
    s.n_covered = 1;
    plan.ordered_stances = {s};
    plan.assignment[1] = 1;
    plan.z = {1, 1, 1};
    plan.travel_distance = 2.0 * target_x;
    plan.stop_count = 1;
    return plan;
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

TEST_CASE("velocity_command: zero error gives exact zero and resets integral") {
    RobotState st;
    st.position = {1, 1};
    GaitParams p;
    PidState pid;
    pid.integral = {9, 9};
    const Point2 v = velocity_command(st, {1, 1}, p, pid);
    CHECK(v.x == 0.0);
    CHECK(v.y == 0.0);
    CHECK(pid.integral.x == 0.0);
    CHECK(pid.integral.y == 0.0);
}

TEST_CASE("velocity_command: limited-error substitution, d = (5,0)") {
    RobotState st;
    GaitParams p;
    p.kp = 1.0;
    p.ki = p.kd = 0.0;
    p.vx_max = 0.4;
    p.vy_max = 0.2;
    p.dt = 0.01;
    PidState pid;
    const Point2 v = velocity_command(st, {5, 0}, p, pid);
    CHECK(v.x == doctest::Approx(0.004).epsilon(1e-12));
    CHECK(v.y == 0.0);
}

TEST_CASE("velocity_command: clip saturation at high gain") {
    RobotState st;
    GaitParams p;
    p.kp = 200.0;
    p.ki = p.kd = 0.0;
    p.vx_max = 0.4;
    p.vy_max = 0.2;
    p.dt = 0.01;
    PidState pid;
    const Point2 v = velocity_command(st, {5, 0}, p, pid);
    CHECK(v.x == doctest::Approx(0.4));  // raw 0.8 clipped
    CHECK(v.y == 0.0);
}

TEST_CASE("velocity_command: componentwise clip bounds hold on random headings") {
    GaitParams p;
    p.kp = 500.0;
    for (int i = 0; i < 50; ++i) {
        RobotState st;
        const double a = i * 0.13;
        PidState pid;
        const Point2 v = velocity_command(st, {std::cos(a), std::sin(a)}, p, pid);
        CHECK(std::abs(v.x) <= p.vx_max + 1e-15);
        CHECK(std::abs(v.y) <= p.vy_max + 1e-15);
    }
}

TEST_CASE("velocity_command: noiseless contraction under pure P control") {
    GaitParams p;
    p.kp = 80.0;  // kp * dt < 1 guarantees no overshoot
    p.ki = p.kd = 0.0;
    RobotState st;
    st.position = {-1.3, 0.7};
    const Point2 goal{0.4, -0.2};
    PidState pid;
    double prev = distance(st.position, goal);
    for (int i = 0; i < 5000; ++i) {
        const Point2 v = velocity_command(st, goal, p, pid);
        st.position.x += v.x * p.dt;
        st.position.y += v.y * p.dt;
        const double d = distance(st.position, goal);
        CHECK(d <= prev + 1e-15);
        prev = d;
    }
    CHECK(prev < 1e-3);
}

TEST_CASE("plan_single_step: one step within max_step, terminal pose at target") {
    RobotState st;
    st.position = {0, 0};
    st.heading = 0.0;
    st.stance_foot = Foot::Left;
    GaitParams p;
    const FootstepPlan plan = plan_single_step(st, {0.10, 0}, 0.0, p);
    REQUIRE(plan.steps.size() == 1);
    CHECK(plan.steps[0].swing_foot == Foot::Right);
    CHECK(plan.steps[0].target.x == doctest::Approx(0.10));
    CHECK(plan.terminal_position.x == doctest::Approx(0.10));
    CHECK(plan.terminal_yaw == 0.0);
}

TEST_CASE("plan_single_step: 0.5 m split into two alternating steps") {
    RobotState st;
    GaitParams p;
    p.switch_distance = 0.6;  // admit the longer correction
    const FootstepPlan plan = plan_single_step(st, {0.5, 0}, 0.0, p);
    REQUIRE(plan.steps.size() == 2);
    CHECK(plan.steps[0].swing_foot != plan.steps[1].swing_foot);
    for (const FootstepStep& s : plan.steps) {
        CHECK(distance(s.start, s.target) <= p.max_step + 1e-12);
    }
    CHECK(plan.steps[1].target.x == doctest::Approx(0.5));
}

TEST_CASE("plan_single_step: identity gives a zero-length plan") {
    RobotState st;
    st.position = {2, 3};
    st.heading = 0.7;
    GaitParams p;
    const FootstepPlan plan = plan_single_step(st, {2, 3}, 0.7, p);
    CHECK(plan.steps.empty());
}

TEST_CASE("plan_single_step: beyond switch_distance raises OutOfRange") {
    RobotState st;
    GaitParams p;
    CHECK_THROWS_AS(plan_single_step(st, {1.0, 0}, 0.0, p), OutOfRange);
}

TEST_CASE("swing_trajectory: boundary and apex conditions") {
    const Point2 a{0.1, -0.2}, b{0.35, 0.1};
    const double apex = 0.08, T = 0.6;
    auto at = [&](double t) { return swing_trajectory(a, b, apex, T, t); };

    auto p0 = at(0.0);
    CHECK(p0[0] == doctest::Approx(a.x).epsilon(1e-12));
    CHECK(p0[1] == doctest::Approx(a.y).epsilon(1e-12));
    CHECK(p0[2] == doctest::Approx(0.0));
    auto p1 = at(T);
    CHECK(p1[0] == doctest::Approx(b.x).epsilon(1e-12));
    CHECK(p1[1] == doctest::Approx(b.y).epsilon(1e-12));
    CHECK(p1[2] == doctest::Approx(0.0));
    auto pm = at(T / 2);
    CHECK(pm[0] == doctest::Approx(0.5 * (a.x + b.x)).epsilon(1e-12));
    CHECK(pm[1] == doctest::Approx(0.5 * (a.y + b.y)).epsilon(1e-12));
    CHECK(pm[2] == doctest::Approx(apex).epsilon(1e-12));

    // Zero velocities at endpoints and apex, by central differences.
    const double h = 1e-6 * T;
    auto vel = [&](double t, int axis) { return (at(t + h)[axis] - at(t - h)[axis]) / (2 * h); };
    for (int axis = 0; axis < 3; ++axis) {
        CHECK(std::abs(vel(h, axis)) < 1e-4);       // near t=0 (one-sided shifted)
        CHECK(std::abs(vel(T - h, axis)) < 1e-4);
    }
    CHECK(std::abs(vel(T / 2, 2)) < 1e-6);
}

TEST_CASE("simulate: noiseless single-step run lands exactly on each stance") {
    const PlanResult plan = straight_plan(1.0);
    GaitParams p;
    p.drift_sigma = 0.0;
    const SimTrace trace = simulate(plan, p, 7, true);
    REQUIRE(trace.stance_arrivals.size() == 2);  // stance + end node
    CHECK(trace.stance_arrivals[0].stance_index == 1);
    CHECK(trace.stance_arrivals[0].terminal_error < 1e-6);
    CHECK(trace.total_time == trace.samples.back().first);
    // t strictly increasing
    for (std::size_t i = 1; i < trace.samples.size(); ++i) {
        CHECK(trace.samples[i].first > trace.samples[i - 1].first);
    }
}

TEST_CASE("simulate: straight 2 m leg is lower-bounded by distance over speed") {
    const PlanResult plan = straight_plan(2.0);
    GaitParams p;
    p.kp = 120.0;  // near-instant settle idealization
    const SimTrace trace = simulate(plan, p, 3, true);
    CHECK(trace.total_time >= 5.0);  // 2 m at vx_max 0.4
}

TEST_CASE("simulate: ablation - single-step correction shrinks the median terminal error") {
    const PlanResult plan = straight_plan(1.0);
    GaitParams p;
    p.drift_sigma = 0.02;
    std::vector<double> err_on, err_off;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const SimTrace on = simulate(plan, p, seed, true);
        const SimTrace off = simulate(plan, p, seed, false);
        err_on.push_back(on.stance_arrivals[0].terminal_error);
        err_off.push_back(off.stance_arrivals[0].terminal_error);
    }
    CHECK(median(err_on) < median(err_off));
    CHECK(median(err_on) < 0.05);
}

TEST_CASE("simulate: mode never reverts to velocity tracking within a stance approach") {
    const PlanResult plan = straight_plan(1.0);
    GaitParams p;
    p.drift_sigma = 0.01;
    const SimTrace trace = simulate(plan, p, 11, true);
    bool in_single = false;
    for (const auto& [t, st] : trace.samples) {
        if (st.mode == ControlMode::SingleStep) in_single = true;
        if (in_single && t <= trace.stance_arrivals[0].t) {
            CHECK(st.mode == ControlMode::SingleStep);
        }
        if (t > trace.stance_arrivals[0].t) break;  // next stance approach may reset
    }
    CHECK(in_single);
}

TEST_CASE("simulate: bit-identical traces for identical seeds, different for different") {
    const PlanResult plan = straight_plan(1.5);
    GaitParams p;
    p.drift_sigma = 0.02;
    const SimTrace a = simulate(plan, p, 21, true);
    const SimTrace b = simulate(plan, p, 21, true);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) {
        CHECK(a.samples[i].first == b.samples[i].first);
        CHECK(a.samples[i].second.position.x == b.samples[i].second.position.x);
        CHECK(a.samples[i].second.position.y == b.samples[i].second.position.y);
        CHECK(a.samples[i].second.heading == b.samples[i].second.heading);
    }
    const SimTrace c = simulate(plan, p, 22, true);
    CHECK(c.total_time != a.total_time);
}

TEST_CASE("simulate: unreachable stance raises NonConvergence") {
    PlanResult plan = straight_plan(1.0);
    GaitParams p;
    p.stance_timeout = 0.5;  // far too short for a 1 m leg
    CHECK_THROWS_AS(simulate(plan, p, 1, true), NonConvergence);
}

TEST_CASE("estimate_plan_time: 2 stances, 4 m, 3 targets at v_nominal 0.4") {
    PlanResult plan;
    plan.travel_distance = 4.0;
    plan.stop_count = 2;
    plan.assignment = {{1, 1}, {2, 1}, {3, 2}};
    GaitParams p;
    p.vx_max = 0.5;
    p.vy_max = 0.2;
    p.efficiency = 0.8;  // v_nominal = 0.4
    CHECK(estimate_plan_time(plan, p, 8.0, 5.0) == doctest::Approx(41.0));
}

TEST_CASE("estimate_plan_time: zero targets gives pure travel time") {
    PlanResult plan;
    plan.travel_distance = 3.2;
    plan.stop_count = 0;
    GaitParams p;
    p.vx_max = 0.4;
    p.vy_max = 0.2;
    p.efficiency = 1.0;
    CHECK(estimate_plan_time(plan, p, 8.0, 5.0) == doctest::Approx(8.0));
}

TEST_CASE("trace_to_text: one line per sample plus summary") {
    const PlanResult plan = straight_plan(0.5);
    GaitParams p;
    const SimTrace trace = simulate(plan, p, 1, true);
    const std::string text = trace_to_text(trace);
    std::size_t lines = std::count(text.begin(), text.end(), '\n');
    CHECK(lines == trace.samples.size() + 1 + trace.stance_arrivals.size());
    CHECK(text.find("# total_time") != std::string::npos);
    CHECK(text.find("velocity") != std::string::npos);
}
