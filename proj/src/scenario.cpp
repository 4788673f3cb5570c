#include "stanceplan/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "stanceplan/errors.hpp"
#include "stanceplan/rng.hpp"

namespace stanceplan {

namespace {

using nlohmann::json;

json point_to_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from_json(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(field + ": expected [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

Ring ring_from_json(const json& j, const std::string& field) {
    if (!j.is_array()) throw ValidationError(field + ": expected an array of points");
    Ring ring;
    for (std::size_t i = 0; i < j.size(); ++i)
        ring.push_back(point_from_json(j[i], field + "[" + std::to_string(i) + "]"));
    return ring;
}

json ring_to_json(const Ring& ring) {
    json out = json::array();
    for (const Point2& p : ring) out.push_back(point_to_json(p));
    return out;
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ValidationError(std::string(key) + ": " + e.what());
    }
}

}  // namespace

void validate_scenario(const Scenario& s) {
    if (s.targets.empty()) throw ValidationError("targets: at least one target required");
    std::set<int> ids;
    for (const TargetPose& t : s.targets) {
        if (!ids.insert(t.id).second)
            throw ValidationError("targets: duplicate target id " + std::to_string(t.id));
    }
    if (s.alpha < 0.0) throw ValidationError("alpha: must be >= 0");
    if (s.walk_speed <= 0.0) throw ValidationError("walk_speed: must be > 0");
    if (s.r_min_tolerance <= 0.0) throw ValidationError("r_min_tolerance: must be > 0");
    if (s.n_samples <= 0) throw ValidationError("n_samples: must be > 0");
    if (s.alpha_hull <= 0.0) throw ValidationError("alpha_hull: must be > 0");
    if (s.time_budget <= 0.0) throw ValidationError("time_budget: must be > 0");
    if (s.t_stop < 0.0 || s.t_scan < 0.0) throw ValidationError("t_stop/t_scan: must be >= 0");
    if (s.arm.l1 <= 0.0 || s.arm.l2 <= 0.0) throw ValidationError("arm: link lengths must be > 0");
    if (s.arm.d_floor < 0.0) throw ValidationError("arm.d_floor: must be >= 0");
    const GaitParams& g = s.gait;
    if (g.vx_max <= 0 || g.vy_max <= 0 || g.dt <= 0 || g.step_duration <= 0 || g.max_step <= 0 ||
        g.apex_height <= 0 || g.switch_distance <= 0 || g.switch_angle <= 0 || g.drift_sigma < 0)
        throw ValidationError("gait: parameters must be positive (drift_sigma >= 0)");
    if (g.switch_distance <= s.r_min_tolerance)
        throw ValidationError("gait.switch_distance: must exceed r_min_tolerance");
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        if (s.obstacles[i].footprint.exterior.size() < 3)
            throw ValidationError("obstacles[" + std::to_string(i) +
                                  "].footprint: needs at least 3 vertices");
        if (s.obstacles[i].clearance < 0.0)
            throw ValidationError("obstacles[" + std::to_string(i) + "].clearance: must be >= 0");
    }
}

std::string scenario_to_json(const Scenario& s) {
    json j;
    j["seed"] = s.seed;
    j["start"] = point_to_json(s.start);
    j["end"] = point_to_json(s.end);
    j["targets"] = json::array();
    for (const TargetPose& t : s.targets) {
        j["targets"].push_back(
            {{"id", t.id}, {"x", t.x}, {"y", t.y}, {"z", t.z}, {"approach_yaw", t.approach_yaw}});
    }
    j["arm"] = {{"shoulder_height", s.arm.shoulder_height},
                {"l1", s.arm.l1},
                {"l2", s.arm.l2},
                {"d_floor", s.arm.d_floor}};
    j["obstacles"] = json::array();
    for (const Obstacle& o : s.obstacles) {
        json jo;
        jo["exterior"] = ring_to_json(o.footprint.exterior);
        jo["holes"] = json::array();
        for (const Ring& h : o.footprint.holes) jo["holes"].push_back(ring_to_json(h));
        jo["clearance"] = o.clearance;
        j["obstacles"].push_back(jo);
    }
    j["planner"] = {{"alpha", s.alpha},
                    {"lambda", s.lambda},
                    {"walk_speed", s.walk_speed},
                    {"r_min_tolerance", s.r_min_tolerance},
                    {"n_samples", s.n_samples},
                    {"alpha_hull", s.alpha_hull},
                    {"time_budget", s.time_budget}};
    const GaitParams& g = s.gait;
    j["gait"] = {{"vx_max", g.vx_max},
                 {"vy_max", g.vy_max},
                 {"kp", g.kp},
                 {"ki", g.ki},
                 {"kd", g.kd},
                 {"dt", g.dt},
                 {"step_duration", g.step_duration},
                 {"max_step", g.max_step},
                 {"apex_height", g.apex_height},
                 {"switch_distance", g.switch_distance},
                 {"switch_angle", g.switch_angle},
                 {"drift_sigma", g.drift_sigma},
                 {"yaw_rate", g.yaw_rate},
                 {"correction_factor", g.correction_factor},
                 {"stance_width", g.stance_width},
                 {"efficiency", g.efficiency},
                 {"stance_timeout", g.stance_timeout}};
    j["timing"] = {{"t_stop", s.t_stop}, {"t_scan", s.t_scan}};
    return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("scenario: ") + e.what());
    }
    Scenario s;
    s.seed = get_or<std::uint64_t>(j, "seed", s.seed);
    if (j.contains("start")) s.start = point_from_json(j["start"], "start");
    if (j.contains("end")) s.end = point_from_json(j["end"], "end");
    if (j.contains("targets")) {
        if (!j["targets"].is_array()) throw ValidationError("targets: expected an array");
        for (const json& jt : j["targets"]) {
            TargetPose t;
            t.id = get_or<int>(jt, "id", 0);
            t.x = get_or<double>(jt, "x", 0.0);
            t.y = get_or<double>(jt, "y", 0.0);
            t.z = get_or<double>(jt, "z", 1.0);
            t.approach_yaw = get_or<double>(jt, "approach_yaw", 0.0);
            s.targets.push_back(t);
        }
    }
    if (j.contains("arm")) {
        const json& ja = j["arm"];
        s.arm.shoulder_height = get_or<double>(ja, "shoulder_height", s.arm.shoulder_height);
        s.arm.l1 = get_or<double>(ja, "l1", s.arm.l1);
        s.arm.l2 = get_or<double>(ja, "l2", s.arm.l2);
        s.arm.d_floor = get_or<double>(ja, "d_floor", s.arm.d_floor);
    }
    if (j.contains("obstacles")) {
        for (std::size_t i = 0; i < j["obstacles"].size(); ++i) {
            const json& jo = j["obstacles"][i];
            Obstacle o;
            const std::string field = "obstacles[" + std::to_string(i) + "]";
            if (!jo.contains("exterior")) throw ValidationError(field + ": missing exterior");
            o.footprint.exterior = ring_from_json(jo["exterior"], field + ".exterior");
            if (jo.contains("holes")) {
                for (const json& jh : jo["holes"])
                    o.footprint.holes.push_back(ring_from_json(jh, field + ".holes"));
            }
            o.clearance = get_or<double>(jo, "clearance", 0.0);
            s.obstacles.push_back(o);
        }
    }
    if (j.contains("planner")) {
        const json& jp = j["planner"];
        s.alpha = get_or<double>(jp, "alpha", s.alpha);
        s.lambda = get_or<double>(jp, "lambda", s.lambda);
        s.walk_speed = get_or<double>(jp, "walk_speed", s.walk_speed);
        s.r_min_tolerance = get_or<double>(jp, "r_min_tolerance", s.r_min_tolerance);
        s.n_samples = get_or<int>(jp, "n_samples", s.n_samples);
        s.alpha_hull = get_or<double>(jp, "alpha_hull", s.alpha_hull);
        s.time_budget = get_or<double>(jp, "time_budget", s.time_budget);
    }
    if (j.contains("gait")) {
        const json& jg = j["gait"];
        GaitParams& g = s.gait;
        g.vx_max = get_or<double>(jg, "vx_max", g.vx_max);
        g.vy_max = get_or<double>(jg, "vy_max", g.vy_max);
        g.kp = get_or<double>(jg, "kp", g.kp);
        g.ki = get_or<double>(jg, "ki", g.ki);
        g.kd = get_or<double>(jg, "kd", g.kd);
        g.dt = get_or<double>(jg, "dt", g.dt);
        g.step_duration = get_or<double>(jg, "step_duration", g.step_duration);
        g.max_step = get_or<double>(jg, "max_step", g.max_step);
        g.apex_height = get_or<double>(jg, "apex_height", g.apex_height);
        g.switch_distance = get_or<double>(jg, "switch_distance", g.switch_distance);
        g.switch_angle = get_or<double>(jg, "switch_angle", g.switch_angle);
        g.drift_sigma = get_or<double>(jg, "drift_sigma", g.drift_sigma);
        g.yaw_rate = get_or<double>(jg, "yaw_rate", g.yaw_rate);
        g.correction_factor = get_or<double>(jg, "correction_factor", g.correction_factor);
        g.stance_width = get_or<double>(jg, "stance_width", g.stance_width);
        g.efficiency = get_or<double>(jg, "efficiency", g.efficiency);
        g.stance_timeout = get_or<double>(jg, "stance_timeout", g.stance_timeout);
    }
    if (j.contains("timing")) {
        s.t_stop = get_or<double>(j["timing"], "t_stop", s.t_stop);
        s.t_scan = get_or<double>(j["timing"], "t_scan", s.t_scan);
    }
    validate_scenario(s);
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write scenario file: " + path);
    out << scenario_to_json(scenario);
    if (!out) throw IoError("write failed: " + path);
}

Scenario make_inspection14() {
    Scenario s;
    s.seed = 14;
    // Rectangular vehicle footprint; targets hug its sides.
    Obstacle vehicle;
    vehicle.footprint.exterior = {{0.0, 0.0}, {4.0, 0.0}, {4.0, 1.8}, {0.0, 1.8}};
    vehicle.clearance = 0.25;
    s.obstacles.push_back(vehicle);

    const double z = 1.0;  // reach band 0.2..0.8 with the default arm
    int id = 1;
    auto add = [&](double x, double y) { s.targets.push_back({id++, x, y, z, 0.0}); };
    // Five two-target clusters (pair spacing 0.4 m keeps a rich overlap).
    add(0.5, 0.0);
    add(0.9, 0.0);  // south cluster A
    add(1.8, 0.0);
    add(2.2, 0.0);  // south cluster B
    add(3.1, 0.0);
    add(3.5, 0.0);  // south cluster C
    add(0.7, 1.8);
    add(1.1, 1.8);  // north cluster D
    add(2.6, 1.8);
    add(3.0, 1.8);  // north cluster E
    // Four singletons on the short faces.
    add(0.0, 0.35);
    add(0.0, 1.45);
    add(4.0, 0.35);
    add(4.0, 1.45);

    s.start = {-1.5, -1.5};
    s.end = {5.5, -1.5};
    s.alpha = 13.0;
    s.walk_speed = 0.32;
    s.t_stop = 8.0;
    s.t_scan = 5.0;
    s.n_samples = 6000;
    return s;
}

Scenario make_random_scenario(std::uint64_t seed, int n_targets) {
    if (n_targets <= 0) throw ValidationError("n_targets: must be > 0");
    Scenario s;
    s.seed = seed;
    Rng rng(mix_seed(seed, 0x67656e  /* scenario generation stream */));
    double x = 0.0;
    for (int i = 0; i < n_targets; ++i) {
        // Corridor walk: spacing drawn so neighboring reach annuli (outer
        // radius ~0.8) overlap roughly half the time.
        x += 0.5 + 1.1 * rng.uniform();
        const double y = -0.8 + 1.6 * rng.uniform();
        const double z = 0.9 + 0.3 * rng.uniform();
        s.targets.push_back({i + 1, x, y, z, 0.0});
    }
    s.start = {-1.5, 0.0};
    s.end = {x + 1.5, 0.0};
    s.n_samples = 4000;
    s.time_budget = 60.0;  // keeps any single pipeline run well under 120 s
    return s;
}

}  // namespace stanceplan
