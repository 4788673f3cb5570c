#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "stanceplan/errors.hpp"
#include "stanceplan/rng.hpp"
#include "stanceplan/stance_planner.hpp"

using namespace stanceplan;

namespace {

StanceCandidate make_candidate(int index, double x, double y, std::vector<int> targets,
                               double radius = 0.1) {
    StanceCandidate c;
    c.index = index;
    c.circle = {{x, y}, radius};
    std::sort(targets.begin(), targets.end());
    c.covered_targets = std::move(targets);
    c.n_covered = static_cast<int>(c.covered_targets.size());
    c.from_overlap = c.n_covered >= 2;
    return c;
}

PlanProblem random_problem(std::uint64_t seed, int m, int n_targets) {
    Rng rng(seed);
    PlanProblem p;
    p.start = {rng.uniform(-2, 0), rng.uniform(-2, 2)};
    p.end = {rng.uniform(8, 10), rng.uniform(-2, 2)};
    p.targets.resize(n_targets);
    std::iota(p.targets.begin(), p.targets.end(), 1);
    std::vector<std::set<int>> cov(m);
    for (int i = 0; i < m; ++i) {
        const int k = 1 + static_cast<int>(rng.uniform() * 3.0);
        for (int j = 0; j < k; ++j) cov[i].insert(1 + static_cast<int>(rng.uniform() * n_targets));
    }
    // Force full coverage across the candidate set.
    for (int t = 1; t <= n_targets; ++t) cov[(t - 1) % m].insert(t);
    for (int i = 0; i < m; ++i) {
        p.candidates.push_back(make_candidate(
            i + 1, rng.uniform(0, 8), rng.uniform(-4, 4),
            std::vector<int>(cov[i].begin(), cov[i].end()), 0.05 + 0.2 * rng.uniform()));
    }
    p.alpha = 5.0 + 10.0 * rng.uniform();
    p.walk_speed = 0.3 + 0.7 * rng.uniform();
    return p;
}

// Test-side oracle, written against the objective definition only: enumerate
// every covering subset and every visiting permutation directly, with its own
// distance and objective arithmetic.
struct IndepBest {
    double objective;
    std::set<int> selected;
};

IndepBest independent_enumerator(const PlanProblem& p) {
    const int m = static_cast<int>(p.candidates.size());
    const double lambda = p.effective_lambda();
    auto dist = [](const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); };

    IndepBest best{1e300, {}};
    bool found = false;
    for (unsigned subset = 0; subset < (1u << m); ++subset) {
        std::set<int> covered;
        std::vector<const StanceCandidate*> sel;
        for (int i = 0; i < m; ++i) {
            if (subset >> i & 1) {
                sel.push_back(&p.candidates[i]);
                for (int t : p.candidates[i].covered_targets) covered.insert(t);
            }
        }
        bool covers = true;
        for (int t : p.targets) covers = covers && covered.count(t);
        if (!covers) continue;

        std::vector<int> perm(sel.size());
        std::iota(perm.begin(), perm.end(), 0);
        double travel = 1e300;
        do {
            double acc = 0.0;
            Point2 at = p.start;
            for (int i : perm) {
                acc += dist(at, sel[i]->circle.center);
                at = sel[i]->circle.center;
            }
            acc += dist(at, p.end);
            travel = std::min(travel, acc);
        } while (std::next_permutation(perm.begin(), perm.end()));

        int overlaps = 0;
        for (const auto* c : sel) overlaps += c->from_overlap ? 1 : 0;
        const double obj = p.alpha * static_cast<double>(sel.size() + 2) + travel / p.walk_speed -
                           lambda * overlaps;
        if (!found || obj < best.objective - 1e-12) {
            found = true;
            best.objective = obj;
            best.selected.clear();
            for (const auto* c : sel) best.selected.insert(c->index);
        }
    }
    REQUIRE(found);
    return best;
}

void check_structure(const MipModel& model, const PlanResult& r) {
    const int m = model.m;
    // z consistent with the reported path.
    REQUIRE(static_cast<int>(r.z.size()) == m + 2);
    CHECK(r.z[0] == 1);
    CHECK(r.z[m + 1] == 1);

    // Edge walk: exactly one simple start-to-end path over the selected nodes.
    std::map<int, int> succ;
    for (const auto& [i, j] : r.edges) {
        CHECK(succ.emplace(i, j).second);  // out-degree 1
    }
    int at = 0;
    std::set<int> visited{0};
    while (at != m + 1) {
        auto it = succ.find(at);
        REQUIRE(it != succ.end());
        at = it->second;
        CHECK(visited.insert(at).second);  // no revisit
    }
    int z_sum = 0;
    for (int zi : r.z) z_sum += zi;
    CHECK(static_cast<int>(visited.size()) == z_sum);
    CHECK(static_cast<int>(r.edges.size()) == z_sum - 1);  // a path over k+2 nodes has k+1 edges
    for (int i = 0; i <= m + 1; ++i) {
        CHECK((visited.count(i) != 0) == (r.z[i] == 1));
    }

    // MTZ: gamma strictly increases along every selected edge.
    for (const auto& [i, j] : r.edges) CHECK(r.gamma[i] + 1.0 <= r.gamma[j] + 1e-12);
    CHECK(r.gamma[0] == 0.0);

    // Coverage and assignment.
    for (std::size_t t = 0; t < model.target_ids.size(); ++t) {
        const auto it = r.assignment.find(model.target_ids[t]);
        REQUIRE(it != r.assignment.end());
        CHECK(r.z[it->second] == 1);
        CHECK(model.cover[t][it->second - 1] == 1);
    }

    // Objective recomputation within 1e-9.
    double travel = 0.0;
    for (const auto& [i, j] : r.edges) travel += model.dist[i][j];
    int overlaps = 0;
    for (int i = 1; i <= m; ++i) overlaps += (r.z[i] && model.overlap[i - 1]) ? 1 : 0;
    const double recomputed =
        model.alpha * z_sum + model.inv_v * travel - model.lambda * overlaps;
    CHECK(std::abs(recomputed - r.objective) < 1e-9);
    CHECK(std::abs(travel - r.travel_distance) < 1e-9);
}

}  // namespace

TEST_CASE("enumerate_candidates: two overlapping squares give 3 candidates") {
    FeasibleRegion a{1, {{{0, 0}, {2, 0}, {2, 2}, {0, 2}}, {}}, 0, false};
    FeasibleRegion b{2, {{{1, 0}, {3, 0}, {3, 2}, {1, 2}}, {}}, 0, false};
    const auto cands = enumerate_candidates({a, b}, 0.05);
    REQUIRE(cands.size() == 3);
    int n2 = 0, n1 = 0;
    for (const auto& c : cands) {
        if (c.n_covered == 2) {
            ++n2;
            CHECK(c.from_overlap);
            CHECK(c.covered_targets == std::vector<int>{1, 2});
        } else {
            ++n1;
        }
    }
    CHECK(n2 == 1);
    CHECK(n1 == 2);
    // Indices are 1..m and unique.
    std::set<int> idx;
    for (const auto& c : cands) idx.insert(c.index);
    CHECK(idx == std::set<int>{1, 2, 3});
}

TEST_CASE("enumerate_candidates: single region gives one singleton candidate") {
    FeasibleRegion a{7, {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}}, 0, false};
    const auto cands = enumerate_candidates({a}, 0.05);
    REQUIRE(cands.size() == 1);
    CHECK(cands[0].covered_targets == std::vector<int>{7});
    CHECK(!cands[0].from_overlap);
    CHECK(cands[0].circle.radius >= 0.05);
}

TEST_CASE("enumerate_candidates: thin overlap dropped, remainders still cover") {
    // Overlap strip 0.05 m wide: inscribed circle radius 0.025 < 0.05.
    FeasibleRegion a{1, {{{0, 0}, {1.05, 0}, {1.05, 1}, {0, 1}}, {}}, 0, false};
    FeasibleRegion b{2, {{{1.0, 0}, {2.05, 0}, {2.05, 1}, {1.0, 1}}, {}}, 0, false};
    const auto cands = enumerate_candidates({a, b}, 0.05);
    std::set<int> covered;
    for (const auto& c : cands) {
        CHECK(c.n_covered == 1);  // the overlap cell is gone
        covered.insert(c.covered_targets.front());
    }
    CHECK(covered == std::set<int>{1, 2});
}

TEST_CASE("enumerate_candidates: target with no usable circle raises UncoverableTarget") {
    FeasibleRegion a{1, {{{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {}}, 0, false};
    FeasibleRegion sliver{2, {{{5, 0}, {6, 0}, {6, 0.02}, {5, 0.02}}, {}}, 0, false};
    CHECK_THROWS_AS(enumerate_candidates({a, sliver}, 0.05), UncoverableTarget);
}

TEST_CASE("build_mip: m=1 model shape and warm start") {
    PlanProblem p;
    p.start = {0, 0};
    p.end = {2, 0};
    p.candidates = {make_candidate(1, 1, 0, {1})};
    p.targets = {1};
    p.alpha = 10.0;
    p.walk_speed = 1.0;
    const MipModel model = build_mip(p);
    CHECK(model.m == 1);
    CHECK(model.nodes.size() == 3);
    CHECK(model.cover.size() == 1);
    CHECK(model.cover[0][0] == 1);
    CHECK(model.z_init[0] == 0);  // singleton, not from overlap
    CHECK(model.lambda == doctest::Approx(1.0));  // default 0.1 alpha
    // Distance matrix symmetric, zero diagonal.
    for (int i = 0; i < 3; ++i) {
        CHECK(model.dist[i][i] == 0.0);
        for (int j = 0; j < 3; ++j) CHECK(model.dist[i][j] == model.dist[j][i]);
    }
    CHECK(model.dist[0][2] == doctest::Approx(2.0));
}

TEST_CASE("solve_mip: single-candidate instance, objective 32.0") {
    PlanProblem p;
    p.start = {0, 0};
    p.end = {2, 0};
    p.candidates = {make_candidate(1, 1, 0, {1})};
    p.targets = {1};
    p.alpha = 10.0;
    p.walk_speed = 1.0;
    const MipModel model = build_mip(p);
    const PlanResult r = solve_mip(model, 10.0);
    CHECK(r.travel_distance == doctest::Approx(2.0));
    CHECK(r.objective == doctest::Approx(32.0));
    CHECK(r.stop_count == 1);
    REQUIRE(r.ordered_stances.size() == 1);
    CHECK(r.ordered_stances[0].index == 1);
    CHECK(r.proven_optimal);
    CHECK(r.lower_bound == doctest::Approx(32.0));
    CHECK(r.assignment.at(1) == 1);
    check_structure(model, r);

    const PlanResult b = brute_force_plan(p);
    CHECK(b.objective == r.objective);  // exact
    CHECK(b.z == r.z);
}

TEST_CASE("solve_mip: large alpha collapses onto the shared overlap candidate") {
    PlanProblem p;
    p.start = {0, 0};
    p.end = {4, 0};
    p.candidates = {
        make_candidate(1, 2, 0, {1, 2, 3}),
        make_candidate(2, 1, 1, {1}),
        make_candidate(3, 2, 1, {2}),
        make_candidate(4, 3, 1, {3}),
    };
    p.targets = {1, 2, 3};
    p.alpha = 100.0;
    p.walk_speed = 1.0;
    const PlanResult r = solve_mip(build_mip(p), 10.0);
    CHECK(r.stop_count == 1);
    REQUIRE(r.ordered_stances.size() == 1);
    CHECK(r.ordered_stances[0].index == 1);
    const PlanResult b = brute_force_plan(p);
    CHECK(b.objective == r.objective);
    CHECK(b.z == r.z);
}

TEST_CASE("solve_mip: infeasible and degenerate inputs") {
    PlanProblem p;
    p.start = {0, 0};
    p.end = {1, 0};
    p.targets = {1};
    CHECK_THROWS_AS(solve_mip(build_mip(p), 1.0), Infeasible);   // no candidates
    CHECK_THROWS_AS(brute_force_plan(p), Infeasible);

    p.candidates = {make_candidate(1, 0.5, 0, {2})};  // covers the wrong target
    CHECK_THROWS_AS(solve_mip(build_mip(p), 1.0), Infeasible);

    // No targets at all: direct start-end path.
    PlanProblem q;
    q.start = {0, 0};
    q.end = {3, 0};
    q.alpha = 10.0;
    q.walk_speed = 1.0;
    const PlanResult r = solve_mip(build_mip(q), 1.0);
    CHECK(r.stop_count == 0);
    CHECK(r.objective == doctest::Approx(23.0));  // 2 alpha + 3/v
}

TEST_CASE("brute_force_plan: m > 12 guard") {
    PlanProblem p = random_problem(1, 13, 4);
    CHECK_THROWS_AS(brute_force_plan(p), TooLarge);
}

TEST_CASE("oracle equivalence: 60 seeded instances, m <= 8, exact objective match") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const int m = 3 + static_cast<int>(seed % 6);       // 3..8
        const int t = 2 + static_cast<int>(seed % 5);       // 2..6
        const PlanProblem p = random_problem(seed * 7919, m, t);
        const MipModel model = build_mip(p);
        const PlanResult a = solve_mip(model, 30.0);
        const PlanResult b = brute_force_plan(p);
        REQUIRE(a.objective == b.objective);  // 0 tolerance by construction
        REQUIRE(a.z == b.z);                  // lexicographic tie-break agrees
        CHECK(a.proven_optimal);
        check_structure(model, a);
        check_structure(model, b);
    }
}

TEST_CASE("independent permutation enumerator cross-checks both solvers") {
    for (std::uint64_t seed = 100; seed < 120; ++seed) {
        const PlanProblem p = random_problem(seed, 6, 4);
        const IndepBest ref = independent_enumerator(p);
        const PlanResult a = solve_mip(build_mip(p), 30.0);
        const PlanResult b = brute_force_plan(p);
        CHECK(a.objective == doctest::Approx(ref.objective).epsilon(1e-12));
        CHECK(b.objective == doctest::Approx(ref.objective).epsilon(1e-12));
        std::set<int> got;
        for (const auto& s : a.ordered_stances) got.insert(s.index);
        CHECK(got == ref.selected);
    }
}

TEST_CASE("dominance: solve_mip never worse than naive_plan") {
    for (std::uint64_t seed = 200; seed < 230; ++seed) {
        const PlanProblem p = random_problem(seed, 8, 5);
        const PlanResult opt = solve_mip(build_mip(p), 30.0);
        const PlanResult naive = naive_plan(p, p.targets);
        CHECK(opt.objective <= naive.objective + 1e-9);
    }
}

TEST_CASE("scale invariance: scaling distances and 1/v together keeps the selection") {
    for (std::uint64_t seed = 300; seed < 310; ++seed) {
        PlanProblem p = random_problem(seed, 7, 4);
        const PlanResult base = solve_mip(build_mip(p), 30.0);

        PlanProblem scaled = p;
        const double k = 3.7;
        auto scale = [&](Point2& pt) { pt = {pt.x * k, pt.y * k}; };
        scale(scaled.start);
        scale(scaled.end);
        for (auto& c : scaled.candidates) scale(c.circle.center);
        scaled.walk_speed = p.walk_speed * k;  // same time units
        const PlanResult s = solve_mip(build_mip(scaled), 30.0);

        CHECK(s.z == base.z);
        REQUIRE(s.ordered_stances.size() == base.ordered_stances.size());
        for (std::size_t i = 0; i < s.ordered_stances.size(); ++i) {
            CHECK(s.ordered_stances[i].index == base.ordered_stances[i].index);
        }
    }
}

TEST_CASE("determinism: repeated solves return identical results") {
    const PlanProblem p = random_problem(42, 9, 5);
    const MipModel model = build_mip(p);
    const PlanResult a = solve_mip(model, 30.0);
    const PlanResult b = solve_mip(model, 30.0);
    CHECK(a.objective == b.objective);
    CHECK(a.z == b.z);
    CHECK(a.edges == b.edges);
    CHECK(a.gamma == b.gamma);
}

TEST_CASE("solve_mip: expired budget still returns an incumbent with a valid bound") {
    const PlanProblem p = random_problem(77, 24, 10);
    const MipModel model = build_mip(p);
    const PlanResult r = solve_mip(model, 1e-7);  // effectively zero budget
    CHECK(r.lower_bound <= r.objective + 1e-9);
    check_structure(model, r);
    // A generous budget must do at least as well.
    const PlanResult full = solve_mip(model, 60.0);
    CHECK(full.objective <= r.objective + 1e-9);
}

TEST_CASE("naive_plan: three targets in a row, one stop each") {
    PlanProblem p;
    p.start = {0, 0};
    p.end = {4, 0};
    p.candidates = {
        make_candidate(1, 1, 0, {1}),
        make_candidate(2, 2, 0, {2}),
        make_candidate(3, 3, 0, {3}),
    };
    p.targets = {1, 2, 3};
    p.alpha = 10.0;
    p.walk_speed = 1.0;
    const PlanResult r = naive_plan(p, {1, 2, 3});
    CHECK(r.stop_count == 3);
    CHECK(r.travel_distance == doctest::Approx(4.0));
    CHECK(r.objective == doctest::Approx(10.0 * 5 + 4.0));
    CHECK(r.assignment.at(2) == 2);
}

TEST_CASE("naive_plan: ignores sharing even when one circle covers everything") {
    PlanProblem p;
    p.start = {0, 0};
    p.end = {2, 0};
    p.candidates = {
        make_candidate(1, 1, 0, {1, 2, 3}),
        make_candidate(2, 1, 0.5, {1}),
        make_candidate(3, 1, -0.5, {2}),
        make_candidate(4, 1.5, 0, {3}),
    };
    p.targets = {1, 2, 3};
    p.alpha = 10.0;
    p.walk_speed = 1.0;
    const PlanResult r = naive_plan(p, {1, 2, 3});
    CHECK(r.stop_count == 3);  // baseline deliberately ignores sharing
    // Singleton candidates preferred.
    CHECK(r.assignment.at(1) == 2);
    CHECK(r.assignment.at(2) == 3);
    CHECK(r.assignment.at(3) == 4);
}

TEST_CASE("write_lp: structural sanity") {
    PlanProblem p;
    p.start = {0, 0};
    p.end = {2, 0};
    p.candidates = {make_candidate(1, 1, 0, {1}), make_candidate(2, 1, 1, {1})};
    p.targets = {1};
    p.alpha = 10.0;
    p.walk_speed = 1.0;
    const std::string lp = write_lp(build_mip(p));
    CHECK(lp.find("Minimize") != std::string::npos);
    CHECK(lp.find("Subject To") != std::string::npos);
    CHECK(lp.find("Binary") != std::string::npos);
    CHECK(lp.find("End") != std::string::npos);
    CHECK(lp.find("term_start: z0 = 1") != std::string::npos);
    CHECK(lp.find("term_end: z3 = 1") != std::string::npos);
    CHECK(lp.find("cover_1:") != std::string::npos);
    // m=2: 4 nodes, 12 ordered edge variables -> 12 MTZ rows.
    std::size_t mtz = 0, pos = 0;
    while ((pos = lp.find(" mtz_", pos)) != std::string::npos) {
        ++mtz;
        ++pos;
    }
    CHECK(mtz == 12);
}
