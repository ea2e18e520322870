#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <railmaint/evaluation.hpp>
#include <railmaint/stochastic.hpp>

#include "oracles.hpp"

using namespace railmaint;
using Catch::Approx;

namespace {

Instance tiny(int n, int T, int L) {
    Instance inst;
    inst.horizon = {1, T};
    inst.sla.requirements.assign(static_cast<std::size_t>(T), 0);
    inst.fleet.num_railcars = n;
    inst.fleet.initial_ages.assign(static_cast<std::size_t>(n), 0);
    inst.fleet.track_capacity = L;
    return inst;
}

// failure_times given scenario-major: xi[k][j]
ScenarioSet make_scenarios(const std::vector<std::vector<int>>& xi) {
    ScenarioSet s;
    const std::size_t K = xi.size(), n = xi.front().size();
    s.failure_times.assign(n, std::vector<int>(K));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < n; ++j) s.failure_times[j][k] = xi[k][j];
    s.probabilities.assign(K, 1.0 / static_cast<double>(K));
    return s;
}

milp::SolveOptions exact() {
    milp::SolveOptions o;
    o.relative_mip_gap = 1e-9;
    return o;
}

Instance five_railcar_week() {
    Instance inst;
    inst.horizon = {1, 8};
    inst.sla.requirements = {3, 2, 3, 0, 3, 2, 3, 0};
    inst.fleet.num_railcars = 5;
    inst.fleet.initial_ages.assign(5, 0);
    inst.fleet.track_capacity = 2;
    inst.costs = apply_case(default_costs(), CostCase::Case1);
    return inst;
}

}  // namespace

TEST_CASE("no failure and no demand", "[stochastic]") {
    const Instance inst = tiny(1, 8, 1);
    const auto scen = make_scenarios({{9}});
    for (auto mode : {StochObjectiveMode::LiteralEq2a, StochObjectiveMode::ChargeOnce}) {
        const auto sol = solve_stochastic(inst, scen, mode, exact());
        CHECK(sol.plan.postponed(0));
        CHECK(sol.result.objective_value == Approx(0.0).margin(1e-9));
    }
}

TEST_CASE("single failure at period 4", "[stochastic]") {
    const Instance inst = tiny(1, 8, 1);
    const auto scen = make_scenarios({{4}});

    SECTION("charge-once schedules before the failure") {
        const auto sol = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact());
        CHECK(sol.result.objective_value == Approx(8.0).margin(1e-9));
        REQUIRE_FALSE(sol.plan.postponed(0));
        CHECK(sol.plan.start(0) <= 3);

        // enumeration of the 9 first-stage choices via the naive simulator
        double best = 1e300;
        for (int s = 0; s <= 8; ++s) best = std::min(best, oracle::simulate(inst, {s}, {4}).cost);
        CHECK(best == 8.0);
    }
    SECTION("literal objective charges every remaining period when postponed") {
        const auto sol = solve_stochastic(inst, scen, StochObjectiveMode::LiteralEq2a, exact(),
                                          MaintenancePlan::all_postponed(1));
        CHECK(sol.result.objective_value == Approx(40.0 * (8 - 4 + 1)).margin(1e-9));
        const auto once = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact(),
                                           MaintenancePlan::all_postponed(1));
        CHECK(once.result.objective_value == Approx(40.0).margin(1e-9));
    }
}

TEST_CASE("railcars failing in the first period cannot be maintained preventively", "[stochastic]") {
    const Instance inst = tiny(3, 8, 3);
    const auto scen = make_scenarios({{1, 1, 1}, {1, 1, 1}});
    const auto sol = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact());
    CHECK(sol.result.objective_value == Approx(3 * 40.0).margin(1e-9));
    const auto rec = evaluate_plan(sol.plan, inst, scen.scenario(0));
    for (auto k : rec.kind) CHECK(k == MaintenanceKind::Corrective);
    CHECK(rec.omega == Approx(sol.result.objective_value).margin(1e-9));
}

TEST_CASE("five-railcar week: in-sample objective equals evaluator cost", "[stochastic][consistency]") {
    const Instance inst = five_railcar_week();
    const auto scen = make_scenarios({{4, 3, 4, 5, 4}});
    const MaintenancePlan plan({1, 1, 0, 4, 0});
    const auto fixed = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact(), plan);
    CHECK(fixed.result.objective_value == Approx(218.0).margin(1e-9));

    const auto free = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact());
    const auto rec = evaluate_plan(free.plan, inst, scen.scenario(0));
    CHECK(free.result.objective_value == Approx(rec.omega).epsilon(1e-9));
    CHECK(free.result.objective_value <= 218.0 + 1e-9);
}

TEST_CASE("stochastic model matches enumeration on tiny instances", "[stochastic][oracle]") {
    std::mt19937_64 rng(4242);
    for (int rep = 0; rep < 15; ++rep) {
        Instance inst = oracle::random_instance(rng, 3, 5);
        const int n = inst.num_railcars(), T = inst.num_periods();
        const int K = std::uniform_int_distribution<int>(1, 4)(rng);
        std::vector<std::vector<int>> xi(static_cast<std::size_t>(K), std::vector<int>(static_cast<std::size_t>(n)));
        for (auto& row : xi)
            for (auto& x : row) x = std::uniform_int_distribution<int>(1, T + 1)(rng);
        const auto scen = make_scenarios(xi);

        double best = 1e300;
        oracle::for_each_plan(n, T, [&](const std::vector<int>& s) { best = std::min(best, oracle::mean_cost(inst, s, xi)); });

        const auto sol = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact());
        INFO("rep " << rep);
        REQUIRE(sol.result.status == milp::SolveStatus::Optimal);
        REQUIRE(sol.result.objective_value == Approx(best).epsilon(1e-6).margin(1e-6));
    }
}

TEST_CASE("literal and charge-once differ only on postponed failures", "[stochastic]") {
    std::mt19937_64 rng(99);
    Instance inst = oracle::random_instance(rng, 4, 8);
    const int n = inst.num_railcars(), T = inst.num_periods();
    std::vector<std::vector<int>> xi(3, std::vector<int>(static_cast<std::size_t>(n)));
    for (auto& row : xi)
        for (auto& x : row) x = std::uniform_int_distribution<int>(1, T + 1)(rng);
    const auto scen = make_scenarios(xi);
    std::vector<int> starts(static_cast<std::size_t>(n), 0);
    for (int j = 1; j < n; j += 2) starts[static_cast<std::size_t>(j)] = 1 + j % T;
    const MaintenancePlan plan(starts);

    const auto lit = solve_stochastic(inst, scen, StochObjectiveMode::LiteralEq2a, exact(), plan);
    const auto once = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact(), plan);
    double extra = 0.0;
    for (const auto& row : xi)
        for (int j = 0; j < n; ++j)
            if (starts[static_cast<std::size_t>(j)] == 0 && row[static_cast<std::size_t>(j)] <= T)
                extra += inst.costs.c_c * (T - row[static_cast<std::size_t>(j)]) / 3.0;
    CHECK(lit.result.objective_value - once.result.objective_value == Approx(extra).margin(1e-6));
}

TEST_CASE("mode names round trip", "[stochastic]") {
    for (auto m : {StochObjectiveMode::LiteralEq2a, StochObjectiveMode::ChargeOnce}) CHECK(parse_mode(to_string(m)) == m);
    CHECK_THROWS(parse_mode("bogus"));
}

TEST_CASE("scenario/fleet mismatch is rejected", "[stochastic]") {
    CHECK_THROWS(build_stochastic(tiny(2, 4, 1), make_scenarios({{2}}), StochObjectiveMode::ChargeOnce));
}
