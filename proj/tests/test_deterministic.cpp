#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include <railmaint/deterministic.hpp>

#include "oracles.hpp"

using namespace railmaint;
using Catch::Approx;

namespace {

Instance one_railcar(int T) {
    Instance inst;
    inst.horizon = {1, T};
    inst.sla.requirements.assign(static_cast<std::size_t>(T), 0);
    inst.fleet = {1, {0}, 1};
    return inst;
}

milp::SolveOptions exact() {
    milp::SolveOptions o;
    o.relative_mip_gap = 1e-9;
    return o;
}

double enumerate_best(const DetModelInput& in, std::vector<int>* best_starts = nullptr) {
    double best = std::numeric_limits<double>::infinity();
    oracle::for_each_plan(in.instance.num_railcars(), in.instance.num_periods(), [&](const std::vector<int>& s) {
        const double c = oracle::deterministic_cost(in.instance, in.intervals, s);
        if (c < best - 1e-9) {
            best = c;
            if (best_starts) *best_starts = s;
        }
    });
    return best;
}

void check_solution(const DetModelInput& in, const DetSolution& sol) {
    const auto& d = sol.diagnostics;
    // objective reconstructed from extracted values
    const double rebuilt = deterministic_objective(in.instance, sol.plan, d);
    REQUIRE(rebuilt == Approx(sol.result.objective_value).epsilon(1e-6).margin(1e-6));
    for (std::size_t j = 0; j < sol.plan.size(); ++j) {
        const double D = in.intervals[j].due, I = in.intervals[j].end;
        if (!sol.plan.postponed(j)) {
            const double s = sol.plan.start(j);
            REQUIRE(d.start[j] == Approx(s).margin(1e-6));
            REQUIRE(d.earliness[j] == Approx(std::max(D - s, 0.0)).margin(1e-6));
            REQUIRE(d.tardiness[j] == Approx(std::max(s - D, 0.0)).margin(1e-6));
        }
        REQUIRE(d.violation[j] == Approx(std::max(d.tardiness[j] - (I - D), 0.0)).margin(1e-6));
    }
}

}  // namespace

TEST_CASE("single railcar, interval inside the horizon", "[deterministic]") {
    Instance inst = one_railcar(4);
    inst.costs.c_p = 8;
    inst.costs.c_v = 4;
    inst.costs.c_o = 2;
    const DetModelInput in{inst, {{2, 2}}};

    std::vector<int> best;
    CHECK(enumerate_best(in, &best) == 8.0);
    CHECK(best == std::vector<int>{2});

    const auto sol = solve_deterministic(in, exact());
    CHECK(sol.result.status == milp::SolveStatus::Optimal);
    CHECK(sol.result.objective_value == Approx(8.0).margin(1e-9));
    CHECK(sol.plan.start(0) == 2);
    check_solution(in, sol);
}

TEST_CASE("single railcar, due after the horizon", "[deterministic]") {
    // Postponement wins, but the earliness row still charges D - T = 1.
    Instance inst = one_railcar(4);
    const DetModelInput in{inst, {{5, 6}}};
    CHECK(enumerate_best(in) == 1.0);

    const auto sol = solve_deterministic(in, exact());
    CHECK(sol.plan.postponed(0));
    CHECK(sol.result.objective_value == Approx(1.0).margin(1e-9));
    CHECK(sol.diagnostics.earliness[0] == Approx(1.0).margin(1e-9));
    check_solution(in, sol);
}

TEST_CASE("all-postponed plan is feasible", "[deterministic]") {
    Instance inst = preset_line(Line::M1B);
    inst = scale_instance(inst, 0.1);
    inst.fleet.initial_ages.assign(static_cast<std::size_t>(inst.num_railcars()), 30);
    const DetModelInput in{inst, reliability_intervals(inst, {}, 0.8)};
    auto model = build_deterministic(in);
    for (std::size_t j = 0; j < model.z.size(); ++j) {
        for (auto v : model.z[j]) model.builder.fix(v, 0.0);
        model.builder.fix(model.postpone[j], 1.0);
    }
    const auto r = milp::solve(model.builder, exact());
    REQUIRE(r.status == milp::SolveStatus::Optimal);
    const auto plan = extract_plan(model.z, r);
    CHECK(plan == MaintenancePlan::all_postponed(inst.fleet.num_railcars));
    const std::vector<int> zeros(static_cast<std::size_t>(inst.num_railcars()), 0);
    CHECK(r.objective_value == Approx(oracle::deterministic_cost(inst, in.intervals, zeros)).epsilon(1e-9));
}

TEST_CASE("deterministic model matches enumeration on random tiny instances", "[deterministic][oracle]") {
    std::mt19937_64 rng(808);
    for (int rep = 0; rep < 25; ++rep) {
        Instance inst = oracle::random_instance(rng, 3, 6);
        const int T = inst.num_periods();
        std::vector<MaintenanceInterval> iv;
        for (int j = 0; j < inst.num_railcars(); ++j) {
            const int due = std::uniform_int_distribution<int>(1, T + 3)(rng);
            iv.push_back({due, due + std::uniform_int_distribution<int>(0, 3)(rng)});
        }
        const DetModelInput in{inst, iv};
        const double best = enumerate_best(in);
        const auto sol = solve_deterministic(in, exact());
        INFO("rep " << rep);
        REQUIRE(sol.result.status == milp::SolveStatus::Optimal);
        REQUIRE(sol.result.objective_value == Approx(best).epsilon(1e-6).margin(1e-6));
        check_solution(in, sol);
        std::vector<int> starts(sol.plan.starts().begin(), sol.plan.starts().end());
        REQUIRE(oracle::deterministic_cost(inst, iv, starts) == Approx(best).epsilon(1e-6).margin(1e-6));
    }
}

TEST_CASE("strict and relaxed intervals on a young fleet", "[deterministic]") {
    Instance inst = scale_instance(preset_line(Line::M1B), 0.2);
    inst.costs = apply_case(inst.costs, CostCase::Case1);
    inst.fleet.initial_ages = sample_fleet_ages(FleetProfile::Young, inst.num_railcars(), 3);
    const auto strict = reliability_intervals(inst, {}, 0.8);
    const auto relaxed = reliability_intervals(inst, {}, 0.9);
    // young railcars are due after the week under both levels
    for (std::size_t j = 0; j < strict.size(); ++j) {
        CHECK(strict[j].due > inst.num_periods());
        CHECK(relaxed[j].due > inst.num_periods());
    }
    const auto a = solve_deterministic({inst, strict}, exact());
    const auto b = solve_deterministic({inst, relaxed}, exact());
    CHECK(a.plan == b.plan);
    CHECK(a.plan == MaintenancePlan::all_postponed(inst.num_railcars()));
    check_solution({inst, strict}, a);
    check_solution({inst, relaxed}, b);
}

TEST_CASE("invalid inputs", "[deterministic]") {
    Instance inst = one_railcar(4);
    CHECK_THROWS(build_deterministic({inst, {}}));
    CHECK_THROWS(build_deterministic({inst, {{0, 2}}}));
    CHECK_THROWS(build_deterministic({inst, {{3, 2}}}));
}
