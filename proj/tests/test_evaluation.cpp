#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include <railmaint/evaluation.hpp>

#include "oracles.hpp"

using namespace railmaint;
using Catch::Approx;

namespace {

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

ScenarioSet repeat(const std::vector<int>& xi, int K) {
    ScenarioSet s;
    for (int x : xi) s.failure_times.emplace_back(static_cast<std::size_t>(K), x);
    s.probabilities.assign(static_cast<std::size_t>(K), 1.0 / K);
    return s;
}

long total(const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0L); }

}  // namespace

TEST_CASE("five-railcar worked example", "[evaluation]") {
    const Instance inst = five_railcar_week();
    const MaintenancePlan plan({1, 1, 0, 4, 0});
    const std::vector<int> xi{4, 3, 4, 5, 4};
    const auto r = evaluate_plan(plan, inst, xi);

    using K = MaintenanceKind;
    CHECK(r.kind == std::vector<K>{K::Preventive, K::Preventive, K::Corrective, K::Preventive, K::Corrective});
    CHECK(r.omega == 218.0);
    CHECK(total(r.sla_shortfall) == 1);
    CHECK(r.sla_shortfall[4] == 1);
    CHECK(total(r.track_overflow) == 3);
    CHECK(total(r.preventive_count) == 9);
    CHECK(total(r.corrective_count) == 10);
    CHECK(r.maintenance_cost == 3 * 8.0 + 2 * 40.0);
    CHECK(r.busy_first[2] == 4);
    CHECK(r.busy_last[2] == 8);

    const auto oos = evaluate_out_of_sample(plan, inst, repeat(xi, 1));
    CHECK(oos.kpis.cost == 218.0);
    CHECK(oos.kpis.sla_v == 1.0 / 8);
    CHECK(oos.kpis.track_v == 3.0 / 8);
    CHECK(oos.kpis.n_prev == 9.0 / 8);
    CHECK(oos.kpis.n_cor == 10.0 / 8);

    const auto naive = oracle::simulate(inst, {1, 1, 0, 4, 0}, xi);
    CHECK(naive.cost == 218.0);
}

TEST_CASE("trivial scenarios", "[evaluation]") {
    Instance inst = five_railcar_week();
    inst.sla.requirements.assign(8, 0);
    const auto r = evaluate_plan(MaintenancePlan::all_postponed(5), inst, std::vector<int>(5, 9));
    CHECK(r.omega == 0.0);
    for (auto k : r.kind) CHECK(k == MaintenanceKind::None);
}

TEST_CASE("start at the failure period is corrective", "[evaluation]") {
    Instance inst = five_railcar_week();
    inst.fleet.num_railcars = 1;
    inst.fleet.initial_ages = {0};
    const auto at = evaluate_plan(MaintenancePlan({3}), inst, std::vector<int>{3});
    CHECK(at.kind[0] == MaintenanceKind::Corrective);
    CHECK(at.busy_first[0] == 3);
    const auto before = evaluate_plan(MaintenancePlan({2}), inst, std::vector<int>{3});
    CHECK(before.kind[0] == MaintenanceKind::Preventive);
    const auto after = evaluate_plan(MaintenancePlan({6}), inst, std::vector<int>{3});
    CHECK(after.kind[0] == MaintenanceKind::Corrective);
    CHECK(after.busy_first[0] == 3);  // failure time, not the planned start
}

TEST_CASE("evaluator matches the naive simulator on random pairs", "[evaluation][oracle]") {
    std::mt19937_64 rng(1717);
    for (int rep = 0; rep < 1000; ++rep) {
        const Instance inst = oracle::random_instance(rng, 5, 8);
        const int n = inst.num_railcars(), T = inst.num_periods();
        std::vector<int> starts(static_cast<std::size_t>(n)), xi(starts.size());
        for (auto& s : starts) s = std::uniform_int_distribution<int>(0, T)(rng);
        for (auto& x : xi) x = std::uniform_int_distribution<int>(1, T + 1)(rng);
        const auto r = evaluate_plan(MaintenancePlan(starts), inst, xi);
        const auto o = oracle::simulate(inst, starts, xi);
        INFO("rep " << rep);
        REQUIRE(r.omega == o.cost);
        REQUIRE(total(r.sla_shortfall) == o.shortfall);
        REQUIRE(total(r.track_overflow) == o.overflow);
        REQUIRE(total(r.preventive_count) == o.prev_periods);
        REQUIRE(total(r.corrective_count) == o.cor_periods);
    }
}

TEST_CASE("out-of-sample aggregation", "[evaluation]") {
    Instance inst = scale_instance(preset_line(Line::M1B), 0.2);
    inst.fleet.initial_ages = sample_fleet_ages(FleetProfile::Mixed, inst.num_railcars(), 5);
    const auto scen = generate_scenarios(inst, {}, 200, 21);
    std::vector<int> starts(static_cast<std::size_t>(inst.num_railcars()), 0);
    for (std::size_t j = 0; j < starts.size(); j += 3) starts[j] = 1 + static_cast<int>(j) % 20;
    const MaintenancePlan plan(starts);

    const auto serial = evaluate_out_of_sample(plan, inst, scen, 1);
    const auto parallel = evaluate_out_of_sample(plan, inst, scen, 4);
    CHECK(serial.omegas == parallel.omegas);
    CHECK(serial.kpis.cost == parallel.kpis.cost);
    CHECK(serial.kpis.n_cor == parallel.kpis.n_cor);

    SECTION("mean against compensated summation") {
        double sum = 0.0, comp = 0.0;
        for (double w : serial.omegas) {
            const double y = w - comp;
            const double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        CHECK(serial.kpis.cost == Approx(sum / 200.0).epsilon(1e-9));
    }
    SECTION("scenario order does not matter") {
        ScenarioSet rev = scen;
        for (auto& row : rev.failure_times) std::reverse(row.begin(), row.end());
        const auto r = evaluate_out_of_sample(plan, inst, rev);
        CHECK(r.kpis.cost == serial.kpis.cost);
        CHECK(r.kpis.n_prev == serial.kpis.n_prev);
        CHECK(r.kpis.sla_v == serial.kpis.sla_v);
    }
    SECTION("copies of one scenario") {
        const auto xi = scen.scenario(7);
        const auto one = evaluate_plan(plan, inst, xi);
        const auto many = evaluate_out_of_sample(plan, inst, repeat(xi, 50));
        CHECK(many.kpis.cost == Approx(one.omega).epsilon(1e-12));
        const double T = inst.num_periods();
        CHECK(many.kpis.n_cor == Approx(total(one.corrective_count) / T).epsilon(1e-12));
        CHECK(many.kpis.sla_v == Approx(total(one.sla_shortfall) / T).epsilon(1e-12));
        for (std::size_t t = 0; t < one.preventive_count.size(); ++t)
            CHECK(many.kpis.preventive_trajectory[t] == Approx(one.preventive_count[t]));
        const auto ci = ub_confidence_interval(many.omegas, 0.05);
        CHECK(ci.lo == ci.hi);
    }
}

TEST_CASE("upper-bound interval", "[evaluation][stats]") {
    const std::vector<double> w{0.0, 2.0};
    const auto ci = ub_confidence_interval(w, 0.05);
    CHECK(ci.mid() == 1.0);
    CHECK(ci.half_width() == Approx(1.959963984540054).epsilon(1e-12));
    CHECK_THROWS(ub_confidence_interval(std::vector<double>{1.0}, 0.05));

    SECTION("coverage of a known normal mean") {
        std::mt19937_64 rng(55);
        std::normal_distribution<double> N(10.0, 3.0);
        int covered = 0;
        std::vector<double> xs(1000);
        for (int trial = 0; trial < 500; ++trial) {
            for (auto& x : xs) x = N(rng);
            const auto c = ub_confidence_interval(xs, 0.05);
            covered += (c.lo <= 10.0 && 10.0 <= c.hi);
        }
        const double rate = covered / 500.0;
        CHECK(rate >= 0.93);
        CHECK(rate <= 0.97);
    }
}

TEST_CASE("evaluator input checks", "[evaluation]") {
    const Instance inst = five_railcar_week();
    CHECK_THROWS(evaluate_plan(MaintenancePlan({1, 1, 0, 4}), inst, std::vector<int>{4, 3, 4, 5}));
    CHECK_THROWS(evaluate_plan(MaintenancePlan({1, 1, 0, 4, 0}), inst, std::vector<int>{4, 3, 4, 5, 10}));
    CHECK_THROWS(evaluate_plan(MaintenancePlan({1, 1, 0, 4, 0}), inst, std::vector<int>{4, 3, 4, 5}));
}
