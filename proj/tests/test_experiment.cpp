#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include <railmaint/experiment.hpp>
#include <railmaint/io.hpp>

using namespace railmaint;
using Catch::Approx;

namespace {

ExperimentConfig tiny_config(FleetProfile profile) {
    ExperimentConfig cfg;
    cfg.fleet_profiles = {profile};
    cfg.scale = 0.1;
    cfg.saa.n_in = 5;
    cfg.saa.m_reps = 2;
    cfg.saa.n_out = 50;
    cfg.saa.master_seed = 9;
    cfg.saa.solve_options.relative_mip_gap = 1e-6;
    return cfg;
}

std::size_t count_fields(const std::string& line) { return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1; }

std::size_t populated(const std::string& line) {
    std::size_t n = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) n += !cell.empty();
    return n;
}

}  // namespace

TEST_CASE("young-fleet cell: shape and deterministic agreement", "[experiment]") {
    const auto rows = run_experiment(tiny_config(FleetProfile::Young));
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].method == "stochastic");
    CHECK(rows[1].method == "strict");
    CHECK(rows[2].method == "relaxed");
    for (const auto& r : rows) {
        CHECK_FALSE(r.failed);
        CHECK(r.line == "M1B");
        CHECK(r.fleet == "Young");
        CHECK(r.cost_case == "1");
        CHECK(r.ub_lo <= r.cost);
        CHECK(r.cost <= r.ub_hi);
        CHECK(r.out_of_sample_hash == rows[0].out_of_sample_hash);
    }
    CHECK(rows[0].lb_lo.has_value());
    CHECK(rows[0].gap_percent.has_value());
    CHECK_FALSE(rows[1].lb_lo.has_value());
    CHECK_FALSE(rows[2].gap_percent.has_value());

    // strict and relaxed coincide on a young fleet
    CHECK(rows[1].plan == rows[2].plan);
    CHECK(rows[1].cost == rows[2].cost);
    CHECK(rows[1].n_cor == rows[2].n_cor);

    std::stringstream csv;
    write_results(csv, rows, true);
    std::string header, stoch, strict;
    std::getline(csv, header);
    std::getline(csv, stoch);
    std::getline(csv, strict);
    CHECK(header == kResultsHeader);
    CHECK(count_fields(stoch) == 15);
    CHECK(populated(stoch) == 15);
    CHECK(count_fields(strict) == 15);
    CHECK(populated(strict) == 12);  // lb_lo, lb_hi, gap_percent empty
}

TEST_CASE("results CSV round trip", "[experiment][io]") {
    ResultRow a;
    a.line = "M4";
    a.fleet = "Old";
    a.cost_case = "3";
    a.method = "stochastic";
    a.n_prev = 1.234;
    a.n_cor = 0.5;
    a.cost = 7100.456;
    a.lb_lo = 7000.0;
    a.lb_hi = 7050.0;
    a.ub_lo = 7090.0;
    a.ub_hi = 7110.0;
    a.gap_percent = 1.5;
    ResultRow b = a;
    b.method = "strict";
    b.lb_lo.reset();
    b.lb_hi.reset();
    b.gap_percent.reset();
    ResultRow c = b;
    c.method = "relaxed";
    c.failed = true;

    std::stringstream ss;
    write_results(ss, {a, b, c}, false);
    const std::string text = ss.str();
    const auto back = read_results(ss);
    REQUIRE(back.size() == 3);
    CHECK(back[0].n_prev == 1.23);
    CHECK(back[0].cost == 7100.46);
    CHECK(back[0].lb_lo == 7000.0);
    CHECK_FALSE(back[0].time_s.has_value());
    CHECK_FALSE(back[1].lb_lo.has_value());
    CHECK(back[1].ub_hi == 7110.0);
    CHECK(back[2].failed);
    CHECK(text.find("M4,Old,3,relaxed,,,,,,,,,,,\n") != std::string::npos);

    std::stringstream again;
    write_results(again, back, false);
    CHECK(again.str() == text);

    std::stringstream bad("line,fleet\n");
    CHECK_THROWS(read_results(bad));
}

TEST_CASE("trajectory export", "[experiment][io]") {
    KpiSummary k;
    k.preventive_trajectory.assign(28, 0.5);
    k.corrective_trajectory.assign(28, 0.25);
    k.sla_trajectory.assign(28, 0.0);
    std::stringstream ss;
    write_trajectories(ss, {{"stochastic", k}, {"strict", k}, {"relaxed", k}});
    std::string line;
    std::getline(ss, line);
    CHECK(line == "period,method,kpi,value");
    int rows = 0;
    while (std::getline(ss, line)) ++rows;
    CHECK(rows == 252);
}

TEST_CASE("experiment config from JSON", "[experiment][io]") {
    const auto j = nlohmann::json::parse(R"({
        "lines": ["M4"], "fleet_profiles": ["Old", "Young"], "cases": [2, 3],
        "methods": ["strict"], "scale": 0.5, "seed": 42,
        "saa": {"n_in": 10, "m_reps": 3, "n_out": 100, "mode": "charge-once"},
        "solver": {"time_limit": 60, "mip_rel_gap": 0.001},
        "reliability": {"strict": 0.75}
    })");
    const auto cfg = experiment_config_from_json(j);
    CHECK(cfg.lines == std::vector<Line>{Line::M4});
    CHECK(cfg.fleet_profiles == std::vector<FleetProfile>{FleetProfile::Old, FleetProfile::Young});
    CHECK(cfg.cases == std::vector<CostCase>{CostCase::Case2, CostCase::Case3});
    CHECK(cfg.methods == std::vector<Method>{Method::StrictDeterministic});
    CHECK(cfg.scale == 0.5);
    CHECK(cfg.saa.master_seed == 42);
    CHECK(cfg.saa.n_in == 10);
    CHECK(cfg.saa.m_reps == 3);
    CHECK(cfg.saa.n_out == 100);
    CHECK(cfg.saa.mode == StochObjectiveMode::ChargeOnce);
    CHECK(cfg.saa.solve_options.time_limit == 60.0);
    CHECK(cfg.saa.solve_options.relative_mip_gap == 0.001);
    CHECK(cfg.strict_reliability == 0.75);
    CHECK(cfg.relaxed_reliability == 0.9);

    CHECK_THROWS(experiment_config_from_json(nlohmann::json::parse(R"({"lines": ["M9"]})")));
    CHECK_THROWS(experiment_config_from_json(nlohmann::json::parse(R"({"scale": 2.0})")));
}

TEST_CASE("instance and plan files", "[io]") {
    Instance inst = scale_instance(preset_line(Line::M4), 0.3);
    inst.fleet.initial_ages = sample_fleet_ages(FleetProfile::Old, inst.num_railcars(), 1);
    inst.costs = apply_case(inst.costs, CostCase::Case3);
    const auto back = instance_from_json(to_json(inst));
    CHECK(back.sla.requirements == inst.sla.requirements);
    CHECK(back.fleet.initial_ages == inst.fleet.initial_ages);
    CHECK(back.fleet.track_capacity == inst.fleet.track_capacity);
    CHECK(back.costs.c_s == inst.costs.c_s);
    CHECK(back.horizon.num_periods() == 28);

    const MaintenancePlan plan({0, 3, 28, 0});
    std::stringstream ss;
    write_plan(ss, plan);
    CHECK(ss.str() == "railcar,start\n1,0\n2,3\n3,28\n4,0\n");
    CHECK(read_plan(ss) == plan);
}
