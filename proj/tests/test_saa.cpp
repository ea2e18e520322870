#include <catch2/catch_amalgamated.hpp>

#include <set>

#include <railmaint/saa.hpp>

using namespace railmaint;
using Catch::Approx;

namespace {

Instance small_cell() {
    Instance inst = scale_instance(preset_line(Line::M1B), 0.1);
    inst.costs = apply_case(default_costs(), CostCase::Case1);
    inst.fleet.initial_ages = sample_fleet_ages(FleetProfile::Mixed, inst.num_railcars(), 17);
    return inst;
}

SaaConfig small_saa(std::uint64_t seed) {
    SaaConfig c;
    c.n_in = 6;
    c.m_reps = 2;
    c.n_out = 60;
    c.master_seed = seed;
    c.solve_options.relative_mip_gap = 1e-6;
    return c;
}

}  // namespace

TEST_CASE("quantiles", "[saa][stats]") {
    CHECK(normal_upper_quantile(0.05) == Approx(1.959963984540054).epsilon(1e-12));
    CHECK(student_t_upper_quantile(0.05, 2) == Approx(4.302652729749464).epsilon(1e-12));
    CHECK(student_t_upper_quantile(0.05, 1e6) == Approx(1.959963984540054).epsilon(1e-5));
    CHECK_THROWS(normal_upper_quantile(0.0));
    CHECK_THROWS(student_t_upper_quantile(0.05, 0));
}

TEST_CASE("lower-bound interval from replication objectives", "[saa][stats]") {
    const std::vector<double> nu{10.0, 12.0, 14.0};
    const auto ci = student_t_mean_interval(nu, 0.05);
    CHECK(ci.mid() == Approx(12.0).epsilon(1e-14));
    CHECK(std::sqrt(variance_of_mean(nu)) == Approx(1.1547005383792515).epsilon(1e-12));
    CHECK(ci.lo == Approx(7.0317245765).epsilon(1e-9));
    CHECK(ci.hi == Approx(16.9682754235).epsilon(1e-9));

    const std::vector<double> same{5.0, 5.0};
    const auto flat = student_t_mean_interval(same, 0.05);
    CHECK(flat.lo == 5.0);
    CHECK(flat.hi == 5.0);
}

TEST_CASE("pessimistic gap", "[saa]") {
    CHECK(pessimistic_gap({2503.48, 2511.93}, {2552.52, 2565.57}) == Approx(2.42).margin(0.01));
    CHECK(pessimistic_gap({7066.93, 7096.21}, {7132.39, 7161.98}) == Approx(1.33).margin(0.01));
    CHECK(pessimistic_gap({3.0, 3.0}, {3.0, 3.0}) == 0.0);
    CHECK_THROWS(pessimistic_gap({1, 2}, {0, 0}));
}

TEST_CASE("replication and out-of-sample seeds are distinct", "[saa]") {
    for (std::uint64_t master : {0ull, 1ull, 20240601ull}) {
        std::set<std::uint64_t> seen{out_of_sample_seed(master)};
        for (int m = 0; m < 50; ++m) seen.insert(replication_seed(master, m));
        CHECK(seen.size() == 51);
    }
}

TEST_CASE("identical replications give a degenerate lower-bound interval", "[saa]") {
    const Instance inst = small_cell();
    const SaaConfig cfg = small_saa(3);
    const auto a = run_replication(inst, {}, cfg, 777);
    const auto b = run_replication(inst, {}, cfg, 777);
    CHECK(a.nu == b.nu);
    CHECK(a.plan == b.plan);
    const std::vector<double> nus{a.nu, b.nu};
    const auto ci = student_t_mean_interval(nus, 0.05);
    CHECK(ci.lo == ci.hi);
}

TEST_CASE("run_saa is reproducible and internally consistent", "[saa]") {
    const Instance inst = small_cell();
    const SaaConfig cfg = small_saa(11);
    const auto r1 = run_saa(inst, {}, cfg);
    const auto r2 = run_saa(inst, {}, cfg);
    CHECK(r1.plan == r2.plan);
    CHECK(r1.lb_ci.lo == r2.lb_ci.lo);
    CHECK(r1.ub_ci.hi == r2.ub_ci.hi);
    CHECK(r1.omegas == r2.omegas);

    REQUIRE(r1.replications.size() == 2);
    CHECK(r1.replications[r1.chosen].nu <= r1.replications[1 - r1.chosen].nu);
    CHECK(r1.ub_ci.lo <= r1.kpis.cost);
    CHECK(r1.kpis.cost <= r1.ub_ci.hi);
    CHECK(r1.gap_percent == Approx(pessimistic_gap(r1.lb_ci, r1.ub_ci)));
    CHECK(r1.out_of_sample_hash == generate_scenarios(inst, {}, cfg.n_out, out_of_sample_seed(11)).content_hash());

    SECTION("concurrent replications give the same answer") {
        SaaConfig par = cfg;
        par.workers = 2;
        const auto r3 = run_saa(inst, {}, par);
        CHECK(r3.plan == r1.plan);
        CHECK(r3.lb_ci.lo == r1.lb_ci.lo);
        CHECK(r3.omegas == r1.omegas);
    }
    SECTION("re-ranking picks the best out-of-sample candidate") {
        SaaConfig rr = cfg;
        rr.rerank_out_of_sample = true;
        const auto r4 = run_saa(inst, {}, rr);
        CHECK(r4.kpis.cost <= r1.kpis.cost);
    }
}

TEST_CASE("SAA config validation", "[saa]") {
    SaaConfig c;
    c.m_reps = 1;
    CHECK_THROWS(c.validate());
    c = {};
    c.theta = 1.0;
    CHECK_THROWS(c.validate());
    c = {};
    c.n_out = 1;
    CHECK_THROWS(c.validate());
}
