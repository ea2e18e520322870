#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <set>

#include <railmaint/core.hpp>

using namespace railmaint;
using Catch::Approx;

namespace {
std::vector<int> day(const Instance& inst, int d) {
    const auto& r = inst.sla.requirements;
    return {r.begin() + 4 * (d - 1), r.begin() + 4 * d};
}
}  // namespace

TEST_CASE("preset_line builds the weekly SLA tables", "[core][preset]") {
    const Instance m1b = preset_line(Line::M1B);
    const Instance m4 = preset_line(Line::M4);

    REQUIRE(m1b.num_periods() == 28);
    REQUIRE(m1b.sla.requirements.size() == 28);
    CHECK(day(m1b, 1) == std::vector<int>{0, 45, 50, 49});
    CHECK(day(m1b, 7) == std::vector<int>{12, 40, 43, 41});
    CHECK(day(m4, 6) == std::vector<int>{11, 55, 66, 56});
    CHECK(m1b.num_railcars() == 57);
    CHECK(m1b.fleet.track_capacity == 12);
    CHECK(m4.num_railcars() == 74);
    CHECK(m4.fleet.track_capacity == 15);
    CHECK_FALSE(m1b.fleet.ages_set());

    SECTION("weekly totals") {
        CHECK(m1b.sla.total() == 5 * 144 + 151 + 136);
        CHECK(m1b.sla.total() == 1007);
        CHECK(m4.sla.total() == 1332);
    }
    SECTION("weekdays repeat") {
        for (int d = 2; d <= 5; ++d) CHECK(day(m4, d) == day(m4, 1));
    }
}

TEST_CASE("apply_case sets the SLA penalty", "[core][costs]") {
    const CostParams base = default_costs();
    CHECK(base.c_o == 2.0);
    CHECK(base.c_v == 4.0);
    CHECK(base.c_c == 40.0);
    CHECK(base.c_p == 8.0);
    CHECK(base.c_a == 8.0);
    CHECK(base.y_p == 3);
    CHECK(base.y_c == 5);

    CHECK(apply_case(base, CostCase::Case1).c_s == 60.0);
    CHECK(apply_case(base, CostCase::Case2).c_s == 40.0);
    CHECK(apply_case(base, CostCase::Case3).c_s == Approx(80.0 / 3.0).epsilon(1e-15));

    SECTION("other fields untouched and input not mutated") {
        CostParams in = base;
        in.c_s = -1;  // sentinel
        const CostParams out = apply_case(in, CostCase::Case3);
        CHECK(in.c_s == -1);
        CostParams a = out, b = in;
        a.c_s = b.c_s = 0;
        CHECK(a.c_o == b.c_o);
        CHECK(a.c_p == b.c_p);
        CHECK(a.c_c == b.c_c);
        CHECK(a.c_a == b.c_a);
        CHECK(a.c_v == b.c_v);
        CHECK(a.y_p == b.y_p);
        CHECK(a.y_c == b.y_c);
        CHECK(apply_case(out, CostCase::Case3).c_s == out.c_s);
    }
}

TEST_CASE("sample_fleet_ages respects profile ranges", "[core][ages]") {
    auto young = sample_fleet_ages(FleetProfile::Young, 5, 11);
    REQUIRE(young.size() == 5);
    for (int a : young) CHECK((a >= 10 && a <= 20));

    auto old = sample_fleet_ages(FleetProfile::Old, 1000, 12);
    CHECK(*std::min_element(old.begin(), old.end()) >= 50);
    CHECK(*std::max_element(old.begin(), old.end()) <= 60);
    // all 11 values of the support show up in 1000 draws
    CHECK(std::set<int>(old.begin(), old.end()).size() == 11);

    auto mixed = sample_fleet_ages(FleetProfile::Mixed, 10000, 13);
    const double mean = std::accumulate(mixed.begin(), mixed.end(), 0.0) / mixed.size();
    CHECK(mean == Approx(35.0).margin(1.5));

    SECTION("seeded reproducibility") {
        CHECK(sample_fleet_ages(FleetProfile::Mixed, 50, 7) == sample_fleet_ages(FleetProfile::Mixed, 50, 7));
        CHECK(sample_fleet_ages(FleetProfile::Mixed, 50, 7) != sample_fleet_ages(FleetProfile::Mixed, 50, 8));
    }
    CHECK_THROWS_AS(sample_fleet_ages(FleetProfile::Young, 0, 1), std::invalid_argument);
}

TEST_CASE("instance validation", "[core]") {
    Instance inst = preset_line(Line::M1B);
    CHECK_THROWS(inst.validate());  // ages missing
    CHECK_NOTHROW(inst.validate(false));
    inst.fleet.initial_ages.assign(57, 10);
    CHECK_NOTHROW(inst.validate());

    SECTION("SLA length mismatch") {
        inst.sla.requirements.pop_back();
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
    SECTION("cost ordering") {
        inst.costs.y_p = 5;
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
    SECTION("negative age") {
        inst.fleet.initial_ages[3] = -1;
        CHECK_THROWS_AS(inst.validate(), std::invalid_argument);
    }
}

TEST_CASE("maintenance plan holds one assignment per railcar", "[core][plan]") {
    MaintenancePlan p = MaintenancePlan::all_postponed(3);
    p.schedule(1, 4);
    CHECK(p.postponed(0));
    CHECK(p.start(1) == 4);
    CHECK_NOTHROW(p.validate(3, 8));
    CHECK_THROWS(p.validate(4, 8));
    CHECK_THROWS(p.validate(3, 3));
}

TEST_CASE("scale_instance shrinks fleet, SLA and track capacity", "[core][scale]") {
    const Instance s = scale_instance(preset_line(Line::M1B), 0.2);
    CHECK(s.num_railcars() == 12);
    CHECK(s.fleet.track_capacity == 3);
    CHECK(day(s, 1) == std::vector<int>{0, 9, 10, 10});
    CHECK(day(s, 6) == std::vector<int>{2, 8, 10, 9});
    CHECK_THROWS(scale_instance(s, 0.0));
    CHECK(scale_instance(s, 1.0).sla.requirements == s.sla.requirements);
}
