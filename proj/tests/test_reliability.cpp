#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <railmaint/reliability.hpp>

using namespace railmaint;
using Catch::Approx;

namespace {
const WeibullParams kPaper{50.0, 5.0};
}

TEST_CASE("conditional failure CDF", "[reliability]") {
    CHECK(conditional_failure_cdf(kPaper, 30, 30) == 0.0);
    // Reference values from 40-digit arithmetic.
    CHECK(conditional_failure_cdf(kPaper, 50, 0) == Approx(0.6321205588285577).epsilon(1e-13));
    CHECK(conditional_failure_cdf(kPaper, 50, 30) == Approx(0.6023726425090477).epsilon(1e-13));

    CHECK_THROWS_AS(conditional_failure_cdf(kPaper, 10, 20), std::invalid_argument);
    CHECK_THROWS_AS(conditional_failure_cdf(kPaper, 10, -1), std::invalid_argument);
    CHECK_THROWS_AS(conditional_failure_cdf({0.0, 5.0}, 10, 1), std::invalid_argument);
}

TEST_CASE("conditional CDF properties", "[reliability][property]") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> age(0.0, 80.0), step(0.0, 30.0), unit(1e-9, 1 - 1e-9);
    for (int i = 0; i < 2000; ++i) {
        const double yp = age(rng);
        const double y1 = yp + step(rng);
        const double y2 = y1 + step(rng);
        const double F1 = conditional_failure_cdf(kPaper, y1, yp);
        const double F2 = conditional_failure_cdf(kPaper, y2, yp);
        REQUIRE(F1 >= 0.0);
        REQUIRE(F1 <= 1.0);  // saturates in double precision for very old railcars
        REQUIRE(F2 >= F1);
        // larger scale means slower wear
        if (y1 > yp && yp > 0) REQUIRE(conditional_failure_cdf({60.0, 5.0}, y1, yp) <= F1);
        // unconditional at y' = 0
        REQUIRE(conditional_failure_cdf(kPaper, y1, 0.0) ==
                Approx(1.0 - std::exp(-std::pow(y1 / 50.0, 5.0))).margin(1e-14));
        // inverse round trip
        const double u = unit(rng);
        const double x = conditional_failure_quantile(kPaper, yp, u);
        REQUIRE(conditional_failure_cdf(kPaper, x, yp) == Approx(u).margin(1e-9));
    }
}

TEST_CASE("sample_failure_time", "[reliability][sampling]") {
    // -ln(1-u) = 1 gives age 50 -> 50 periods out, capped at T+1.
    CHECK(sample_failure_time(kPaper, 0, 28, 1.0 - std::exp(-1.0)) == 29);
    // u -> 0 with age 10 gives raw 0; clamped to 1
    CHECK(sample_failure_time(kPaper, 10, 28, 1e-15) == 1);
    // ceil(50 (1 + ln 2)^{1/5}) - 50 = ceil(55.553) - 50
    CHECK(sample_failure_time(kPaper, 50, 28, 0.5) == 6);

    CHECK_THROWS_AS(sample_failure_time(kPaper, 10, 28, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(sample_failure_time(kPaper, 10, 28, 1.0), std::invalid_argument);

    SECTION("monotone in u and within support") {
        for (int age : {0, 10, 30, 50, 60}) {
            int prev = 0;
            for (int i = 1; i < 1000; ++i) {
                const int xi = sample_failure_time(kPaper, age, 28, i / 1000.0);
                REQUIRE(xi >= prev);
                REQUIRE(xi >= 1);
                REQUIRE(xi <= 29);
                prev = xi;
            }
        }
    }
}

TEST_CASE("reliability_time", "[reliability][interval]") {
    // 50 (-ln 0.2)^0.2 = 54.9927, 50 (ln 10)^0.2 = 59.0763
    CHECK(reliability_time(kPaper, 0.8) == 55);
    CHECK(reliability_time(kPaper, 0.9) == 60);
    CHECK(reliability_time({1.0, 1.0}, 1.0 - std::exp(-1.0)) == 1);
    CHECK_THROWS_AS(reliability_time(kPaper, 1.0), std::invalid_argument);
    int prev = 0;
    for (int i = 1; i < 100; ++i) {
        const int tau = reliability_time(kPaper, i / 100.0);
        REQUIRE(tau >= prev);
        prev = tau;
    }
}

TEST_CASE("maintenance_interval reproduces the reliability windows", "[reliability][interval]") {
    using MI = MaintenanceInterval;
    CHECK(maintenance_interval(kPaper, 0.8, 10) == MI{48, 51});
    CHECK(maintenance_interval(kPaper, 0.8, 30) == MI{28, 31});
    CHECK(maintenance_interval(kPaper, 0.8, 50) == MI{8, 11});
    CHECK(maintenance_interval(kPaper, 0.9, 10) == MI{53, 56});
    CHECK(maintenance_interval(kPaper, 0.9, 30) == MI{33, 36});
    CHECK(maintenance_interval(kPaper, 0.9, 50) == MI{13, 16});

    SECTION("width is 3 for unclamped paper defaults") {
        for (int age = 0; age <= 47; ++age) {
            const auto iv = maintenance_interval(kPaper, 0.8, age);
            REQUIRE(iv.end - iv.due == 3);
        }
    }
    SECTION("very old railcars are clamped") {
        const auto iv = maintenance_interval(kPaper, 0.8, 60);  // raw due = -2, end = 1
        CHECK(iv.due == 1);
        CHECK(iv.end == 1);
        const auto iv2 = maintenance_interval(kPaper, 0.8, 80);
        CHECK(iv2.due == 1);
        CHECK(iv2.end >= iv2.due);
    }
}
