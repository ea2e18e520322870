#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include <railmaint/scenarios.hpp>

using namespace railmaint;
using Catch::Approx;

namespace {
Instance uniform_fleet(int n, int age) {
    Instance inst = preset_line(Line::M1B);
    inst.fleet.num_railcars = n;
    inst.fleet.initial_ages.assign(static_cast<std::size_t>(n), age);
    return inst;
}

/// Largest gap between the empirical CDF of `xs` and the discretised
/// conditional law P(Xi <= t) = F(y' + t | y') on t = 1..T (t = T+1 has mass 1).
double ks_distance(const std::vector<int>& xs, const WeibullParams& w, int age, int T) {
    double worst = 0.0;
    for (int t = 1; t <= T; ++t) {
        const double emp = static_cast<double>(std::count_if(xs.begin(), xs.end(), [t](int x) { return x <= t; })) /
                           static_cast<double>(xs.size());
        const double law = conditional_failure_cdf(w, age + t, age);
        worst = std::max(worst, std::abs(emp - law));
    }
    return worst;
}
}  // namespace

TEST_CASE("generate_scenarios is deterministic and well-formed", "[scenarios]") {
    Instance inst = uniform_fleet(6, 30);
    const auto a = generate_scenarios(inst, {}, 1, 99);
    const auto b = generate_scenarios(inst, {}, 1, 99);
    CHECK(a.failure_times == b.failure_times);
    CHECK(a.content_hash() == b.content_hash());

    const auto s = generate_scenarios(inst, {}, 40, 5);
    CHECK(s.num_railcars() == 6);
    CHECK(s.num_scenarios() == 40);
    double total = 0.0;
    for (double p : s.probabilities) {
        CHECK(p == 1.0 / 40);
        total += p;
    }
    CHECK(total == Approx(1.0).margin(1e-12));
    for (const auto& row : s.failure_times)
        for (int x : row) CHECK((x >= 1 && x <= 29));

    CHECK(generate_scenarios(inst, {}, 40, 6).content_hash() != s.content_hash());
    CHECK_THROWS(generate_scenarios(inst, {}, 0, 1));
    inst.fleet.initial_ages.clear();
    CHECK_THROWS(generate_scenarios(inst, {}, 3, 1));
}

TEST_CASE("scenario substreams do not depend on visiting order", "[scenarios][property]") {
    Instance inst = uniform_fleet(9, 40);
    const auto serial = generate_scenarios(inst, {}, 50, 1234, 1);
    const auto parallel = generate_scenarios(inst, {}, 50, 1234, 4);
    CHECK(serial.failure_times == parallel.failure_times);

    // a prefix of scenarios is the same draw regardless of how many are requested
    const auto longer = generate_scenarios(inst, {}, 80, 1234);
    for (int j = 0; j < 9; ++j)
        for (int k = 0; k < 50; ++k) REQUIRE(longer.failure_times[j][k] == serial.failure_times[j][k]);
}

TEST_CASE("old railcars almost surely fail within the horizon", "[scenarios][statistics]") {
    const auto s = generate_scenarios(uniform_fleet(1, 50), {}, 10000, 77);
    const auto& row = s.failure_times[0];
    const double no_fail = static_cast<double>(std::count(row.begin(), row.end(), 29)) / row.size();
    // survival e^{1 - (78/50)^5} = 2.64e-4
    CHECK(no_fail == Approx(std::exp(1.0 - std::pow(78.0 / 50.0, 5.0))).margin(0.02));
}

TEST_CASE("sampled failure times follow the conditional law", "[scenarios][statistics]") {
    const WeibullParams w{};
    const auto s = generate_scenarios(uniform_fleet(1, 10), w, 10000, 31337);
    CHECK(ks_distance(s.failure_times[0], w, 10, 28) < 0.02);
}

TEST_CASE("scenario CSV round trip", "[scenarios][io]") {
    const auto s = generate_scenarios(uniform_fleet(3, 20), {}, 4, 8);
    std::stringstream ss;
    write_scenarios(ss, s);
    const std::string text = ss.str();
    CHECK(text.rfind("railcar,scenario,failure_time\n", 0) == 0);
    const auto back = read_scenarios(ss);
    CHECK(back.failure_times == s.failure_times);
    CHECK(back.num_scenarios() == 4);

    std::stringstream bad("railcar,scenario,failure_time\n1,1,3\n2,1,4\n1,2,5\n");
    CHECK_THROWS(read_scenarios(bad));
}

TEST_CASE("derived seeds separate streams", "[scenarios]") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}
