#pragma once

// Test-only reference implementations. Nothing here calls into the library's
// evaluator or model builders; they are written from the problem statement.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include <railmaint/core.hpp>
#include <railmaint/reliability.hpp>

namespace oracle {

struct NaiveOutcome {
    double cost = 0.0;
    long shortfall = 0;      // railcar-periods below SLA
    long overflow = 0;       // railcar-periods above track capacity
    long prev_periods = 0;   // railcar-periods in preventive work
    long cor_periods = 0;    // railcar-periods in corrective work
};

/// Period-by-period simulation of one scenario.
inline NaiveOutcome simulate(const railmaint::Instance& inst, const std::vector<int>& starts,
                             const std::vector<int>& xi) {
    const int n = inst.fleet.num_railcars;
    const int T = inst.horizon.days * inst.horizon.periods_per_day;
    const auto& c = inst.costs;
    // 0 idle, 1 preventive, 2 corrective
    std::vector<std::vector<int>> state(n, std::vector<int>(T + 1, 0));
    NaiveOutcome out;
    for (int j = 0; j < n; ++j) {
        bool handled = false;
        for (int t = 1; t <= T; ++t) {
            if (!handled && starts[j] == t && t < xi[j]) {
                handled = true;
                out.cost += c.c_p;
                for (int u = t; u < t + c.y_p && u <= T; ++u) state[j][u] = 1;
            }
            if (!handled && t == xi[j]) {
                handled = true;
                out.cost += c.c_c;
                for (int u = t; u < t + c.y_c && u <= T; ++u) state[j][u] = 2;
            }
        }
    }
    for (int t = 1; t <= T; ++t) {
        int busy = 0;
        for (int j = 0; j < n; ++j) {
            if (state[j][t] == 1) ++out.prev_periods;
            if (state[j][t] == 2) ++out.cor_periods;
            busy += state[j][t] != 0;
        }
        const int up = n - busy;
        const int need = inst.sla.requirements[t - 1];
        const int serve = up < need ? up : need;
        const int miss = need - serve;
        const int over = busy > inst.fleet.track_capacity ? busy - inst.fleet.track_capacity : 0;
        out.shortfall += miss;
        out.overflow += over;
        out.cost += c.c_o * serve + c.c_s * miss + c.c_a * over;
    }
    return out;
}

/// Calls f on every plan in {0..T}^n (0 = postponed).
inline void for_each_plan(int n, int T, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> s(n, 0);
    while (true) {
        f(s);
        int j = 0;
        while (j < n && s[j] == T) s[j++] = 0;
        if (j == n) return;
        ++s[j];
    }
}

/// Best deterministic-model objective for a fixed plan, minimising over the
/// continuous and operational variables by hand.
inline double deterministic_cost(const railmaint::Instance& inst, const std::vector<railmaint::MaintenanceInterval>& iv,
                                 const std::vector<int>& starts) {
    const int n = inst.fleet.num_railcars;
    const int T = inst.horizon.days * inst.horizon.periods_per_day;
    const auto& c = inst.costs;
    double cost = 0.0;
    for (int j = 0; j < n; ++j) {
        const int s = starts[j];
        const int p = s == 0 ? 1 : 0;
        const double D = iv[j].due, I = iv[j].end;
        const double tard = std::max(0.0, s + T - D - T * (1 - p));
        const double earl = std::max(0.0, D - s - T * p);
        const double viol = std::max(0.0, tard - (I - D));
        cost += tard + earl + c.c_v * viol + (p ? 0.0 : c.c_p);
    }
    for (int t = 1; t <= T; ++t) {
        int in_pm = 0;
        for (int j = 0; j < n; ++j)
            if (starts[j] != 0 && starts[j] <= t && t <= starts[j] + c.y_p - 1) ++in_pm;
        const int avail = n - in_pm;
        const int need = inst.sla.requirements[t - 1];
        double best = std::numeric_limits<double>::infinity();
        for (int k = 0; k <= avail; ++k) best = std::min(best, c.c_o * k + c.c_s * std::max(0, need - k));
        cost += best + c.c_a * std::max(0, in_pm - inst.fleet.track_capacity);
    }
    return cost;
}

/// Mean simulated cost of a plan across scenarios (scenario-major xi[k][j]).
inline double mean_cost(const railmaint::Instance& inst, const std::vector<int>& starts,
                        const std::vector<std::vector<int>>& xi_by_scenario) {
    double sum = 0.0;
    for (const auto& xi : xi_by_scenario) sum += simulate(inst, starts, xi).cost;
    return sum / static_cast<double>(xi_by_scenario.size());
}

/// Random small instance with integer costs and C_s >= C_o.
inline railmaint::Instance random_instance(std::mt19937_64& rng, int max_railcars, int max_periods) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    railmaint::Instance inst;
    inst.horizon = {1, pick(4, max_periods)};
    const int T = inst.horizon.periods_per_day;
    inst.fleet.num_railcars = pick(1, max_railcars);
    inst.fleet.track_capacity = pick(0, inst.fleet.num_railcars);
    inst.fleet.initial_ages.assign(inst.fleet.num_railcars, 0);
    for (int t = 0; t < T; ++t) inst.sla.requirements.push_back(pick(0, inst.fleet.num_railcars));
    auto& c = inst.costs;
    c.y_p = pick(1, 3);
    c.y_c = pick(c.y_p + 1, 5);
    c.c_o = pick(0, 3);
    c.c_s = pick(static_cast<int>(c.c_o), 60);
    c.c_p = pick(1, 10);
    c.c_c = pick(static_cast<int>(c.c_p) + 1, 50);
    c.c_a = pick(0, 10);
    c.c_v = pick(0, 5);
    return inst;
}

}  // namespace oracle
