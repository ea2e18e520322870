#pragma once

// Scores a fixed maintenance plan against failure scenarios.
//
// Per railcar with scheduled start s (0 = postponed) and failure period xi:
//   1 <= s < xi                    -> preventive, busy [s, s + Y_p - 1]
//   xi <= s <= T, or s = 0, xi <= T -> corrective, busy [xi, xi + Y_c - 1]
//   otherwise                      -> untouched
// Busy windows are cut at T. Per period, with M railcars busy and A = n - M
// available, the cost grows by C_o min(A, SLA) + C_s max(SLA - A, 0)
// + C_a max(M - L, 0).

#include <algorithm>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "scenarios.hpp"
#include "stats.hpp"

namespace railmaint {

enum class MaintenanceKind { None, Preventive, Corrective };

struct EvaluationRecord {
    int scenario = 0;
    double omega = 0.0;

    std::vector<MaintenanceKind> kind;  // per railcar
    std::vector<int> busy_first;        // per railcar; 0 when idle
    std::vector<int> busy_last;

    // per period, index t-1
    std::vector<int> in_maintenance, available, sla_shortfall, track_overflow;
    std::vector<int> preventive_count, corrective_count;

    double maintenance_cost = 0.0;
    double operational_cost = 0.0;
    double sla_cost = 0.0;
    double track_cost = 0.0;
};

struct KpiSummary {
    double n_prev = 0.0;
    double n_cor = 0.0;
    double sla_v = 0.0;
    double track_v = 0.0;
    double cost = 0.0;
    // per-period means over scenarios
    std::vector<double> preventive_trajectory, corrective_trajectory, sla_trajectory;
};

struct OutOfSampleResult {
    KpiSummary kpis;
    std::vector<double> omegas;
};

/// Evaluates `plan` on one scenario given as per-railcar failure periods.
inline EvaluationRecord evaluate_plan(const MaintenancePlan& plan, const Instance& inst, std::span<const int> xi,
                                      int scenario_index = 0) {
    const int n = inst.num_railcars();
    const int T = inst.num_periods();
    const CostParams& c = inst.costs;
    plan.validate(n, T);
    if (static_cast<int>(xi.size()) != n) throw std::invalid_argument("evaluate_plan: one failure time per railcar");
    for (int x : xi)
        if (x < 1 || x > T + 1) throw std::invalid_argument("evaluate_plan: failure time out of [1, T+1]");

    EvaluationRecord r;
    r.scenario = scenario_index;
    r.kind.assign(static_cast<std::size_t>(n), MaintenanceKind::None);
    r.busy_first.assign(static_cast<std::size_t>(n), 0);
    r.busy_last.assign(static_cast<std::size_t>(n), 0);
    r.preventive_count.assign(static_cast<std::size_t>(T), 0);
    r.corrective_count.assign(static_cast<std::size_t>(T), 0);

    for (int j = 0; j < n; ++j) {
        const auto ju = static_cast<std::size_t>(j);
        const int s = plan.start(ju);
        const int fail = xi[ju];
        if (s >= 1 && s < fail) {
            r.kind[ju] = MaintenanceKind::Preventive;
            r.maintenance_cost += c.c_p;
            r.busy_first[ju] = s;
            r.busy_last[ju] = std::min(s + c.y_p - 1, T);
            for (int t = s; t <= r.busy_last[ju]; ++t) ++r.preventive_count[static_cast<std::size_t>(t - 1)];
        } else if ((s >= fail && s <= T) || (s == 0 && fail <= T)) {
            r.kind[ju] = MaintenanceKind::Corrective;
            r.maintenance_cost += c.c_c;
            r.busy_first[ju] = fail;
            r.busy_last[ju] = std::min(fail + c.y_c - 1, T);
            for (int t = fail; t <= r.busy_last[ju]; ++t) ++r.corrective_count[static_cast<std::size_t>(t - 1)];
        }
    }

    r.in_maintenance.resize(static_cast<std::size_t>(T));
    r.available.resize(static_cast<std::size_t>(T));
    r.sla_shortfall.resize(static_cast<std::size_t>(T));
    r.track_overflow.resize(static_cast<std::size_t>(T));
    for (int t = 1; t <= T; ++t) {
        const auto tu = static_cast<std::size_t>(t - 1);
        const int busy = r.preventive_count[tu] + r.corrective_count[tu];
        const int avail = n - busy;
        const int sla = inst.sla.at(t);
        r.in_maintenance[tu] = busy;
        r.available[tu] = avail;
        r.sla_shortfall[tu] = std::max(sla - avail, 0);
        r.track_overflow[tu] = std::max(busy - inst.fleet.track_capacity, 0);
        r.operational_cost += c.c_o * std::min(avail, sla);
        r.sla_cost += c.c_s * r.sla_shortfall[tu];
        r.track_cost += c.c_a * r.track_overflow[tu];
    }
    r.omega = r.maintenance_cost + r.operational_cost + r.sla_cost + r.track_cost;
    return r;
}

/// Runs evaluate_plan on every scenario and aggregates KPIs. KPIs are
/// averaged over all periods (nights included) and then over scenarios.
inline OutOfSampleResult evaluate_out_of_sample(const MaintenancePlan& plan, const Instance& inst,
                                                const ScenarioSet& scenarios, int workers = 1) {
    const int K = scenarios.num_scenarios();
    const int T = inst.num_periods();
    if (K < 1) throw std::invalid_argument("evaluate_out_of_sample: empty scenario set");
    if (scenarios.num_railcars() != inst.num_railcars())
        throw std::invalid_argument("evaluate_out_of_sample: scenario/fleet size mismatch");

    const auto Tu = static_cast<std::size_t>(T);
    std::vector<double> omegas(static_cast<std::size_t>(K));
    // integer tallies per scenario so aggregation is exact and order-free
    std::vector<std::vector<long long>> prev(static_cast<std::size_t>(K)), cor(prev.size()), sla(prev.size()),
        track(prev.size());

    auto run = [&](int k) {
        const auto xi = scenarios.scenario(k);
        const auto rec = evaluate_plan(plan, inst, xi, k);
        const auto ku = static_cast<std::size_t>(k);
        omegas[ku] = rec.omega;
        prev[ku].assign(rec.preventive_count.begin(), rec.preventive_count.end());
        cor[ku].assign(rec.corrective_count.begin(), rec.corrective_count.end());
        sla[ku].assign(rec.sla_shortfall.begin(), rec.sla_shortfall.end());
        track[ku].assign(rec.track_overflow.begin(), rec.track_overflow.end());
    };
    workers = std::clamp(workers, 1, K);
    if (workers == 1) {
        for (int k = 0; k < K; ++k) run(k);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                for (int k = w; k < K; k += workers) run(k);
            });
    }

    OutOfSampleResult out;
    KpiSummary& s = out.kpis;
    std::vector<long long> prev_t(Tu, 0), cor_t(Tu, 0), sla_t(Tu, 0);
    long long track_total = 0;
    for (std::size_t k = 0; k < omegas.size(); ++k)
        for (std::size_t t = 0; t < Tu; ++t) {
            prev_t[t] += prev[k][t];
            cor_t[t] += cor[k][t];
            sla_t[t] += sla[k][t];
            track_total += track[k][t];
        }
    const double KT = static_cast<double>(K) * T;
    long long prev_total = 0, cor_total = 0, sla_total = 0;
    for (std::size_t t = 0; t < Tu; ++t) {
        prev_total += prev_t[t];
        cor_total += cor_t[t];
        sla_total += sla_t[t];
        s.preventive_trajectory.push_back(static_cast<double>(prev_t[t]) / K);
        s.corrective_trajectory.push_back(static_cast<double>(cor_t[t]) / K);
        s.sla_trajectory.push_back(static_cast<double>(sla_t[t]) / K);
    }
    s.n_prev = static_cast<double>(prev_total) / KT;
    s.n_cor = static_cast<double>(cor_total) / KT;
    s.sla_v = static_cast<double>(sla_total) / KT;
    s.track_v = static_cast<double>(track_total) / KT;
    s.cost = sample_mean(omegas);
    out.omegas = std::move(omegas);
    return out;
}

/// Upper-bound interval mu_U +- z_{theta/2} sigma_U.
inline ConfidenceInterval ub_confidence_interval(std::span<const double> omegas, double theta) {
    if (omegas.size() < 2) throw std::invalid_argument("ub_confidence_interval: need at least 2 values");
    return normal_mean_interval(omegas, theta);
}

}  // namespace railmaint
