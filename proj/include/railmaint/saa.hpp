#pragma once

// Sample Average Approximation driver: M in-sample replications give a
// statistical lower bound, the best candidate is scored on a fresh
// out-of-sample set for the upper bound.

#include <chrono>
#include <cstdint>
#include <future>
#include <optional>
#include <stdexcept>
#include <vector>

#include "evaluation.hpp"
#include "scenarios.hpp"
#include "stats.hpp"
#include "stochastic.hpp"

namespace railmaint {

struct SaaConfig {
    int n_in = 150;
    int m_reps = 5;
    int n_out = 1000;
    double theta = 0.05;
    std::uint64_t master_seed = 0;
    StochObjectiveMode mode = StochObjectiveMode::LiteralEq2a;
    milp::SolveOptions solve_options;
    bool rerank_out_of_sample = false;  // pick the candidate with the lowest out-of-sample mean instead
    int workers = 1;                    // concurrent replications

    void validate() const {
        if (n_in < 1) throw std::invalid_argument("SaaConfig: n_in must be >= 1");
        if (m_reps < 2) throw std::invalid_argument("SaaConfig: m_reps must be >= 2");
        if (n_out < 2) throw std::invalid_argument("SaaConfig: n_out must be >= 2");
        if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("SaaConfig: theta must lie in (0, 1)");
        if (workers < 1) throw std::invalid_argument("SaaConfig: workers must be >= 1");
        solve_options.validate();
    }
};

struct SaaReplication {
    double nu = 0.0;
    MaintenancePlan plan;
    milp::SolveStatus status = milp::SolveStatus::Error;
    double best_bound = 0.0;
    double wall_time = 0.0;
    std::uint64_t seed = 0;
};

struct SaaResult {
    std::vector<SaaReplication> replications;
    std::size_t chosen = 0;
    MaintenancePlan plan;
    ConfidenceInterval lb_ci;
    ConfidenceInterval ub_ci;
    double gap_percent = 0.0;
    KpiSummary kpis;
    std::vector<double> omegas;
    std::uint64_t out_of_sample_hash = 0;
    double in_sample_time = 0.0;  // summed replication wall time
};

/// Seed of the in-sample set for replication m (0-based).
inline std::uint64_t replication_seed(std::uint64_t master, int m) {
    return derive_seed(master, static_cast<std::uint32_t>(m) + 1u);
}
/// Seed of the out-of-sample set.
inline std::uint64_t out_of_sample_seed(std::uint64_t master) { return derive_seed(master, 0u); }

/// 100 (ub.hi - lb.lo) / ub.hi
inline double pessimistic_gap(const ConfidenceInterval& lb, const ConfidenceInterval& ub) {
    if (!(ub.hi > 0.0)) throw std::invalid_argument("pessimistic_gap: upper end of UB interval must be positive");
    return 100.0 * (ub.hi - lb.lo) / ub.hi;
}

inline SaaReplication run_replication(const Instance& inst, const WeibullParams& w, const SaaConfig& cfg,
                                      std::uint64_t seed) {
    const ScenarioSet in_sample = generate_scenarios(inst, w, cfg.n_in, seed);
    const auto sol = solve_stochastic(inst, in_sample, cfg.mode, cfg.solve_options);
    SaaReplication rep;
    rep.nu = sol.result.objective_value;
    rep.plan = sol.plan;
    rep.status = sol.result.status;
    rep.best_bound = sol.result.best_bound;
    rep.wall_time = sol.result.wall_time;
    rep.seed = seed;
    return rep;
}

/// `out_of_sample` lets callers share one evaluation sample across methods;
/// otherwise a set of n_out scenarios is drawn from the out-of-sample seed.
inline SaaResult run_saa(const Instance& inst, const WeibullParams& w, const SaaConfig& cfg,
                         const ScenarioSet* out_of_sample = nullptr) {
    cfg.validate();
    inst.validate();
    SaaResult res;
    res.replications.resize(static_cast<std::size_t>(cfg.m_reps));

    if (cfg.workers == 1) {
        for (int m = 0; m < cfg.m_reps; ++m)
            res.replications[static_cast<std::size_t>(m)] =
                run_replication(inst, w, cfg, replication_seed(cfg.master_seed, m));
    } else {
        // batches of `workers` concurrent replications; results land in fixed slots
        for (int first = 0; first < cfg.m_reps; first += cfg.workers) {
            std::vector<std::future<SaaReplication>> batch;
            for (int m = first; m < std::min(cfg.m_reps, first + cfg.workers); ++m)
                batch.push_back(std::async(std::launch::async, run_replication, std::cref(inst), std::cref(w),
                                           std::cref(cfg), replication_seed(cfg.master_seed, m)));
            for (std::size_t i = 0; i < batch.size(); ++i)
                res.replications[static_cast<std::size_t>(first) + i] = batch[i].get();
        }
    }

    std::vector<double> nus;
    for (const auto& r : res.replications) {
        nus.push_back(r.nu);
        res.in_sample_time += r.wall_time;
    }
    res.lb_ci = student_t_mean_interval(nus, cfg.theta);

    std::optional<ScenarioSet> own;
    if (!out_of_sample) {
        own = generate_scenarios(inst, w, cfg.n_out, out_of_sample_seed(cfg.master_seed));
        out_of_sample = &*own;
    }
    res.out_of_sample_hash = out_of_sample->content_hash();

    // ties go to the earliest replication
    res.chosen = 0;
    for (std::size_t m = 1; m < nus.size(); ++m)
        if (nus[m] < nus[res.chosen]) res.chosen = m;

    OutOfSampleResult eval;
    if (cfg.rerank_out_of_sample) {
        std::optional<OutOfSampleResult> best;
        for (std::size_t m = 0; m < res.replications.size(); ++m) {
            auto e = evaluate_out_of_sample(res.replications[m].plan, inst, *out_of_sample);
            if (!best || e.kpis.cost < best->kpis.cost) {
                best = std::move(e);
                res.chosen = m;
            }
        }
        eval = std::move(*best);
    } else {
        eval = evaluate_out_of_sample(res.replications[res.chosen].plan, inst, *out_of_sample);
    }
    res.plan = res.replications[res.chosen].plan;
    res.kpis = std::move(eval.kpis);
    res.omegas = std::move(eval.omegas);
    res.ub_ci = ub_confidence_interval(res.omegas, cfg.theta);
    res.gap_percent = pessimistic_gap(res.lb_ci, res.ub_ci);
    return res;
}

}  // namespace railmaint
