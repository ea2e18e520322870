#pragma once

// Two-stage stochastic maintenance MILP over a finite scenario set.
// First stage: start period z_jt or postponement p_j per railcar.
// Second stage (per scenario): maintenance state m, operational state eta,
// SLA shortfall sigma and extra track capacity gamma.

#include <optional>
#include <string>
#include <vector>

#include "core.hpp"
#include "deterministic.hpp"
#include "milp.hpp"
#include "scenarios.hpp"

namespace railmaint {

/// How the corrective-maintenance cost enters the objective.
///  - LiteralEq2a: C_c * sum_{t=Xi}^{T} (z_jt + p_j), so a postponed railcar
///    that fails pays once per remaining period.
///  - ChargeOnce: C_c * (sum_{t=Xi}^{T} z_jt + p_j [Xi <= T]), the same charge
///    the plan evaluator applies.
enum class StochObjectiveMode { LiteralEq2a, ChargeOnce };

inline const char* to_string(StochObjectiveMode m) {
    return m == StochObjectiveMode::LiteralEq2a ? "literal" : "charge-once";
}
inline StochObjectiveMode parse_mode(std::string_view s) {
    if (s == "literal" || s == "LiteralEq2a") return StochObjectiveMode::LiteralEq2a;
    if (s == "charge-once" || s == "ChargeOnce") return StochObjectiveMode::ChargeOnce;
    throw std::invalid_argument("unknown objective mode: " + std::string(s));
}

struct StochasticModel {
    milp::ModelBuilder builder;
    std::vector<std::vector<milp::VarId>> z;  // [railcar][period]
    std::vector<milp::VarId> postpone;
    // [scenario][railcar][period]
    std::vector<std::vector<std::vector<milp::VarId>>> eta, maint;
    // [scenario][period]
    std::vector<std::vector<milp::VarId>> sla_shortfall, extra_capacity;
};

inline StochasticModel build_stochastic(const Instance& inst, const ScenarioSet& scenarios, StochObjectiveMode mode) {
    using milp::LinExpr;
    using milp::Sense;
    inst.validate(false);
    const CostParams& c = inst.costs;
    const int n = inst.num_railcars();
    const int T = inst.num_periods();
    const int K = scenarios.num_scenarios();
    if (scenarios.num_railcars() != n) throw std::invalid_argument("build_stochastic: scenario/fleet size mismatch");
    if (K < 1) throw std::invalid_argument("build_stochastic: empty scenario set");
    const auto idx = [](int i) { return static_cast<std::size_t>(i); };

    StochasticModel m;
    auto& b = m.builder;
    m.z.resize(idx(n));
    for (int j = 0; j < n; ++j) {
        const auto js = std::to_string(j + 1);
        for (int t = 1; t <= T; ++t) m.z[idx(j)].push_back(b.add_binary("z_" + js + "_" + std::to_string(t)));
        m.postpone.push_back(b.add_binary("p_" + js));
        LinExpr assign(m.postpone[idx(j)]);
        for (auto v : m.z[idx(j)]) assign.add(v);
        b.add_constraint(assign, Sense::Equal, 1.0, "assign_" + js);
    }

    m.eta.resize(idx(K));
    m.maint.resize(idx(K));
    m.sla_shortfall.resize(idx(K));
    m.extra_capacity.resize(idx(K));
    for (int k = 0; k < K; ++k) {
        const double pi = scenarios.probabilities[idx(k)];
        const auto ks = std::to_string(k + 1);
        auto& eta = m.eta[idx(k)];
        auto& mt = m.maint[idx(k)];
        eta.resize(idx(n));
        mt.resize(idx(n));
        for (int j = 0; j < n; ++j) {
            const auto tag = ks + "_" + std::to_string(j + 1) + "_";
            for (int t = 1; t <= T; ++t) {
                eta[idx(j)].push_back(b.add_binary("eta_" + tag + std::to_string(t)));
                mt[idx(j)].push_back(b.add_binary("m_" + tag + std::to_string(t)));
            }
        }
        for (int t = 1; t <= T; ++t) {
            m.sla_shortfall[idx(k)].push_back(b.add_continuous(0.0, milp::kInf, "sigma_" + ks + "_" + std::to_string(t)));
            m.extra_capacity[idx(k)].push_back(b.add_continuous(0.0, milp::kInf, "gamma_" + ks + "_" + std::to_string(t)));
        }

        for (int j = 0; j < n; ++j) {
            const int xi = scenarios.failure_times[idx(j)][idx(k)];
            const auto& z = m.z[idx(j)];
            const auto tag = ks + "_" + std::to_string(j + 1) + "_";
            for (int t = 1; t <= T; ++t) {
                const auto v = mt[idx(j)][idx(t - 1)];
                const auto name = "state_" + tag + std::to_string(t);
                if (t < xi) {
                    // preventive work started in the last Y_p periods
                    LinExpr e(v);
                    for (int e_off = 0; e_off < std::min(c.y_p, t); ++e_off) e.add(z[idx(t - e_off - 1)], -1.0);
                    b.add_constraint(e, Sense::Equal, 0.0, name);
                } else if (t <= xi + c.y_c - 1) {
                    // corrective work, unless preventive finished before t; empty sum -> m = 1
                    LinExpr e(v);
                    const int upto = std::min(t - c.y_p, xi - 1);
                    for (int tp = 1; tp <= upto; ++tp) e.add(z[idx(tp - 1)], 1.0);
                    b.add_constraint(e, Sense::Equal, 1.0, name);
                } else {
                    b.add_constraint(LinExpr(v), Sense::Equal, 0.0, name);
                }
                LinExpr link(eta[idx(j)][idx(t - 1)]);
                link.add(v);
                b.add_constraint(link, Sense::LessEqual, 1.0, "link_" + tag + std::to_string(t));
            }

            // maintenance cost terms
            for (int t = 1; t <= T; ++t)
                b.add_objective(z[idx(t - 1)], pi * (t < xi ? c.c_p : c.c_c));
            if (xi <= T) {
                const double periods = mode == StochObjectiveMode::LiteralEq2a ? (T - xi + 1) : 1.0;
                b.add_objective(m.postpone[idx(j)], pi * c.c_c * periods);
            }
            for (int t = 0; t < T; ++t) b.add_objective(eta[idx(j)][idx(t)], pi * c.c_o);
        }

        for (int t = 1; t <= T; ++t) {
            const auto ts = ks + "_" + std::to_string(t);
            LinExpr cap;
            LinExpr sla(m.sla_shortfall[idx(k)][idx(t - 1)]);
            for (int j = 0; j < n; ++j) {
                cap.add(mt[idx(j)][idx(t - 1)]);
                sla.add(eta[idx(j)][idx(t - 1)]);
            }
            cap.add(m.extra_capacity[idx(k)][idx(t - 1)], -1.0);
            b.add_constraint(cap, Sense::LessEqual, inst.fleet.track_capacity, "track_" + ts);
            b.add_constraint(sla, Sense::GreaterEqual, inst.sla.at(t), "sla_" + ts);
            b.add_objective(m.sla_shortfall[idx(k)][idx(t - 1)], pi * c.c_s);
            b.add_objective(m.extra_capacity[idx(k)][idx(t - 1)], pi * c.c_a);
        }
    }
    return m;
}

/// Fixes the first-stage variables to `plan`, leaving only the recourse free.
inline void fix_first_stage(StochasticModel& m, const MaintenancePlan& plan) {
    const int n = static_cast<int>(m.z.size());
    const int T = n > 0 ? static_cast<int>(m.z[0].size()) : 0;
    plan.validate(n, T);
    for (std::size_t j = 0; j < m.z.size(); ++j) {
        for (std::size_t t = 0; t < m.z[j].size(); ++t)
            m.builder.fix(m.z[j][t], plan.start(j) == static_cast<int>(t) + 1 ? 1.0 : 0.0);
        m.builder.fix(m.postpone[j], plan.postponed(j) ? 1.0 : 0.0);
    }
}

struct StochSolution {
    MaintenancePlan plan;
    milp::SolveResult result;
};

/// Builds and solves; `fixed_plan` pins the first stage when given.
inline StochSolution solve_stochastic(const Instance& inst, const ScenarioSet& scenarios, StochObjectiveMode mode,
                                      const milp::SolveOptions& opts = {},
                                      const std::optional<MaintenancePlan>& fixed_plan = std::nullopt) {
    StochasticModel model = build_stochastic(inst, scenarios, mode);
    if (fixed_plan) fix_first_stage(model, *fixed_plan);
    StochSolution out;
    out.result = milp::solve(model.builder, opts);
    if (!out.result.has_solution())
        throw std::runtime_error(std::string("stochastic model: solve failed (") +
                                 milp::to_string(out.result.status) + ": " + out.result.message + ")");
    out.plan = extract_plan(model.z, out.result);
    return out;
}

}  // namespace railmaint
