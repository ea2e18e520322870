#pragma once

// Preventive-maintenance MILP driven by reliability-based intervals. Each
// railcar is scheduled once or postponed; deviation from the preferred
// interval [D_j, I_j] costs one unit per period of earliness/tardiness plus
// C_v per period beyond I_j.

#include <string>
#include <vector>

#include "core.hpp"
#include "milp.hpp"
#include "reliability.hpp"

namespace railmaint {

struct DetModelInput {
    Instance instance;
    std::vector<MaintenanceInterval> intervals;  // one per railcar

    void validate() const {
        instance.validate(false);
        if (static_cast<int>(intervals.size()) != instance.num_railcars())
            throw std::invalid_argument("DetModelInput: one interval per railcar required");
        for (const auto& iv : intervals)
            if (iv.due < 1 || iv.end < iv.due) throw std::invalid_argument("DetModelInput: invalid interval");
    }
};

/// Intervals for every railcar of `instance` at reliability level r.
inline std::vector<MaintenanceInterval> reliability_intervals(const Instance& instance, const WeibullParams& w,
                                                              double r) {
    if (!instance.fleet.ages_set()) throw std::invalid_argument("reliability_intervals: fleet ages not set");
    std::vector<MaintenanceInterval> out;
    out.reserve(instance.fleet.initial_ages.size());
    for (int age : instance.fleet.initial_ages) out.push_back(maintenance_interval(w, r, age));
    return out;
}

/// Builder plus handles to every decision variable. Period index t maps to [t-1].
struct DeterministicModel {
    milp::ModelBuilder builder;
    std::vector<std::vector<milp::VarId>> z, eta;  // [railcar][period]
    std::vector<milp::VarId> postpone, start, tardiness, earliness, violation;
    std::vector<milp::VarId> sla_shortfall, extra_capacity;  // [period]
};

inline DeterministicModel build_deterministic(const DetModelInput& input) {
    using milp::LinExpr;
    using milp::Sense;
    input.validate();
    const Instance& inst = input.instance;
    const CostParams& c = inst.costs;
    const int n = inst.num_railcars();
    const int T = inst.num_periods();
    const auto idx = [](int i) { return static_cast<std::size_t>(i); };

    DeterministicModel m;
    auto& b = m.builder;
    m.z.resize(idx(n));
    m.eta.resize(idx(n));
    for (int j = 0; j < n; ++j) {
        const auto js = std::to_string(j + 1);
        for (int t = 1; t <= T; ++t) m.z[idx(j)].push_back(b.add_binary("z_" + js + "_" + std::to_string(t)));
        for (int t = 1; t <= T; ++t) m.eta[idx(j)].push_back(b.add_binary("eta_" + js + "_" + std::to_string(t)));
        m.postpone.push_back(b.add_binary("p_" + js));
        m.start.push_back(b.add_continuous(0.0, T, "s_" + js));
        m.tardiness.push_back(b.add_continuous(0.0, milp::kInf, "t_" + js));
        m.earliness.push_back(b.add_continuous(0.0, milp::kInf, "e_" + js));
        m.violation.push_back(b.add_continuous(0.0, milp::kInf, "v_" + js));
    }
    for (int t = 1; t <= T; ++t) {
        m.sla_shortfall.push_back(b.add_continuous(0.0, milp::kInf, "sigma_" + std::to_string(t)));
        m.extra_capacity.push_back(b.add_continuous(0.0, milp::kInf, "gamma_" + std::to_string(t)));
    }

    // Objective
    for (int j = 0; j < n; ++j) {
        for (int t = 0; t < T; ++t) {
            b.add_objective(m.eta[idx(j)][idx(t)], c.c_o);
            b.add_objective(m.z[idx(j)][idx(t)], c.c_p);
        }
        b.add_objective(m.tardiness[idx(j)], 1.0);
        b.add_objective(m.earliness[idx(j)], 1.0);
        b.add_objective(m.violation[idx(j)], c.c_v);
    }
    for (int t = 0; t < T; ++t) {
        b.add_objective(m.sla_shortfall[idx(t)], c.c_s);
        b.add_objective(m.extra_capacity[idx(t)], c.c_a);
    }

    for (int j = 0; j < n; ++j) {
        const auto js = std::to_string(j + 1);
        const auto& z = m.z[idx(j)];
        const double due = input.intervals[idx(j)].due;
        const double end = input.intervals[idx(j)].end;

        LinExpr assign(m.postpone[idx(j)]);
        for (auto v : z) assign.add(v);
        b.add_constraint(assign, Sense::Equal, 1.0, "assign_" + js);

        // t_j >= s_j + T - D_j - T(1 - p_j)
        LinExpr tard(m.tardiness[idx(j)]);
        tard.add(m.start[idx(j)], -1.0).add(m.postpone[idx(j)], -T);
        b.add_constraint(tard, Sense::GreaterEqual, -due, "tardiness_" + js);

        // e_j >= D_j - s_j - T p_j
        LinExpr earl(m.earliness[idx(j)]);
        earl.add(m.start[idx(j)], 1.0).add(m.postpone[idx(j)], T);
        b.add_constraint(earl, Sense::GreaterEqual, due, "earliness_" + js);

        LinExpr viol(m.tardiness[idx(j)]);
        viol.add(m.violation[idx(j)], -1.0);
        b.add_constraint(viol, Sense::LessEqual, end - due, "interval_" + js);

        LinExpr start(m.start[idx(j)]);
        for (int t = 1; t <= T; ++t) start.add(z[idx(t - 1)], -t);
        b.add_constraint(start, Sense::Equal, 0.0, "start_" + js);

        // eta_jt <= 1 - sum_{e < Y_p} z_{j,t-e}; terms before period 1 are dropped.
        for (int t = 1; t <= T; ++t) {
            LinExpr avail(m.eta[idx(j)][idx(t - 1)]);
            for (int e = 0; e < c.y_p && t - e >= 1; ++e) avail.add(z[idx(t - e - 1)]);
            b.add_constraint(avail, Sense::LessEqual, 1.0, "avail_" + js + "_" + std::to_string(t));
        }
    }

    for (int t = 1; t <= T; ++t) {
        const auto ts = std::to_string(t);
        LinExpr sla(m.sla_shortfall[idx(t - 1)]);
        for (int j = 0; j < n; ++j) sla.add(m.eta[idx(j)][idx(t - 1)]);
        b.add_constraint(sla, Sense::GreaterEqual, inst.sla.at(t), "sla_" + ts);

        LinExpr cap;
        for (int j = 0; j < n; ++j)
            for (int e = 0; e < c.y_p && t - e >= 1; ++e) cap.add(m.z[idx(j)][idx(t - e - 1)]);
        cap.add(m.extra_capacity[idx(t - 1)], -1.0);
        b.add_constraint(cap, Sense::LessEqual, inst.fleet.track_capacity, "track_" + ts);
    }
    return m;
}

/// Reads the plan (z, p) out of a solution vector.
inline MaintenancePlan extract_plan(const std::vector<std::vector<milp::VarId>>& z, const milp::SolveResult& res) {
    std::vector<int> starts(z.size(), MaintenancePlan::kPostponed);
    for (std::size_t j = 0; j < z.size(); ++j)
        for (std::size_t t = 0; t < z[j].size(); ++t)
            if (res.value(z[j][t]) > 0.5) starts[j] = static_cast<int>(t) + 1;
    return MaintenancePlan(std::move(starts));
}

struct DetSolution {
    MaintenancePlan plan;
    DetDiagnostics diagnostics;
    milp::SolveResult result;
};

inline DetDiagnostics extract_diagnostics(const DeterministicModel& m, const milp::SolveResult& res) {
    DetDiagnostics d;
    auto read = [&](const std::vector<milp::VarId>& vs) {
        std::vector<double> out;
        out.reserve(vs.size());
        for (auto v : vs) out.push_back(res.value(v));
        return out;
    };
    d.start = read(m.start);
    d.earliness = read(m.earliness);
    d.tardiness = read(m.tardiness);
    d.violation = read(m.violation);
    d.sla_shortfall = read(m.sla_shortfall);
    d.extra_capacity = read(m.extra_capacity);
    for (const auto& row : m.eta) {
        std::vector<int> flags;
        for (auto v : row) flags.push_back(res.value(v) > 0.5 ? 1 : 0);
        d.operational.push_back(std::move(flags));
    }
    return d;
}

/// Recomputes the deterministic objective from an extracted plan and diagnostics.
inline double deterministic_objective(const Instance& inst, const MaintenancePlan& plan, const DetDiagnostics& d) {
    const CostParams& c = inst.costs;
    double total = 0.0;
    for (const auto& row : d.operational)
        for (int f : row) total += c.c_o * f;
    for (double s : d.sla_shortfall) total += c.c_s * s;
    for (double g : d.extra_capacity) total += c.c_a * g;
    for (std::size_t j = 0; j < plan.size(); ++j) {
        if (!plan.postponed(j)) total += c.c_p;
        total += d.tardiness[j] + d.earliness[j] + c.c_v * d.violation[j];
    }
    return total;
}

inline DetSolution solve_deterministic(const DetModelInput& input, const milp::SolveOptions& opts = {}) {
    const DeterministicModel model = build_deterministic(input);
    DetSolution out;
    out.result = milp::solve(model.builder, opts);
    if (!out.result.has_solution())
        throw std::runtime_error(std::string("deterministic model: solve failed (") +
                                 milp::to_string(out.result.status) + ": " + out.result.message + ")");
    out.plan = extract_plan(model.z, out.result);
    out.diagnostics = extract_diagnostics(model, out.result);
    return out;
}

}  // namespace railmaint
