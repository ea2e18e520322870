#pragma once

// Experiment matrix (line x fleet profile x cost case x method) and the CSV
// reports built from it.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "deterministic.hpp"
#include "evaluation.hpp"
#include "saa.hpp"

namespace railmaint {

enum class Method { Stochastic, StrictDeterministic, RelaxedDeterministic };

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::Stochastic: return "stochastic";
        case Method::StrictDeterministic: return "strict";
        case Method::RelaxedDeterministic: return "relaxed";
    }
    return "?";
}
inline Method parse_method(std::string_view s) {
    if (s == "stochastic" || s == "Stochastic") return Method::Stochastic;
    if (s == "strict" || s == "StrictDeterministic") return Method::StrictDeterministic;
    if (s == "relaxed" || s == "RelaxedDeterministic") return Method::RelaxedDeterministic;
    throw std::invalid_argument("unknown method: " + std::string(s));
}

struct ExperimentConfig {
    std::vector<Line> lines{Line::M1B};
    std::vector<FleetProfile> fleet_profiles{FleetProfile::Mixed};
    std::vector<CostCase> cases{CostCase::Case1};
    std::vector<Method> methods{Method::Stochastic, Method::StrictDeterministic, Method::RelaxedDeterministic};
    double scale = 1.0;
    SaaConfig saa;  // saa.master_seed is the experiment seed
    WeibullParams weibull;
    double strict_reliability = 0.8;
    double relaxed_reliability = 0.9;
    int workers = 1;           // concurrent cells
    bool record_time = false;  // write time_s; off keeps the CSV reproducible byte for byte

    void validate() const {
        if (lines.empty() || fleet_profiles.empty() || cases.empty() || methods.empty())
            throw std::invalid_argument("ExperimentConfig: selections must be non-empty");
        if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("ExperimentConfig: scale must lie in (0, 1]");
        if (workers < 1) throw std::invalid_argument("ExperimentConfig: workers must be >= 1");
        saa.validate();
        weibull.validate();
    }
};

struct ResultRow {
    std::string line, fleet, cost_case, method;
    double n_prev = 0, n_cor = 0, sla_v = 0, track_v = 0, cost = 0;
    std::optional<double> time_s;
    std::optional<double> lb_lo, lb_hi;
    double ub_lo = 0, ub_hi = 0;
    std::optional<double> gap_percent;

    // not serialized
    bool failed = false;
    std::string error;
    KpiSummary kpis;
    MaintenancePlan plan;
    std::uint64_t out_of_sample_hash = 0;
};

namespace detail {
inline std::uint32_t cell_tag(Line l, FleetProfile f, CostCase c) {
    return 1000u + 100u * static_cast<std::uint32_t>(l) + 10u * static_cast<std::uint32_t>(f) +
           static_cast<std::uint32_t>(c);
}
}  // namespace detail

/// Instance for one cell: preset, scaled, case costs, sampled ages.
inline Instance build_cell_instance(Line line, FleetProfile profile, CostCase cost_case, double scale,
                                    std::uint64_t cell_seed) {
    Instance inst = scale_instance(preset_line(line), scale);
    inst.costs = apply_case(default_costs(), cost_case);
    inst.fleet.initial_ages = sample_fleet_ages(profile, inst.num_railcars(), derive_seed(cell_seed, 0xa6e5u));
    inst.label = std::string(to_string(line)) + "/" + std::string(to_string(profile)) + "/case" +
                 std::string(to_string(cost_case));
    return inst;
}

/// All methods of one cell, evaluated on one shared out-of-sample set.
inline std::vector<ResultRow> run_cell(const ExperimentConfig& cfg, Line line, FleetProfile profile, CostCase cc) {
    const std::uint64_t cell_seed = derive_seed(cfg.saa.master_seed, detail::cell_tag(line, profile, cc));
    const Instance inst = build_cell_instance(line, profile, cc, cfg.scale, cell_seed);
    const ScenarioSet oos = generate_scenarios(inst, cfg.weibull, cfg.saa.n_out, out_of_sample_seed(cell_seed));

    std::vector<ResultRow> rows;
    for (Method method : cfg.methods) {
        ResultRow row;
        row.line = std::string(to_string(line));
        row.fleet = std::string(to_string(profile));
        row.cost_case = std::string(to_string(cc));
        row.method = std::string(to_string(method));
        try {
            OutOfSampleResult eval;
            if (method == Method::Stochastic) {
                SaaConfig saa = cfg.saa;
                saa.master_seed = cell_seed;
                SaaResult r = run_saa(inst, cfg.weibull, saa, &oos);
                row.lb_lo = r.lb_ci.lo;
                row.lb_hi = r.lb_ci.hi;
                row.gap_percent = r.gap_percent;
                row.time_s = r.in_sample_time;
                row.plan = r.plan;
                row.out_of_sample_hash = r.out_of_sample_hash;
                eval.kpis = std::move(r.kpis);
                eval.omegas = std::move(r.omegas);
            } else {
                const double rel =
                    method == Method::StrictDeterministic ? cfg.strict_reliability : cfg.relaxed_reliability;
                const DetModelInput input{inst, reliability_intervals(inst, cfg.weibull, rel)};
                const DetSolution sol = solve_deterministic(input, cfg.saa.solve_options);
                row.time_s = sol.result.wall_time;
                row.plan = sol.plan;
                row.out_of_sample_hash = oos.content_hash();
                eval = evaluate_out_of_sample(sol.plan, inst, oos);
            }
            const auto ub = ub_confidence_interval(eval.omegas, cfg.saa.theta);
            row.ub_lo = ub.lo;
            row.ub_hi = ub.hi;
            row.n_prev = eval.kpis.n_prev;
            row.n_cor = eval.kpis.n_cor;
            row.sla_v = eval.kpis.sla_v;
            row.track_v = eval.kpis.track_v;
            row.cost = eval.kpis.cost;
            row.kpis = std::move(eval.kpis);
        } catch (const std::exception& e) {
            row.failed = true;
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Rows are ordered by (line, fleet, case, method) as listed in the config.
inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg, std::ostream* log = nullptr) {
    cfg.validate();
    struct Cell { Line l; FleetProfile f; CostCase c; };
    std::vector<Cell> cells;
    for (Line l : cfg.lines)
        for (FleetProfile f : cfg.fleet_profiles)
            for (CostCase c : cfg.cases) cells.push_back({l, f, c});

    std::vector<std::vector<ResultRow>> per_cell(cells.size());
    auto done = [&](std::size_t i) {
        if (!log) return;
        *log << "[experiment] cell " << i + 1 << "/" << cells.size() << " " << to_string(cells[i].l) << " "
             << to_string(cells[i].f) << " case " << to_string(cells[i].c) << " done\n";
    };
    for (std::size_t first = 0; first < cells.size(); first += static_cast<std::size_t>(cfg.workers)) {
        const std::size_t last = std::min(cells.size(), first + static_cast<std::size_t>(cfg.workers));
        if (cfg.workers == 1) {
            per_cell[first] = run_cell(cfg, cells[first].l, cells[first].f, cells[first].c);
            done(first);
            continue;
        }
        std::vector<std::future<std::vector<ResultRow>>> batch;
        for (std::size_t i = first; i < last; ++i)
            batch.push_back(std::async(std::launch::async, run_cell, std::cref(cfg), cells[i].l, cells[i].f, cells[i].c));
        for (std::size_t i = first; i < last; ++i) {
            per_cell[i] = batch[i - first].get();
            done(i);
        }
    }
    std::vector<ResultRow> rows;
    for (auto& v : per_cell)
        for (auto& r : v) rows.push_back(std::move(r));
    return rows;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr const char* kResultsHeader =
    "line,fleet,case,method,n_prev,n_cor,sla_v,track_v,cost,time_s,lb_lo,lb_hi,ub_lo,ub_hi,gap_percent";

namespace detail {
inline std::string fixed2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    // avoid "-0.00"
    if (std::string_view(buf) == "-0.00") return "0.00";
    return buf;
}
inline std::string fixed2(const std::optional<double>& v) { return v ? fixed2(*v) : std::string{}; }
}  // namespace detail

/// Failed rows keep their labels and leave every numeric field empty.
inline void write_results(std::ostream& os, const std::vector<ResultRow>& rows, bool with_time = true) {
    using detail::fixed2;
    os << kResultsHeader << '\n';
    for (const auto& r : rows) {
        os << r.line << ',' << r.fleet << ',' << r.cost_case << ',' << r.method << ',';
        if (r.failed) {
            os << ",,,,,,,,,,\n";
            continue;
        }
        os << fixed2(r.n_prev) << ',' << fixed2(r.n_cor) << ',' << fixed2(r.sla_v) << ',' << fixed2(r.track_v) << ','
           << fixed2(r.cost) << ',' << (with_time ? fixed2(r.time_s) : std::string{}) << ',' << fixed2(r.lb_lo) << ','
           << fixed2(r.lb_hi) << ',' << fixed2(r.ub_lo) << ',' << fixed2(r.ub_hi) << ',' << fixed2(r.gap_percent)
           << '\n';
    }
}

inline void write_results(const std::string& path, const std::vector<ResultRow>& rows, bool with_time = true) {
    if (rows.empty()) throw std::invalid_argument("write_results: no rows");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_results(out, rows, with_time);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline std::vector<ResultRow> read_results(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kResultsHeader) throw std::runtime_error("results file: bad header");
    std::vector<ResultRow> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (!line.empty() && line.back() == ',') f.emplace_back();
        if (f.size() != 15) throw std::runtime_error("results file: expected 15 fields in '" + line + "'");
        auto num = [](const std::string& s) { return std::stod(s); };
        auto opt = [&](const std::string& s) -> std::optional<double> {
            if (s.empty()) return std::nullopt;
            return num(s);
        };
        ResultRow r;
        r.line = f[0];
        r.fleet = f[1];
        r.cost_case = f[2];
        r.method = f[3];
        if (f[4].empty()) {
            r.failed = true;
        } else {
            r.n_prev = num(f[4]);
            r.n_cor = num(f[5]);
            r.sla_v = num(f[6]);
            r.track_v = num(f[7]);
            r.cost = num(f[8]);
            r.time_s = opt(f[9]);
            r.lb_lo = opt(f[10]);
            r.lb_hi = opt(f[11]);
            r.ub_lo = num(f[12]);
            r.ub_hi = num(f[13]);
            r.gap_percent = opt(f[14]);
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline std::vector<ResultRow> read_results(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_results(in);
}

/// Per-period KPI means, one row per (period, method, kpi).
inline void write_trajectories(std::ostream& os, const std::vector<std::pair<std::string, KpiSummary>>& series) {
    os << "period,method,kpi,value\n";
    if (series.empty()) return;
    const std::size_t T = series.front().second.preventive_trajectory.size();
    for (std::size_t t = 0; t < T; ++t)
        for (const auto& [method, k] : series) {
            os << t + 1 << ',' << method << ",preventive," << detail::fixed2(k.preventive_trajectory.at(t)) << '\n';
            os << t + 1 << ',' << method << ",corrective," << detail::fixed2(k.corrective_trajectory.at(t)) << '\n';
            os << t + 1 << ',' << method << ",sla_violation," << detail::fixed2(k.sla_trajectory.at(t)) << '\n';
        }
}

inline void write_trajectories(const std::string& path,
                               const std::vector<std::pair<std::string, KpiSummary>>& series) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_trajectories(out, series);
    if (!out) throw std::runtime_error("write failed: " + path);
}

// ---------------------------------------------------------------------------
// Config file (JSON). Every key is optional; see README for the schema.

inline ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    try {
        if (j.contains("lines")) {
            cfg.lines.clear();
            for (const auto& s : j["lines"]) cfg.lines.push_back(parse_line(s.get<std::string>()));
        }
        if (j.contains("fleet_profiles")) {
            cfg.fleet_profiles.clear();
            for (const auto& s : j["fleet_profiles"]) cfg.fleet_profiles.push_back(parse_profile(s.get<std::string>()));
        }
        if (j.contains("cases")) {
            cfg.cases.clear();
            for (const auto& s : j["cases"])
                cfg.cases.push_back(parse_case(s.is_number() ? std::to_string(s.get<int>()) : s.get<std::string>()));
        }
        if (j.contains("methods")) {
            cfg.methods.clear();
            for (const auto& s : j["methods"]) cfg.methods.push_back(parse_method(s.get<std::string>()));
        }
        cfg.scale = j.value("scale", cfg.scale);
        cfg.workers = j.value("workers", cfg.workers);
        cfg.record_time = j.value("record_time", cfg.record_time);
        if (j.contains("seed")) cfg.saa.master_seed = j["seed"].get<std::uint64_t>();
        if (j.contains("weibull")) {
            cfg.weibull.alpha = j["weibull"].value("alpha", cfg.weibull.alpha);
            cfg.weibull.beta = j["weibull"].value("beta", cfg.weibull.beta);
        }
        if (j.contains("reliability")) {
            cfg.strict_reliability = j["reliability"].value("strict", cfg.strict_reliability);
            cfg.relaxed_reliability = j["reliability"].value("relaxed", cfg.relaxed_reliability);
        }
        if (j.contains("saa")) {
            const auto& s = j["saa"];
            cfg.saa.n_in = s.value("n_in", cfg.saa.n_in);
            cfg.saa.m_reps = s.value("m_reps", cfg.saa.m_reps);
            cfg.saa.n_out = s.value("n_out", cfg.saa.n_out);
            cfg.saa.theta = s.value("theta", cfg.saa.theta);
            cfg.saa.rerank_out_of_sample = s.value("rerank", cfg.saa.rerank_out_of_sample);
            cfg.saa.workers = s.value("workers", cfg.saa.workers);
            if (s.contains("mode")) cfg.saa.mode = parse_mode(s["mode"].get<std::string>());
        }
        if (j.contains("solver")) {
            const auto& s = j["solver"];
            auto& o = cfg.saa.solve_options;
            o.time_limit = s.value("time_limit", o.time_limit);
            o.thread_count = s.value("threads", o.thread_count);
            if (s.contains("mip_rel_gap")) o.relative_mip_gap = s["mip_rel_gap"].get<double>();
            if (s.contains("seed")) o.solver_seed = s["seed"].get<int>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

inline ExperimentConfig read_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return experiment_config_from_json(j);
}

}  // namespace railmaint
