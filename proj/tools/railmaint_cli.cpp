// railmaint command-line front end.
//
// Exit codes: 0 success, 1 a solve or row failed, 2 bad configuration or input.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <railmaint/railmaint.hpp>

namespace fs = std::filesystem;
using namespace railmaint;

namespace {

constexpr int kOk = 0;
constexpr int kRowFailure = 1;
constexpr int kConfigError = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Solver flags shared by every subcommand that solves something.
struct SolverFlags {
    std::optional<double> time_limit, mip_gap;
    std::optional<int> threads, solver_seed;
    bool verbose = false;

    void attach(CLI::App* app) {
        app->add_option("--time-limit", time_limit, "Solver time limit per solve (seconds)");
        app->add_option("--mip-gap", mip_gap, "Relative MIP gap");
        app->add_option("--threads", threads, "Solver threads");
        app->add_option("--solver-seed", solver_seed, "Solver random seed");
        app->add_flag("--solver-log", verbose, "Print the solver log");
    }
    void apply(milp::SolveOptions& o) const {
        if (time_limit) o.time_limit = *time_limit;
        if (mip_gap) o.relative_mip_gap = *mip_gap;
        if (threads) o.thread_count = *threads;
        if (solver_seed) o.solver_seed = *solver_seed;
        if (verbose) o.log_to_console = true;
    }
};

Instance load_instance(const std::string& path) {
    try {
        Instance inst = read_instance(path);
        inst.validate();
        return inst;
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

ScenarioSet load_or_generate(const Instance& inst, const std::string& path, int count, std::optional<std::uint64_t> seed,
                             const WeibullParams& w) {
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open scenarios: " + path);
        ScenarioSet s = read_scenarios(in);
        if (s.num_railcars() != inst.num_railcars()) throw ConfigError(path + ": railcar count does not match instance");
        for (const auto& row : s.failure_times)
            for (int x : row)
                if (x < 1 || x > inst.num_periods() + 1) throw ConfigError(path + ": failure time outside [1, T+1]");
        return s;
    }
    if (!seed) throw ConfigError("either --scenarios or --seed is required");
    return generate_scenarios(inst, w, count, *seed);
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

void print_kpis(std::ostream& os, const KpiSummary& k, const ConfidenceInterval& ub) {
    char buf[256];
    std::snprintf(buf, sizeof buf, "cost %.2f  ub [%.2f, %.2f]  n_prev %.2f  n_cor %.2f  sla_v %.2f  track_v %.2f\n",
                  k.cost, ub.lo, ub.hi, k.n_prev, k.n_cor, k.sla_v, k.track_v);
    os << buf;
}

// ---------------------------------------------------------------------------

struct PresetCmd {
    std::string line = "M1B", fleet, cost_case = "1", output;
    double scale = 1.0;
    std::optional<std::uint64_t> seed;

    void attach(CLI::App& root) {
        auto* c = root.add_subcommand("preset", "Write a preset instance as JSON");
        c->add_option("--line", line, "M1B or M4")->capture_default_str();
        c->add_option("--scale", scale, "Down-scaling factor in (0, 1]")->capture_default_str();
        c->add_option("--case", cost_case, "Cost case 1, 2 or 3")->capture_default_str();
        c->add_option("--fleet", fleet, "Young, Mixed or Old; samples initial ages (needs --seed)");
        c->add_option("--seed", seed, "Seed for the age sample");
        c->add_option("-o,--output", output, "Output file (default: stdout)");
        c->callback([this] { rc = run(); });
        cmd = c;
    }
    int run() {
        Instance inst;
        try {
            inst = scale_instance(preset_line(parse_line(line)), scale);
            inst.costs = apply_case(inst.costs, parse_case(cost_case));
            inst.label = std::string(to_string(parse_line(line)));
            if (!fleet.empty()) {
                if (!seed) throw ConfigError("--fleet needs --seed");
                inst.fleet.initial_ages = sample_fleet_ages(parse_profile(fleet), inst.num_railcars(), *seed);
            }
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const std::string text = to_json(inst).dump(2) + "\n";
        if (output.empty()) {
            std::cout << text;
        } else {
            open_out(output) << text;
            std::cerr << "[preset] wrote " << output << "\n";
        }
        return kOk;
    }
    CLI::App* cmd = nullptr;
    int rc = kOk;
};

struct ScenariosCmd {
    std::string instance, output;
    int count = 150;
    std::uint64_t seed = 0;
    WeibullParams w;
    int workers = 1;

    void attach(CLI::App& root) {
        auto* c = root.add_subcommand("scenarios", "Sample failure scenarios for an instance");
        c->add_option("--instance", instance, "Instance JSON")->required();
        c->add_option("--count", count, "Number of scenarios")->capture_default_str();
        c->add_option("--seed", seed, "Master seed")->required();
        c->add_option("--alpha", w.alpha, "Weibull scale")->capture_default_str();
        c->add_option("--beta", w.beta, "Weibull shape")->capture_default_str();
        c->add_option("--workers", workers, "Sampling threads")->capture_default_str();
        c->add_option("-o,--output", output, "Output CSV (default: stdout)");
        c->callback([this] { rc = run(); });
    }
    int run() {
        const Instance inst = load_instance(instance);
        ScenarioSet s;
        try {
            s = generate_scenarios(inst, w, count, seed, workers);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (output.empty()) {
            write_scenarios(std::cout, s);
        } else {
            auto out = open_out(output);
            write_scenarios(out, s);
            std::cerr << "[scenarios] " << count << " scenarios -> " << output << "\n";
        }
        return kOk;
    }
    int rc = kOk;
};

struct SolveDetCmd {
    std::string instance, output, lp;
    double reliability = 0.8;
    WeibullParams w;
    SolverFlags solver;

    void attach(CLI::App& root) {
        auto* c = root.add_subcommand("solve-det", "Solve the deterministic interval model");
        c->add_option("--instance", instance, "Instance JSON with initial ages")->required();
        c->add_option("--reliability", reliability, "Target reliability (0.8 strict, 0.9 relaxed)")->capture_default_str();
        c->add_option("--alpha", w.alpha, "Weibull scale")->capture_default_str();
        c->add_option("--beta", w.beta, "Weibull shape")->capture_default_str();
        c->add_option("-o,--output", output, "Plan CSV (default: stdout)");
        c->add_option("--export-lp", lp, "Also write the model in LP format");
        solver.attach(c);
        c->callback([this] { rc = run(); });
    }
    int run() {
        const Instance inst = load_instance(instance);
        milp::SolveOptions opts;
        solver.apply(opts);
        DetModelInput input;
        try {
            input = {inst, reliability_intervals(inst, w, reliability)};
            opts.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        if (!lp.empty()) milp::export_lp(build_deterministic(input).builder, lp);
        std::cerr << "[solve-det] solving " << inst.num_railcars() << " railcars, R=" << reliability << "\n";
        DetSolution sol;
        try {
            sol = solve_deterministic(input, opts);
        } catch (const std::runtime_error& e) {
            std::cerr << "[solve-det] " << e.what() << "\n";
            return kRowFailure;
        }
        std::cerr << "[solve-det] " << milp::to_string(sol.result.status) << " objective " << sol.result.objective_value
                  << " in " << sol.result.wall_time << " s\n";
        if (output.empty()) write_plan(std::cout, sol.plan);
        else write_plan(output, sol.plan);
        return sol.result.status == milp::SolveStatus::Optimal ? kOk : kRowFailure;
    }
    int rc = kOk;
};

struct SolveStochCmd {
    std::string instance, scenarios, output, mode = "literal", lp;
    int count = 150;
    std::optional<std::uint64_t> seed;
    WeibullParams w;
    SolverFlags solver;

    void attach(CLI::App& root) {
        auto* c = root.add_subcommand("solve-stoch", "Solve the two-stage model on one scenario set");
        c->add_option("--instance", instance, "Instance JSON with initial ages")->required();
        c->add_option("--scenarios", scenarios, "Scenario CSV; otherwise sampled with --count/--seed");
        c->add_option("--count", count, "Scenarios to sample")->capture_default_str();
        c->add_option("--seed", seed, "Sampling seed");
        c->add_option("--mode", mode, "literal or charge-once")->capture_default_str();
        c->add_option("--alpha", w.alpha, "Weibull scale")->capture_default_str();
        c->add_option("--beta", w.beta, "Weibull shape")->capture_default_str();
        c->add_option("-o,--output", output, "Plan CSV (default: stdout)");
        c->add_option("--export-lp", lp, "Also write the model in LP format");
        solver.attach(c);
        c->callback([this] { rc = run(); });
    }
    int run() {
        const Instance inst = load_instance(instance);
        milp::SolveOptions opts;
        solver.apply(opts);
        StochObjectiveMode m{};
        try {
            m = parse_mode(mode);
            opts.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        const ScenarioSet s = load_or_generate(inst, scenarios, count, seed, w);
        if (!lp.empty()) milp::export_lp(build_stochastic(inst, s, m).builder, lp);
        std::cerr << "[solve-stoch] " << inst.num_railcars() << " railcars x " << s.num_scenarios() << " scenarios, "
                  << to_string(m) << "\n";
        StochSolution sol;
        try {
            sol = solve_stochastic(inst, s, m, opts);
        } catch (const std::runtime_error& e) {
            std::cerr << "[solve-stoch] " << e.what() << "\n";
            return kRowFailure;
        }
        std::cerr << "[solve-stoch] " << milp::to_string(sol.result.status) << " objective "
                  << sol.result.objective_value << " bound " << sol.result.best_bound << " in "
                  << sol.result.wall_time << " s\n";
        if (output.empty()) write_plan(std::cout, sol.plan);
        else write_plan(output, sol.plan);
        return sol.result.status == milp::SolveStatus::Optimal ? kOk : kRowFailure;
    }
    int rc = kOk;
};

struct EvaluateCmd {
    std::string instance, plan, scenarios, trajectories;
    int count = 1000;
    std::optional<std::uint64_t> seed;
    double theta = 0.05;
    WeibullParams w;
    int workers = 1;

    void attach(CLI::App& root) {
        auto* c = root.add_subcommand("evaluate", "Score a plan on failure scenarios");
        c->add_option("--instance", instance, "Instance JSON with initial ages")->required();
        c->add_option("--plan", plan, "Plan CSV")->required();
        c->add_option("--scenarios", scenarios, "Scenario CSV; otherwise sampled with --count/--seed");
        c->add_option("--count", count, "Scenarios to sample")->capture_default_str();
        c->add_option("--seed", seed, "Sampling seed");
        c->add_option("--theta", theta, "Interval level is 1 - theta")->capture_default_str();
        c->add_option("--alpha", w.alpha, "Weibull scale")->capture_default_str();
        c->add_option("--beta", w.beta, "Weibull shape")->capture_default_str();
        c->add_option("--workers", workers, "Evaluation threads")->capture_default_str();
        c->add_option("--trajectories", trajectories, "Write per-period KPI means to this CSV");
        c->callback([this] { rc = run(); });
    }
    int run() {
        const Instance inst = load_instance(instance);
        MaintenancePlan p;
        try {
            p = read_plan(this->plan);
            p.validate(inst.num_railcars(), inst.num_periods());
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        const ScenarioSet s = load_or_generate(inst, scenarios, count, seed, w);
        const auto res = evaluate_out_of_sample(p, inst, s, workers);
        ConfidenceInterval ub{res.kpis.cost, res.kpis.cost, 1.0 - theta};
        if (res.omegas.size() > 1) ub = ub_confidence_interval(res.omegas, theta);
        print_kpis(std::cout, res.kpis, ub);
        if (!trajectories.empty()) write_trajectories(trajectories, {{"plan", res.kpis}});
        return kOk;
    }
    int rc = kOk;
};

struct ExperimentCmd {
    std::string config, output, trajectories_dir;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> lines, fleets, cases, methods;
    std::optional<double> scale, alpha, beta, strict, relaxed, theta;
    std::optional<int> n_in, m_reps, n_out, workers, saa_workers;
    std::optional<std::string> mode;
    bool record_time = false, rerank = false;
    SolverFlags solver;

    void attach(CLI::App& root) {
        auto* c = root.add_subcommand("experiment", "Run the line x fleet x case x method matrix");
        c->add_option("--config", config, "Experiment config JSON");
        c->add_option("--seed", seed, "Experiment master seed")->required();
        c->add_option("-o,--output", output, "Results CSV (default: stdout)");
        c->add_option("--trajectories-dir", trajectories_dir, "Write one per-period KPI CSV per cell here");
        c->add_option("--lines", lines, "Override: lines")->delimiter(',');
        c->add_option("--fleets", fleets, "Override: fleet profiles")->delimiter(',');
        c->add_option("--cases", cases, "Override: cost cases")->delimiter(',');
        c->add_option("--methods", methods, "Override: stochastic,strict,relaxed")->delimiter(',');
        c->add_option("--scale", scale, "Override: scale");
        c->add_option("--alpha", alpha, "Override: Weibull scale");
        c->add_option("--beta", beta, "Override: Weibull shape");
        c->add_option("--strict", strict, "Override: strict reliability");
        c->add_option("--relaxed", relaxed, "Override: relaxed reliability");
        c->add_option("--n-in", n_in, "Override: in-sample scenarios per replication");
        c->add_option("--m-reps", m_reps, "Override: replications");
        c->add_option("--n-out", n_out, "Override: out-of-sample scenarios");
        c->add_option("--theta", theta, "Override: interval level is 1 - theta");
        c->add_option("--mode", mode, "Override: literal or charge-once");
        c->add_option("--workers", workers, "Override: concurrent cells");
        c->add_option("--saa-workers", saa_workers, "Override: concurrent replications");
        c->add_flag("--record-time", record_time, "Write solve times (output is then not byte-reproducible)");
        c->add_flag("--rerank", rerank, "Pick the SAA candidate with the best out-of-sample cost");
        solver.attach(c);
        c->callback([this] { rc = run(); });
    }

    ExperimentConfig build() const {
        ExperimentConfig cfg;
        try {
            if (!config.empty()) cfg = read_experiment_config(config);
            cfg.saa.master_seed = *seed;
            if (!lines.empty()) {
                cfg.lines.clear();
                for (const auto& s : lines) cfg.lines.push_back(parse_line(s));
            }
            if (!fleets.empty()) {
                cfg.fleet_profiles.clear();
                for (const auto& s : fleets) cfg.fleet_profiles.push_back(parse_profile(s));
            }
            if (!cases.empty()) {
                cfg.cases.clear();
                for (const auto& s : cases) cfg.cases.push_back(parse_case(s));
            }
            if (!methods.empty()) {
                cfg.methods.clear();
                for (const auto& s : methods) cfg.methods.push_back(parse_method(s));
            }
            if (scale) cfg.scale = *scale;
            if (alpha) cfg.weibull.alpha = *alpha;
            if (beta) cfg.weibull.beta = *beta;
            if (strict) cfg.strict_reliability = *strict;
            if (relaxed) cfg.relaxed_reliability = *relaxed;
            if (n_in) cfg.saa.n_in = *n_in;
            if (m_reps) cfg.saa.m_reps = *m_reps;
            if (n_out) cfg.saa.n_out = *n_out;
            if (theta) cfg.saa.theta = *theta;
            if (mode) cfg.saa.mode = parse_mode(*mode);
            if (workers) cfg.workers = *workers;
            if (saa_workers) cfg.saa.workers = *saa_workers;
            if (record_time) cfg.record_time = true;
            if (rerank) cfg.saa.rerank_out_of_sample = true;
            solver.apply(cfg.saa.solve_options);
            cfg.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        return cfg;
    }

    int run() {
        const ExperimentConfig cfg = build();
        std::cerr << "[experiment] seed " << cfg.saa.master_seed << ", "
                  << cfg.lines.size() * cfg.fleet_profiles.size() * cfg.cases.size() << " cells, "
                  << cfg.methods.size() << " methods\n";
        const auto rows = run_experiment(cfg, &std::cerr);
        if (output.empty()) {
            write_results(std::cout, rows, cfg.record_time);
        } else {
            write_results(output, rows, cfg.record_time);
            std::cerr << "[experiment] wrote " << output << "\n";
        }
        if (!trajectories_dir.empty()) {
            fs::create_directories(trajectories_dir);
            std::map<std::string, std::vector<std::pair<std::string, KpiSummary>>> cells;
            std::vector<std::string> order;
            for (const auto& r : rows) {
                if (r.failed) continue;
                const std::string key = r.line + "_" + r.fleet + "_case" + r.cost_case;
                if (!cells.count(key)) order.push_back(key);
                cells[key].emplace_back(r.method, r.kpis);
            }
            for (const auto& key : order) write_trajectories((fs::path(trajectories_dir) / (key + ".csv")).string(), cells[key]);
        }
        int failures = 0;
        for (const auto& r : rows)
            if (r.failed) {
                ++failures;
                std::cerr << "[experiment] " << r.line << "/" << r.fleet << "/" << r.cost_case << "/" << r.method
                          << " failed: " << r.error << "\n";
            }
        return failures ? kRowFailure : kOk;
    }
    int rc = kOk;
};

struct ReportCmd {
    std::string results;

    void attach(CLI::App& root) {
        auto* c = root.add_subcommand("report", "Summarise a results CSV per cell");
        c->add_option("results", results, "Results CSV")->required();
        c->callback([this] { rc = run(); });
    }
    int run() {
        std::vector<ResultRow> rows;
        try {
            rows = read_results(results);
        } catch (const std::exception& e) {
            throw ConfigError(e.what());
        }
        struct Cell {
            std::string name;
            std::vector<const ResultRow*> rows;
        };
        std::vector<Cell> cells;
        for (const auto& r : rows) {
            const std::string name = r.line + " " + r.fleet + " case " + r.cost_case;
            if (cells.empty() || cells.back().name != name) cells.push_back({name, {}});
            cells.back().rows.push_back(&r);
        }
        char buf[256];
        int failures = 0;
        for (const auto& c : cells) {
            std::cout << c.name << "\n";
            std::snprintf(buf, sizeof buf, "  %-11s %10s %7s %7s %7s %7s %21s %8s\n", "method", "cost", "n_prev",
                          "n_cor", "sla_v", "track_v", "ub", "gap%");
            std::cout << buf;
            std::optional<double> stoch, best_det;
            for (const ResultRow* r : c.rows) {
                if (r->failed) {
                    ++failures;
                    std::cout << "  " << r->method << "  FAILED\n";
                    continue;
                }
                const std::string gap = r->gap_percent ? detail::fixed2(r->gap_percent) : "-";
                std::snprintf(buf, sizeof buf, "  %-11s %10.2f %7.2f %7.2f %7.2f %7.2f  [%8.2f, %8.2f] %8s\n",
                              r->method.c_str(), r->cost, r->n_prev, r->n_cor, r->sla_v, r->track_v, r->ub_lo,
                              r->ub_hi, gap.c_str());
                std::cout << buf;
                if (r->method == "stochastic") stoch = r->cost;
                else if (!best_det || r->cost < *best_det) best_det = r->cost;
            }
            if (stoch && best_det && *best_det > 0) {
                std::snprintf(buf, sizeof buf, "  improvement over best deterministic: %.2f%%\n",
                              100.0 * (*best_det - *stoch) / *best_det);
                std::cout << buf;
            }
        }
        return failures ? kRowFailure : kOk;
    }
    int rc = kOk;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Railcar maintenance planning under failure uncertainty"};
    app.require_subcommand(1);
    PresetCmd preset;
    ScenariosCmd scenarios;
    SolveDetCmd solve_det;
    SolveStochCmd solve_stoch;
    EvaluateCmd evaluate;
    ExperimentCmd experiment;
    ReportCmd report;
    preset.attach(app);
    scenarios.attach(app);
    solve_det.attach(app);
    solve_stoch.attach(app);
    evaluate.attach(app);
    experiment.attach(app);
    report.attach(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRowFailure;
    }
    for (int rc : {preset.rc, scenarios.rc, solve_det.rc, solve_stoch.rc, evaluate.rc, experiment.rc, report.rc})
        if (rc != kOk) return rc;
    return kOk;
}
