// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include <railmaint/railmaint.hpp>

#include "oracles.hpp"

using namespace railmaint;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit_s > 0 && secs >= limit_s) {
        o.pass = false;
        o.detail += " [over time budget " + std::to_string(limit_s) + " s]";
    }
    if (!o.pass) ++failures;
    std::printf("criterion %d: %s - %s (%.2f s) %s\n", id, o.pass ? "PASS" : "FAIL", title, secs, o.detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

milp::SolveOptions exact() {
    milp::SolveOptions o;
    o.relative_mip_gap = 1e-9;
    return o;
}

ScenarioSet from_matrix(const std::vector<std::vector<int>>& xi_by_scenario) {
    ScenarioSet s;
    const std::size_t K = xi_by_scenario.size(), n = xi_by_scenario.front().size();
    s.failure_times.assign(n, std::vector<int>(K));
    for (std::size_t k = 0; k < K; ++k)
        for (std::size_t j = 0; j < n; ++j) s.failure_times[j][k] = xi_by_scenario[k][j];
    s.probabilities.assign(K, 1.0 / static_cast<double>(K));
    return s;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

constexpr std::uint64_t kDeskSeed = 20240601;

}  // namespace

int main() {
    std::printf("railmaint acceptance suite\n");

    criterion(1, "maintenance interval reproduction", 1.0, [] {
        const WeibullParams w{50.0, 5.0};
        struct Case { double r; int age; MaintenanceInterval want; };
        const Case cases[] = {{0.8, 10, {48, 51}}, {0.8, 30, {28, 31}}, {0.8, 50, {8, 11}},
                              {0.9, 10, {53, 56}}, {0.9, 30, {33, 36}}, {0.9, 50, {13, 16}}};
        std::string got;
        bool ok = true;
        for (const auto& c : cases) {
            const auto iv = maintenance_interval(w, c.r, c.age);
            ok = ok && iv == c.want;
            got += fmt("[%d,%d] ", iv.due, iv.end);
        }
        return Outcome{ok, got};
    });

    criterion(2, "pessimistic gap calibration", 1.0, [] {
        const double g1 = pessimistic_gap({2503.48, 2511.93}, {2552.52, 2565.57});
        const double g2 = pessimistic_gap({7066.93, 7096.21}, {7132.39, 7161.98});
        const bool ok = std::abs(g1 - 2.42) <= 0.01 && std::abs(g2 - 1.33) <= 0.01;
        return Outcome{ok, fmt("gaps %.4f (want 2.42) and %.4f (want 1.33)", g1, g2)};
    });

    criterion(3, "evaluator oracle", 10.0, [] {
        // (a) hand-simulated replica
        Instance inst;
        inst.horizon = {1, 8};
        inst.sla.requirements = {3, 2, 3, 0, 3, 2, 3, 0};
        inst.fleet = {5, {0, 0, 0, 0, 0}, 2};
        inst.costs = apply_case(default_costs(), CostCase::Case1);
        const auto r = evaluate_plan(MaintenancePlan({1, 1, 0, 4, 0}), inst, std::vector<int>{4, 3, 4, 5, 4});
        auto sum = [](const std::vector<int>& v) { return std::accumulate(v.begin(), v.end(), 0); };
        const bool a = r.omega == 218.0 && sum(r.sla_shortfall) == 1 && sum(r.track_overflow) == 3;

        // (b) random pairs against the naive simulator
        std::mt19937_64 rng(31);
        int mismatches = 0;
        for (int rep = 0; rep < 1000; ++rep) {
            const Instance ri = oracle::random_instance(rng, 5, 8);
            const int n = ri.num_railcars(), T = ri.num_periods();
            std::vector<int> starts(static_cast<std::size_t>(n)), xi(starts.size());
            for (auto& s : starts) s = std::uniform_int_distribution<int>(0, T)(rng);
            for (auto& x : xi) x = std::uniform_int_distribution<int>(1, T + 1)(rng);
            const auto e = evaluate_plan(MaintenancePlan(starts), ri, xi);
            const auto o = oracle::simulate(ri, starts, xi);
            if (e.omega != o.cost || sum(e.sla_shortfall) != o.shortfall || sum(e.track_overflow) != o.overflow ||
                sum(e.preventive_count) != o.prev_periods || sum(e.corrective_count) != o.cor_periods)
                ++mismatches;
        }
        return Outcome{a && mismatches == 0, fmt("replica omega=%.0f shortfall=%d overflow=%d; %d/1000 mismatches",
                                                 r.omega, sum(r.sla_shortfall), sum(r.track_overflow), mismatches)};
    });

    criterion(4, "sampler statistics", 5.0, [] {
        const WeibullParams w{50.0, 5.0};
        std::string detail;
        bool ok = true;
        for (int age : {10, 30, 50}) {
            Instance inst = preset_line(Line::M1B);
            inst.fleet.num_railcars = 1;
            inst.fleet.initial_ages = {age};
            const int T = inst.num_periods();
            const auto s = generate_scenarios(inst, w, 10000, 4000 + static_cast<std::uint64_t>(age));
            const auto& xs = s.failure_times[0];
            double ks = 0.0;
            for (int t = 1; t <= T + 1; ++t) {
                const double emp = static_cast<double>(std::count_if(xs.begin(), xs.end(), [t](int x) { return x <= t; })) / xs.size();
                const double law = t <= T ? conditional_failure_cdf(w, age + t, age) : 1.0;
                ks = std::max(ks, std::abs(emp - law));
            }
            ok = ok && ks <= 0.02;
            detail += fmt("y'=%d KS=%.4f ", age, ks);
        }
        return Outcome{ok, detail};
    });

    criterion(5, "in-sample / out-of-sample consistency", 120.0, [] {
        std::mt19937_64 rng(505);
        int bad = 0;
        double worst = 0.0;
        for (int rep = 0; rep < 20; ++rep) {
            const Instance inst = oracle::random_instance(rng, 6, 12);
            const int n = inst.num_railcars(), T = inst.num_periods();
            const int K = std::uniform_int_distribution<int>(1, 10)(rng);
            std::vector<std::vector<int>> xi(static_cast<std::size_t>(K), std::vector<int>(static_cast<std::size_t>(n)));
            for (auto& row : xi)
                for (auto& x : row) x = std::uniform_int_distribution<int>(1, T + 1)(rng);
            const ScenarioSet scen = from_matrix(xi);
            const auto sol = solve_stochastic(inst, scen, StochObjectiveMode::ChargeOnce, exact());
            const double mean = evaluate_out_of_sample(sol.plan, inst, scen).kpis.cost;
            const double rel = std::abs(sol.result.objective_value - mean) / std::max(1.0, std::abs(mean));
            worst = std::max(worst, rel);
            if (sol.result.status != milp::SolveStatus::Optimal || rel > 1e-6) ++bad;
        }
        return Outcome{bad == 0, fmt("%d/20 inconsistent, worst relative difference %.2e", bad, worst)};
    });

    // Criteria 6 and 7 share one desk-scale run.
    std::vector<ResultRow> desk;
    double desk_secs = 0.0;
    std::string desk_error;
    {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            ExperimentConfig cfg = read_experiment_config(RAILMAINT_SAMPLES_DIR "/desk_config.json");
            cfg.saa.master_seed = kDeskSeed;
            desk = run_experiment(cfg, &std::cerr);
        } catch (const std::exception& e) {
            desk_error = e.what();
        }
        desk_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    auto desk_row = [&](const char* method) -> const ResultRow* {
        for (const auto& r : desk)
            if (r.method == method && !r.failed) return &r;
        return nullptr;
    };

    criterion(6, "stochastic beats both deterministic methods on the desk cell", 0.0, [&] {
        const ResultRow *s = desk_row("stochastic"), *st = desk_row("strict"), *rl = desk_row("relaxed");
        if (!s || !st || !rl) return Outcome{false, "desk run incomplete: " + desk_error};
        const bool cost = s->cost < st->cost && s->cost < rl->cost;
        const bool cor = s->n_cor < st->n_cor && s->n_cor < rl->n_cor;
        const bool same_sample = s->out_of_sample_hash == st->out_of_sample_hash && s->out_of_sample_hash == rl->out_of_sample_hash;
        Outcome o{cost && cor && same_sample && desk_secs < 900.0,
                  fmt("cost %.2f vs strict %.2f / relaxed %.2f; n_cor %.4f vs %.4f / %.4f; run %.1f s", s->cost,
                      st->cost, rl->cost, s->n_cor, st->n_cor, rl->n_cor, desk_secs)};
        if (!same_sample) o.detail += " [out-of-sample sets differ]";
        return o;
    });

    criterion(7, "SAA bounds on the desk cell", 0.0, [&] {
        const ResultRow* s = desk_row("stochastic");
        if (!s || !s->lb_lo || !s->lb_hi) return Outcome{false, "no stochastic row"};
        const double lb_mid = 0.5 * (*s->lb_lo + *s->lb_hi), lb_hw = 0.5 * (*s->lb_hi - *s->lb_lo);
        const double ub_mid = 0.5 * (s->ub_lo + s->ub_hi), ub_hw = 0.5 * (s->ub_hi - s->ub_lo);
        const bool order = lb_mid <= ub_mid + lb_hw + ub_hw;
        const bool nondegenerate = lb_hw > 0.0 && ub_hw > 0.0;
        return Outcome{order && nondegenerate,
                       fmt("LB [%.2f, %.2f] UB [%.2f, %.2f] gap %.2f%%", *s->lb_lo, *s->lb_hi, s->ub_lo, s->ub_hi,
                           s->gap_percent.value_or(NAN))};
    });

    criterion(8, "deterministic objective reconstruction", 0.0, [] {
        std::vector<DetModelInput> inputs;
        {
            Instance one;
            one.horizon = {1, 4};
            one.sla.requirements = {0, 0, 0, 0};
            one.fleet = {1, {0}, 1};
            inputs.push_back({one, {{2, 2}}});
            inputs.push_back({one, {{5, 6}}});
        }
        std::mt19937_64 rng(808);
        for (int rep = 0; rep < 20; ++rep) {
            Instance inst = oracle::random_instance(rng, 4, 8);
            std::vector<MaintenanceInterval> iv;
            for (int j = 0; j < inst.num_railcars(); ++j) {
                const int due = std::uniform_int_distribution<int>(1, inst.num_periods() + 3)(rng);
                iv.push_back({due, due + std::uniform_int_distribution<int>(0, 3)(rng)});
            }
            inputs.push_back({inst, iv});
        }
        for (FleetProfile f : {FleetProfile::Young, FleetProfile::Mixed, FleetProfile::Old})
            for (double r : {0.8, 0.9}) {
                Instance inst = scale_instance(preset_line(Line::M1B), 0.2);
                inst.costs = apply_case(default_costs(), CostCase::Case1);
                inst.fleet.initial_ages = sample_fleet_ages(f, inst.num_railcars(), 77);
                inputs.push_back({inst, reliability_intervals(inst, {}, r)});
            }
        int bad = 0;
        double worst = 0.0;
        for (const auto& in : inputs) {
            const auto sol = solve_deterministic(in, exact());
            const double rebuilt = deterministic_objective(in.instance, sol.plan, sol.diagnostics);
            const double rel = std::abs(rebuilt - sol.result.objective_value) / std::max(1.0, std::abs(sol.result.objective_value));
            worst = std::max(worst, rel);
            if (rel > 1e-6) ++bad;
        }
        return Outcome{bad == 0, fmt("%d/%zu mismatches, worst relative difference %.2e", bad, inputs.size(), worst)};
    });

    criterion(9, "experiment output is byte-identical across runs", 0.0, [] {
        const fs::path dir = fs::temp_directory_path() / "railmaint_acceptance";
        fs::create_directories(dir);
        std::string texts[2];
        for (int i = 0; i < 2; ++i) {
            const fs::path out = dir / ("run" + std::to_string(i) + ".csv");
            fs::remove(out);
            const std::string cmd = std::string("\"") + RAILMAINT_CLI + "\" experiment --config \"" RAILMAINT_SAMPLES_DIR
                                    "/desk_config.json\" --seed " + std::to_string(kDeskSeed) + " --threads 1 -o \"" +
                                    out.string() + "\" 2>/dev/null";
            const int rc = std::system(cmd.c_str());
            if (rc != 0) return Outcome{false, "experiment exited with status " + std::to_string(rc)};
            texts[i] = slurp(out);
        }
        const bool same = !texts[0].empty() && texts[0] == texts[1];
        return Outcome{same, fmt("%zu bytes, identical=%s", texts[0].size(), same ? "yes" : "no")};
    });

    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
