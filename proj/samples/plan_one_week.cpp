// Plans one week of maintenance for a small mixed-age fleet with both
// models and compares them on the same fresh failure sample.

#include <cstdio>

#include <railmaint/railmaint.hpp>

using namespace railmaint;

int main() {
    Instance inst = scale_instance(preset_line(Line::M1B), 0.2);
    inst.costs = apply_case(default_costs(), CostCase::Case1);
    inst.fleet.initial_ages = sample_fleet_ages(FleetProfile::Mixed, inst.num_railcars(), 2024);

    const WeibullParams weibull;
    const ScenarioSet test = generate_scenarios(inst, weibull, 500, 1);

    const auto strict = solve_deterministic({inst, reliability_intervals(inst, weibull, 0.8)});
    const ScenarioSet train = generate_scenarios(inst, weibull, 30, 2);
    const auto stoch = solve_stochastic(inst, train, StochObjectiveMode::ChargeOnce);

    for (const auto& [name, plan] : {std::pair{"strict", strict.plan}, std::pair{"stochastic", stoch.plan}}) {
        const auto r = evaluate_out_of_sample(plan, inst, test);
        std::printf("%-10s cost %8.2f  corrective %.2f  preventive %.2f  starts:", name, r.kpis.cost, r.kpis.n_cor,
                    r.kpis.n_prev);
        for (int s : plan.starts()) std::printf(" %d", s);
        std::printf("\n");
    }
}
