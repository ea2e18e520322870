#pragma once

// Text formats for instances (JSON) and maintenance plans (CSV).
//
// Instance schema:
//   {
//     "label": "M1B",
//     "horizon": {"days": 7, "periods_per_day": 4},
//     "sla": [0, 45, 50, 49, ...],                 // one entry per period
//     "costs": {"c_o": 2, "c_s": 60, "c_p": 8, "c_c": 40, "c_a": 8, "c_v": 4,
//               "y_p": 3, "y_c": 5},
//     "fleet": {"num_railcars": 57, "track_capacity": 12,
//               "initial_ages": [12, 17, ...]}     // optional
//   }
//
// Plan CSV: header "railcar,start", 1-based railcar, start 0 = postponed.

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "core.hpp"

namespace railmaint {

inline nlohmann::json to_json(const Instance& inst) {
    const auto& c = inst.costs;
    nlohmann::json j;
    j["label"] = inst.label;
    j["horizon"] = {{"days", inst.horizon.days}, {"periods_per_day", inst.horizon.periods_per_day}};
    j["sla"] = inst.sla.requirements;
    j["costs"] = {{"c_o", c.c_o}, {"c_s", c.c_s}, {"c_p", c.c_p}, {"c_c", c.c_c},
                  {"c_a", c.c_a}, {"c_v", c.c_v}, {"y_p", c.y_p}, {"y_c", c.y_c}};
    j["fleet"] = {{"num_railcars", inst.fleet.num_railcars}, {"track_capacity", inst.fleet.track_capacity}};
    if (!inst.fleet.initial_ages.empty()) j["fleet"]["initial_ages"] = inst.fleet.initial_ages;
    return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    try {
        inst.label = j.value("label", std::string{});
        const auto& h = j.at("horizon");
        inst.horizon.days = h.at("days").get<int>();
        inst.horizon.periods_per_day = h.at("periods_per_day").get<int>();
        inst.sla.requirements = j.at("sla").get<std::vector<int>>();
        const auto& c = j.at("costs");
        CostParams d = default_costs();
        inst.costs.c_o = c.value("c_o", d.c_o);
        inst.costs.c_s = c.value("c_s", d.c_s);
        inst.costs.c_p = c.value("c_p", d.c_p);
        inst.costs.c_c = c.value("c_c", d.c_c);
        inst.costs.c_a = c.value("c_a", d.c_a);
        inst.costs.c_v = c.value("c_v", d.c_v);
        inst.costs.y_p = c.value("y_p", d.y_p);
        inst.costs.y_c = c.value("y_c", d.y_c);
        const auto& f = j.at("fleet");
        inst.fleet.num_railcars = f.at("num_railcars").get<int>();
        inst.fleet.track_capacity = f.at("track_capacity").get<int>();
        if (f.contains("initial_ages")) inst.fleet.initial_ages = f.at("initial_ages").get<std::vector<int>>();
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("instance: ") + e.what());
    }
    inst.validate(false);
    return inst;
}

inline void write_instance(const std::string& path, const Instance& inst) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << to_json(inst).dump(2) << '\n';
}

inline Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
    return instance_from_json(j);
}

inline void write_plan(std::ostream& os, const MaintenancePlan& plan) {
    os << "railcar,start\n";
    for (std::size_t j = 0; j < plan.size(); ++j) os << j + 1 << ',' << plan.start(j) << '\n';
}

inline void write_plan(const std::string& path, const MaintenancePlan& plan) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_plan(out, plan);
}

inline MaintenancePlan read_plan(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("railcar,start", 0) != 0)
        throw std::runtime_error("plan file: missing header");
    std::vector<int> starts;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        int j = 0, s = 0;
        char comma = 0;
        if (!(ss >> j >> comma >> s) || comma != ',' || j != static_cast<int>(starts.size()) + 1)
            throw std::runtime_error("plan file: malformed or out-of-order row '" + line + "'");
        starts.push_back(s);
    }
    return MaintenancePlan(std::move(starts));
}

inline MaintenancePlan read_plan(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_plan(in);
}

}  // namespace railmaint
