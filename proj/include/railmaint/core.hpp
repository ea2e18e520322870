#pragma once

// Problem data shared by every model: horizon, SLA, costs, fleet and plans.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace railmaint {

/// Planning horizon. Periods are indexed 1..num_periods().
struct Horizon {
    int days = 7;
    int periods_per_day = 4;

    [[nodiscard]] int num_periods() const noexcept { return days * periods_per_day; }

    void validate() const {
        if (days < 1 || periods_per_day < 1)
            throw std::invalid_argument("Horizon: days and periods_per_day must be >= 1");
    }
};

/// Minimum number of operational railcars, one entry per period (index 0 is period 1).
struct SlaSchedule {
    std::vector<int> requirements;

    [[nodiscard]] int at(int period) const { return requirements.at(static_cast<std::size_t>(period - 1)); }
    [[nodiscard]] long total() const { return std::accumulate(requirements.begin(), requirements.end(), 0L); }
};

struct CostParams {
    double c_o = 2.0;   // operation, per railcar per period
    double c_s = 60.0;  // SLA shortfall, per unit per period
    double c_p = 8.0;   // preventive action
    double c_c = 40.0;  // corrective action
    double c_a = 8.0;   // extra maintenance slot, per period
    double c_v = 4.0;   // interval violation, per period (deterministic model)
    int y_p = 3;        // preventive duration (periods)
    int y_c = 5;        // corrective duration (periods)

    void validate() const {
        if (c_o < 0 || c_s < 0 || c_p < 0 || c_c < 0 || c_a < 0 || c_v < 0)
            throw std::invalid_argument("CostParams: costs must be non-negative");
        if (y_p < 1 || y_c < 1)
            throw std::invalid_argument("CostParams: durations must be >= 1");
        if (!(y_p < y_c))
            throw std::invalid_argument("CostParams: preventive duration must be shorter than corrective");
        if (!(c_p < c_c))
            throw std::invalid_argument("CostParams: preventive cost must be below corrective cost");
    }
};

/// Cost defaults used by the case study (C_o=2, C_v=2C_o, C_c=20C_o, C_p=C_a=C_c/5).
inline CostParams default_costs() { return CostParams{}; }

struct FleetSpec {
    int num_railcars = 0;
    std::vector<int> initial_ages;  // periods since last maintenance
    int track_capacity = 0;

    void validate() const {
        if (num_railcars < 1) throw std::invalid_argument("FleetSpec: num_railcars must be >= 1");
        if (track_capacity < 0) throw std::invalid_argument("FleetSpec: track_capacity must be >= 0");
        if (!initial_ages.empty() && static_cast<int>(initial_ages.size()) != num_railcars)
            throw std::invalid_argument("FleetSpec: initial_ages length must equal num_railcars");
        if (std::any_of(initial_ages.begin(), initial_ages.end(), [](int a) { return a < 0; }))
            throw std::invalid_argument("FleetSpec: initial ages must be non-negative");
    }
    [[nodiscard]] bool ages_set() const noexcept {
        return static_cast<int>(initial_ages.size()) == num_railcars;
    }
};

struct Instance {
    Horizon horizon;
    SlaSchedule sla;
    CostParams costs;
    FleetSpec fleet;
    std::string label;

    [[nodiscard]] int num_periods() const noexcept { return horizon.num_periods(); }
    [[nodiscard]] int num_railcars() const noexcept { return fleet.num_railcars; }

    /// Structural checks. Ages may still be unset unless `require_ages`.
    void validate(bool require_ages = true) const {
        horizon.validate();
        costs.validate();
        fleet.validate();
        if (static_cast<int>(sla.requirements.size()) != num_periods())
            throw std::invalid_argument("Instance: SLA length must equal the number of periods");
        if (std::any_of(sla.requirements.begin(), sla.requirements.end(), [](int s) { return s < 0; }))
            throw std::invalid_argument("Instance: SLA entries must be non-negative");
        if (require_ages && !fleet.ages_set())
            throw std::invalid_argument("Instance: initial ages are not set");
    }
};

/// First-stage decision: for each railcar a start period in 1..T, or 0 for postponed.
class MaintenancePlan {
public:
    static constexpr int kPostponed = 0;

    MaintenancePlan() = default;
    explicit MaintenancePlan(std::vector<int> starts) : starts_(std::move(starts)) {}

    static MaintenancePlan all_postponed(int num_railcars) {
        return MaintenancePlan(std::vector<int>(static_cast<std::size_t>(num_railcars), kPostponed));
    }

    [[nodiscard]] std::size_t size() const noexcept { return starts_.size(); }
    [[nodiscard]] int start(std::size_t railcar) const { return starts_.at(railcar); }
    [[nodiscard]] bool postponed(std::size_t railcar) const { return start(railcar) == kPostponed; }
    [[nodiscard]] const std::vector<int>& starts() const noexcept { return starts_; }

    void schedule(std::size_t railcar, int period) { starts_.at(railcar) = period; }
    void postpone(std::size_t railcar) { starts_.at(railcar) = kPostponed; }

    void validate(int num_railcars, int num_periods) const {
        if (static_cast<int>(starts_.size()) != num_railcars)
            throw std::invalid_argument("MaintenancePlan: one assignment per railcar required");
        for (int s : starts_)
            if (s < 0 || s > num_periods)
                throw std::invalid_argument("MaintenancePlan: start period out of range");
    }

    friend bool operator==(const MaintenancePlan&, const MaintenancePlan&) = default;

private:
    std::vector<int> starts_;
};

/// Per-railcar and per-period values read back from a solved deterministic model.
struct DetDiagnostics {
    std::vector<double> start, earliness, tardiness, violation;  // per railcar
    std::vector<double> sla_shortfall, extra_capacity;           // per period
    std::vector<std::vector<int>> operational;                   // [railcar][period-1]
};

// ---------------------------------------------------------------------------
// Presets

enum class Line { M1B, M4 };
enum class CostCase { Case1, Case2, Case3 };
enum class FleetProfile { Young, Mixed, Old };

inline std::string_view to_string(Line l) { return l == Line::M1B ? "M1B" : "M4"; }
inline std::string_view to_string(CostCase c) {
    switch (c) {
        case CostCase::Case1: return "1";
        case CostCase::Case2: return "2";
        case CostCase::Case3: return "3";
    }
    return "?";
}
inline std::string_view to_string(FleetProfile f) {
    switch (f) {
        case FleetProfile::Young: return "Young";
        case FleetProfile::Mixed: return "Mixed";
        case FleetProfile::Old: return "Old";
    }
    return "?";
}

inline Line parse_line(std::string_view s) {
    if (s == "M1B") return Line::M1B;
    if (s == "M4") return Line::M4;
    throw std::invalid_argument("unknown line: " + std::string(s));
}
inline CostCase parse_case(std::string_view s) {
    if (s == "1" || s == "Case1") return CostCase::Case1;
    if (s == "2" || s == "Case2") return CostCase::Case2;
    if (s == "3" || s == "Case3") return CostCase::Case3;
    throw std::invalid_argument("unknown cost case: " + std::string(s));
}
inline FleetProfile parse_profile(std::string_view s) {
    if (s == "Young") return FleetProfile::Young;
    if (s == "Mixed") return FleetProfile::Mixed;
    if (s == "Old") return FleetProfile::Old;
    throw std::invalid_argument("unknown fleet profile: " + std::string(s));
}

namespace detail {
// Per day: Night, Morning, Afternoon, Evening.
using DaySla = std::array<int, 4>;
struct LineTable {
    DaySla weekday, saturday, sunday;
    int railcars, track;
};
inline LineTable line_table(Line line) {
    if (line == Line::M1B) return {{0, 45, 50, 49}, {12, 41, 51, 47}, {12, 40, 43, 41}, 57, 12};
    return {{0, 68, 66, 59}, {11, 55, 66, 56}, {11, 48, 66, 54}, 74, 15};
}
}  // namespace detail

/// One week of four periods per day; weekdays first, then Saturday and Sunday.
/// Costs are the case-study defaults with C_s at its Case 1 value; use apply_case
/// to select another case. Initial ages are left empty.
inline Instance preset_line(Line line) {
    const auto tab = detail::line_table(line);
    Instance inst;
    inst.horizon = Horizon{7, 4};
    inst.sla.requirements.reserve(28);
    for (int day = 1; day <= 7; ++day) {
        const auto& d = day <= 5 ? tab.weekday : (day == 6 ? tab.saturday : tab.sunday);
        inst.sla.requirements.insert(inst.sla.requirements.end(), d.begin(), d.end());
    }
    inst.costs = default_costs();
    inst.fleet.num_railcars = tab.railcars;
    inst.fleet.track_capacity = tab.track;
    inst.label = std::string(to_string(line));
    return inst;
}

inline CostParams apply_case(const CostParams& base, CostCase c) {
    CostParams out = base;
    switch (c) {
        case CostCase::Case1: out.c_s = 1.5 * base.c_c; break;
        case CostCase::Case2: out.c_s = base.c_c; break;
        case CostCase::Case3: out.c_s = 2.0 * base.c_c / 3.0; break;
    }
    return out;
}

inline std::pair<int, int> age_range(FleetProfile profile) {
    switch (profile) {
        case FleetProfile::Young: return {10, 20};
        case FleetProfile::Mixed: return {10, 60};
        case FleetProfile::Old: return {50, 60};
    }
    throw std::invalid_argument("bad fleet profile");
}

/// Integer ages drawn uniformly from the profile's inclusive range.
/// The mapping from mt19937_64 output is done by hand so sequences do not
/// depend on the standard library's distribution implementation.
inline std::vector<int> sample_fleet_ages(FleetProfile profile, int n, std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_fleet_ages: n must be >= 1");
    const auto [lo, hi] = age_range(profile);
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xa9e5u};
    std::mt19937_64 gen(seq);
    std::vector<int> ages(static_cast<std::size_t>(n));
    for (auto& a : ages) {
        // Lemire's multiply-shift; bias is < span / 2^64.
        const auto x = gen();
        const auto r = static_cast<std::uint64_t>((static_cast<unsigned __int128>(x) * span) >> 64);
        a = lo + static_cast<int>(r);
    }
    return ages;
}

/// Shrinks a full-size instance for desk runs: fleet size rounded up, SLA
/// entries rounded to nearest, track capacity rounded up.
inline Instance scale_instance(const Instance& in, double scale) {
    if (!(scale > 0.0 && scale <= 1.0)) throw std::invalid_argument("scale must lie in (0, 1]");
    if (scale == 1.0) return in;
    Instance out = in;
    out.fleet.num_railcars = std::max(1, static_cast<int>(std::ceil(in.fleet.num_railcars * scale - 1e-9)));
    out.fleet.track_capacity = static_cast<int>(std::ceil(in.fleet.track_capacity * scale - 1e-9));
    for (auto& s : out.sla.requirements) s = std::max(0, static_cast<int>(std::lround(s * scale)));
    if (in.fleet.ages_set())
        out.fleet.initial_ages.resize(static_cast<std::size_t>(out.fleet.num_railcars));
    return out;
}

}  // namespace railmaint
