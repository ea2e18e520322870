#pragma once

// Reproducible failure-scenario sets.
//
// Each (railcar, scenario) pair owns its own pseudorandom substream: a
// std::seed_seq built from (seed low word, seed high word, railcar index,
// scenario index) seeds an mt19937_64 whose first output is mapped to the
// open interval (0, 1). The draw for a pair therefore never depends on the
// order in which pairs are visited.

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "core.hpp"
#include "reliability.hpp"

namespace railmaint {

struct ScenarioSet {
    // failure_times[j][k]: failure period of railcar j in scenario k, in [1, T+1].
    std::vector<std::vector<int>> failure_times;
    std::vector<double> probabilities;
    std::uint64_t seed = 0;
    WeibullParams weibull;

    [[nodiscard]] int num_railcars() const noexcept { return static_cast<int>(failure_times.size()); }
    [[nodiscard]] int num_scenarios() const noexcept { return static_cast<int>(probabilities.size()); }

    /// Failure times of every railcar in scenario k (0-based).
    [[nodiscard]] std::vector<int> scenario(int k) const {
        std::vector<int> xi(failure_times.size());
        for (std::size_t j = 0; j < failure_times.size(); ++j)
            xi[j] = failure_times[j].at(static_cast<std::size_t>(k));
        return xi;
    }

    /// FNV-1a over the failure-time matrix; used to confirm two methods saw the same sample.
    [[nodiscard]] std::uint64_t content_hash() const {
        std::uint64_t h = 1469598103934665603ull;
        auto mix = [&h](std::uint64_t v) {
            for (int b = 0; b < 8; ++b) {
                h ^= (v >> (8 * b)) & 0xffu;
                h *= 1099511628211ull;
            }
        };
        mix(failure_times.size());
        for (const auto& row : failure_times) {
            mix(row.size());
            for (int x : row) mix(static_cast<std::uint64_t>(x));
        }
        return h;
    }
};

/// Uniform draw in (0, 1) for substream (railcar, scenario) under `seed`.
inline double substream_uniform(std::uint64_t seed, std::uint32_t railcar, std::uint32_t scenario) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), railcar, scenario};
    std::mt19937_64 gen(seq);
    return (static_cast<double>(gen() >> 11) + 0.5) * 0x1p-53;
}

/// Child seed for an independent stream, e.g. one SAA replication.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint32_t tag) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32), tag, 0x5eedu};
    std::uint32_t out[2];
    seq.generate(out, out + 2);
    return (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
}

/// Draws k scenarios with equal probability 1/k. `workers` > 1 splits railcars
/// across threads; the result is identical for any worker count.
inline ScenarioSet generate_scenarios(const Instance& instance, const WeibullParams& w, int k, std::uint64_t seed,
                                      int workers = 1) {
    if (k < 1) throw std::invalid_argument("generate_scenarios: k must be >= 1");
    if (!instance.fleet.ages_set()) throw std::invalid_argument("generate_scenarios: fleet ages not set");
    w.validate();
    const int n = instance.num_railcars();
    const int horizon = instance.num_periods();

    ScenarioSet set;
    set.seed = seed;
    set.weibull = w;
    set.probabilities.assign(static_cast<std::size_t>(k), 1.0 / k);
    set.failure_times.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(k)));

    auto fill = [&](int j) {
        const double age = instance.fleet.initial_ages[static_cast<std::size_t>(j)];
        auto& row = set.failure_times[static_cast<std::size_t>(j)];
        for (int s = 0; s < k; ++s) {
            const double u = substream_uniform(seed, static_cast<std::uint32_t>(j), static_cast<std::uint32_t>(s));
            row[static_cast<std::size_t>(s)] = sample_failure_time(w, age, horizon, u);
        }
    };

    workers = std::clamp(workers, 1, std::max(1, n));
    if (workers == 1) {
        for (int j = 0; j < n; ++j) fill(j);
    } else {
        std::vector<std::jthread> pool;
        for (int w_id = 0; w_id < workers; ++w_id)
            pool.emplace_back([&, w_id] {
                for (int j = w_id; j < n; j += workers) fill(j);
            });
    }
    return set;
}

// ---------------------------------------------------------------------------
// Columnar text: header "railcar,scenario,failure_time", 1-based indices.

inline void write_scenarios(std::ostream& os, const ScenarioSet& set) {
    os << "railcar,scenario,failure_time\n";
    for (std::size_t j = 0; j < set.failure_times.size(); ++j)
        for (std::size_t k = 0; k < set.failure_times[j].size(); ++k)
            os << j + 1 << ',' << k + 1 << ',' << set.failure_times[j][k] << '\n';
}

inline void write_scenarios(const std::string& path, const ScenarioSet& set) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_scenarios(out, set);
    if (!out) throw std::runtime_error("write failed: " + path);
}

inline ScenarioSet read_scenarios(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("railcar,scenario,failure_time", 0) != 0)
        throw std::runtime_error("scenario file: missing header");
    struct Entry { int j, k, xi; };
    std::vector<Entry> entries;
    int n = 0, k_max = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        Entry e{};
        char c1 = 0, c2 = 0;
        if (!(ss >> e.j >> c1 >> e.k >> c2 >> e.xi) || c1 != ',' || c2 != ',' || e.j < 1 || e.k < 1)
            throw std::runtime_error("scenario file: malformed row '" + line + "'");
        n = std::max(n, e.j);
        k_max = std::max(k_max, e.k);
        entries.push_back(e);
    }
    if (entries.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(k_max))
        throw std::runtime_error("scenario file: incomplete railcar x scenario grid");
    ScenarioSet set;
    set.failure_times.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(k_max), -1));
    for (const auto& e : entries) set.failure_times[e.j - 1][e.k - 1] = e.xi;
    for (const auto& row : set.failure_times)
        if (std::find(row.begin(), row.end(), -1) != row.end())
            throw std::runtime_error("scenario file: duplicate or missing entries");
    set.probabilities.assign(static_cast<std::size_t>(k_max), 1.0 / k_max);
    return set;
}

inline ScenarioSet read_scenarios(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    return read_scenarios(in);
}

}  // namespace railmaint
