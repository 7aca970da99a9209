// Resource planning for building large W states by repeated pairwise fusion.
//
// Cost accounting: R[W_out] = (R[W_a] + R[W_b]) / P_s(a, b), a failed fusion
// losing both inputs. optimal_costs minimizes this over all split trees.
// run_campaign simulates the same strategy, optionally returning the
// recyclable failure outputs to a pool.
#pragma once

#include "wfuse/exact.hpp"

#include <boost/rational.hpp>

#include <cmath>
#include <cstdint>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wfuse {

using Probability = boost::rational<std::int64_t>;

struct FuseOutcome {
    int output_size = 0;
    Probability success_probability{1};
};

/// A pairwise fusion scheme. fuse returns nullopt for input sizes it cannot handle.
struct SchemeSpec {
    std::string name;
    std::function<std::optional<FuseOutcome>(int, int)> fuse;
    int min_input = 2;
};

inline constexpr int kMaxPlanSize = 10000;

/// (n+m) / (2nm)
inline Probability ps_qlf(int n, int m) {
    if (n < 2) throw std::invalid_argument("n must be ≥ 2");
    if (m < 2) throw std::invalid_argument("m must be ≥ 2");
    return Probability(n + m, std::int64_t{2} * n * m);
}

inline SchemeSpec qlf_scheme() {
    return {"qlf",
            [](int n, int m) -> std::optional<FuseOutcome> {
                if (n < 2 || m < 2) return std::nullopt;
                return FuseOutcome{n + m, ps_qlf(n, m)};
            },
            2};
}

/// Leaf weights of one QLF fusion attempt.
struct QlfOutcomeDistribution {
    Probability success;
    Probability recyclable_d;
    Probability recyclable_wnm2;
};

inline QlfOutcomeDistribution qlf_outcomes(int n, int m) {
    const std::int64_t nm = std::int64_t{n} * m;
    return {ps_qlf(n, m), Probability((n - 1) * std::int64_t{m - 1}, nm), Probability(n + m - 2, 2 * nm)};
}

template <class Cost>
Cost to_cost(const Probability& p) {
    if constexpr (std::is_same_v<Cost, Rational>)
        return Rational(p.numerator(), p.denominator());
    else
        return Cost(p.numerator()) / Cost(p.denominator());
}

template <class Cost = double>
Cost compose_cost(const Cost& cost_n, const Cost& cost_m, const SchemeSpec& scheme, int n, int m) {
    const auto outcome = scheme.fuse(n, m);
    if (!outcome)
        throw std::invalid_argument("scheme '" + scheme.name + "' rejects sizes (" + std::to_string(n) + ", " +
                                    std::to_string(m) + ")");
    return (cost_n + cost_m) / to_cost<Cost>(outcome->success_probability);
}

template <class Cost>
struct CostEntry {
    Cost opt_cost;
    /// Inputs (smaller first) of the optimal last fusion; empty for the seed.
    std::optional<std::pair<int, int>> best_split;
};

template <class Cost>
struct BasicCostTable {
    std::string scheme;
    int seed_size = 0;
    Cost seed_cost{};
    int max_size = 0;
    std::map<int, CostEntry<Cost>> entries;

    bool reachable(int size) const { return entries.contains(size); }
    const CostEntry<Cost>& at(int size) const {
        auto it = entries.find(size);
        if (it == entries.end()) throw std::out_of_range("size " + std::to_string(size) + " is not reachable");
        return it->second;
    }
};

using CostTable = BasicCostTable<double>;
using ExactCostTable = BasicCostTable<Rational>;

/// Optimal cost of every size up to max_size buildable from one seed type.
/// Ties go to the most balanced split.
template <class Cost = double>
BasicCostTable<Cost> optimal_costs(const SchemeSpec& scheme, int seed_size, Cost seed_cost, int max_size) {
    if (max_size > kMaxPlanSize) throw std::invalid_argument("max size is limited to 10000");
    if (seed_size < scheme.min_input)
        throw std::invalid_argument("seed size " + std::to_string(seed_size) + " is below the scheme minimum");
    if (!(seed_cost > Cost{0})) throw std::invalid_argument("seed cost must be positive");

    BasicCostTable<Cost> table{scheme.name, seed_size, seed_cost, max_size, {}};
    if (max_size < seed_size) return table;

    std::vector<std::optional<CostEntry<Cost>>> best(std::size_t(max_size) + 1);
    best[seed_size] = CostEntry<Cost>{seed_cost, std::nullopt};
    std::vector<int> finished;

    for (int size = seed_size; size <= max_size; ++size) {
        if (!best[size]) continue;
        finished.push_back(size);
        // every pair (a, size) with a <= size is relaxed once, after both are final
        for (int a : finished) {
            const auto outcome = scheme.fuse(a, size);
            if (!outcome) continue;
            const int out = outcome->output_size;
            if (out <= size || out > max_size) continue;
            const Cost cost = (best[a]->opt_cost + best[size]->opt_cost) / to_cost<Cost>(outcome->success_probability);
            auto& slot = best[out];
            if (!slot || cost < slot->opt_cost ||
                (cost == slot->opt_cost && size - a < slot->best_split->second - slot->best_split->first)) {
                slot = CostEntry<Cost>{cost, std::pair{a, size}};
            }
        }
    }
    for (int size = seed_size; size <= max_size; ++size)
        if (best[size]) table.entries.emplace(size, std::move(*best[size]));
    return table;
}

struct SeedConfig {
    int size = 2;
    double cost = 1.0;
};

struct CostRow {
    int size = 0;
    std::string scheme;
    int seed_size = 0;
    double seed_cost = 0.0;
    double opt_cost = 0.0;
    std::optional<std::pair<int, int>> split;
};

/// Optimal costs per (scheme, seed) pair, in argument order then by size.
/// Seeds a scheme cannot take are skipped.
inline std::vector<CostRow> compare_schemes(const std::vector<SchemeSpec>& schemes,
                                            const std::vector<SeedConfig>& seeds, int max_size) {
    std::vector<CostRow> rows;
    for (const auto& scheme : schemes) {
        for (const auto& seed : seeds) {
            if (seed.size < scheme.min_input) continue;
            const auto table = optimal_costs<double>(scheme, seed.size, seed.cost, max_size);
            for (const auto& [size, entry] : table.entries)
                rows.push_back({size, scheme.name, seed.size, seed.cost, entry.opt_cost, entry.best_split});
        }
    }
    return rows;
}

/// 12 significant digits, shortest form.
inline std::string format_number(double value) {
    std::ostringstream os;
    os << std::setprecision(12) << value;
    return os.str();
}

inline void write_cost_csv(std::ostream& os, const std::vector<CostRow>& rows) {
    os << "size,scheme,seed_size,seed_cost,opt_cost,split_k,split_rest\n";
    for (const auto& r : rows) {
        os << r.size << ',' << r.scheme << ',' << r.seed_size << ',' << format_number(r.seed_cost) << ','
           << format_number(r.opt_cost) << ',';
        if (r.split) os << r.split->first << ',' << r.split->second;
        else os << ',';
        os << '\n';
    }
}

/// gnuplot data: one "size cost" block per (scheme, seed) curve, blocks separated by two blank lines.
inline void write_plot_data(std::ostream& os, const std::vector<CostRow>& rows) {
    std::string current;
    bool first = true;
    for (const auto& r : rows) {
        const std::string curve = r.scheme + " seed=W_" + std::to_string(r.seed_size);
        if (curve != current) {
            if (!first) os << "\n\n";
            os << "# " << curve << '\n';
            current = curve;
            first = false;
        }
        os << r.size << ' ' << format_number(r.opt_cost) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Monte-Carlo campaigns

struct CampaignResult {
    int target_size = 0;
    int seed_size = 0;
    std::int64_t trials = 0;
    double mean_seeds_consumed = 0.0;
    double std_error = 0.0;
    bool recycling_enabled = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline double uniform01(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

class CampaignTrial {
public:
    CampaignTrial(const CostTable& plan, bool recycling, std::mt19937_64& rng)
        : plan_(plan), recycling_(recycling), rng_(rng) {}

    /// Seeds consumed to deliver one W_size.
    std::int64_t run(int size) {
        acquire(size);
        return seeds_used_;
    }

private:
    void acquire(int size) {
        if (recycling_) {
            auto it = pool_.find(size);
            if (it != pool_.end() && it->second > 0) {
                --it->second;
                return;
            }
        }
        if (size == plan_.seed_size) {
            ++seeds_used_;
            return;
        }
        const auto [a, b] = *plan_.at(size).best_split;
        const auto outcomes = qlf_outcomes(a, b);
        const double p_success = to_cost<double>(outcomes.success);
        const double p_d = to_cost<double>(outcomes.recyclable_d);
        while (true) {
            acquire(a);
            acquire(b);
            const double u = uniform01(rng_);
            if (u < p_success) return;
            if (!recycling_) continue;
            if (u < p_success + p_d) {
                give_back(a - 1);
                give_back(b - 1);
            } else {
                give_back(a + b - 2);
            }
        }
    }

    void give_back(int size) {
        if (size >= 2) ++pool_[size];
    }

    const CostTable& plan_;
    bool recycling_;
    std::mt19937_64& rng_;
    std::map<int, int> pool_;
    std::int64_t seeds_used_ = 0;
};

}  // namespace detail

/// Repeated QLF fusion attempts following the optimal split tree; reports the
/// mean number of seed states consumed per delivered W_target.
inline CampaignResult run_campaign(int target_size, int seed_size, std::int64_t trials, bool recycling,
                                   std::uint64_t rng_seed) {
    if (trials <= 0) throw std::invalid_argument("trials must be positive");
    if (target_size > kMaxPlanSize) throw std::invalid_argument("target size is limited to 10000");
    const auto plan = optimal_costs<double>(qlf_scheme(), seed_size, 1.0, target_size);
    if (!plan.reachable(target_size))
        throw std::invalid_argument("target W_" + std::to_string(target_size) + " is unreachable from W_" +
                                    std::to_string(seed_size) + " seeds");

    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(detail::splitmix64(rng_seed ^ detail::splitmix64(std::uint64_t(trial))));
        detail::CampaignTrial run(plan, recycling, rng);
        const double used = double(run.run(target_size));
        const double delta = used - mean;
        mean += delta / double(trial + 1);
        m2 += delta * (used - mean);
    }
    const double variance = trials > 1 ? m2 / double(trials - 1) : 0.0;
    return {target_size, seed_size, trials, mean, std::sqrt(variance / double(trials)), recycling};
}

}  // namespace wfuse
