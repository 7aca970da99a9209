// Command-line front end: fuse, verify, plan, error, campaign.
//
// Exit codes: 0 success, 1 verification failure, 2 usage error.
#pragma once

#include "wfuse/serialize.hpp"
#include "wfuse/verify.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace wfuse::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitUsage = 2;

inline constexpr std::uint64_t kDefaultRngSeed = 42;

/// WFUSE_SEED if set and numeric, otherwise the built-in default.
inline std::uint64_t default_rng_seed() {
    if (const char* env = std::getenv("WFUSE_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
        }
    }
    return kDefaultRngSeed;
}

struct RunConfig {
    int n = 0;
    int m = 0;
    std::string format = "json";
    int verify_max = 8;
    std::vector<std::string> schemes{"qlf"};
    std::vector<int> seeds{2, 3};
    double seed_cost = 1.0;
    int max_size = 50;
    std::string out;
    double alpha = 90000.0;
    double theta = 0.01;
    int target = 0;
    int seed_size = 2;
    std::int64_t trials = 100000;
    bool recycling = false;
    std::uint64_t rng_seed = kDefaultRngSeed;
};

namespace detail {

inline int usage_error(std::ostream& err, const std::string& message) {
    err << "error: " << message << '\n';
    return kExitUsage;
}

inline int cmd_fuse(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.n < 2) return usage_error(err, "n must be ≥ 2");
    if (cfg.m < 2) return usage_error(err, "m must be ≥ 2");
    const auto tree = run_fusion<Complex>(cfg.n, cfg.m);
    const auto exact = run_fusion<SurdAmplitude>(cfg.n, cfg.m);
    if (cfg.format == "csv") {
        out << "class,sizes,cum_prob,cum_prob_exact\n";
        for (LeafKind kind : {LeafKind::SuccessWnm, LeafKind::RecyclableD, LeafKind::RecyclableWnm2}) {
            const auto* leaf = tree.first_leaf(kind);
            if (!leaf) continue;
            std::string sizes;
            for (int s : leaf->classification.sizes) sizes += (sizes.empty() ? "" : ";") + std::to_string(s);
            out << to_string(kind) << ',' << sizes << ',' << format_number(tree.leaf_probability(kind)) << ','
                << rational_string(exact.leaf_probability(kind)) << '\n';
        }
    } else {
        out << to_json(tree, &exact).dump(2) << '\n';
    }
    return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err, const TreeHook& hook) {
    if (cfg.verify_max < 4 || cfg.verify_max > kMaxDenseQubits)
        return usage_error(err, "--max must be between 4 and 14 total qubits");
    const auto cases = verify_all(cfg.verify_max, hook);
    print_verify_table(out, cases);
    bool all = true;
    for (const auto& c : cases) all = all && c.passed;
    out << cases.size() << " case(s), " << (all ? "all passed" : "FAILURES") << '\n';
    return all ? kExitOk : kExitVerifyFailed;
}

inline int cmd_plan(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    std::vector<SchemeSpec> schemes;
    for (const auto& name : cfg.schemes) {
        if (name == "qlf")
            schemes.push_back(qlf_scheme());
        else
            return usage_error(err, "unknown scheme '" + name + "' (available: qlf)");
    }
    if (cfg.max_size < 2 || cfg.max_size > kMaxPlanSize) return usage_error(err, "--max must be in [2, 10000]");
    if (!(cfg.seed_cost > 0.0)) return usage_error(err, "--seed-cost must be positive");
    std::vector<SeedConfig> seeds;
    for (int s : cfg.seeds) {
        if (s < 2) return usage_error(err, "seed sizes must be ≥ 2");
        seeds.push_back({s, cfg.seed_cost});
    }
    const auto rows = compare_schemes(schemes, seeds, cfg.max_size);
    for (const auto& scheme : schemes) {
        for (const auto& seed : seeds) {
            int count = 0;
            for (const auto& r : rows) count += (r.scheme == scheme.name && r.seed_size == seed.size);
            if (count == 0)
                err << "note: " << scheme.name << " from W_" << seed.size << " reaches no size ≤ " << cfg.max_size
                    << "; table is empty\n";
            else
                err << "note: " << scheme.name << " from W_" << seed.size << " reaches " << count
                    << " size(s) ≤ " << cfg.max_size << "; unlisted sizes are unreachable\n";
        }
    }
    std::ostringstream csv;
    write_cost_csv(csv, rows);
    if (!cfg.out.empty()) {
        std::ofstream csv_file(cfg.out + ".csv");
        std::ofstream dat_file(cfg.out + ".dat");
        if (!csv_file || !dat_file) return usage_error(err, "cannot write to '" + cfg.out + "'");
        csv_file << csv.str();
        write_plot_data(dat_file, rows);
    }
    if (cfg.format == "json") {
        Json doc = Json::array();
        for (const auto& r : rows) {
            Json row{{"size", r.size},
                     {"scheme", r.scheme},
                     {"seed_size", r.seed_size},
                     {"seed_cost", round12(r.seed_cost)},
                     {"opt_cost", round12(r.opt_cost)}};
            if (r.split) row["split"] = {r.split->first, r.split->second};
            doc.push_back(std::move(row));
        }
        out << doc.dump(2) << '\n';
    } else {
        out << csv.str();
    }
    return kExitOk;
}

inline int cmd_error(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!(cfg.alpha > 0.0)) return usage_error(err, "alpha must be positive");
    if (!(cfg.theta > 0.0) || !(cfg.theta < std::numbers::pi / 4)) return usage_error(err, "theta must be in (0, pi/4)");
    const auto probe = ProbeConfig::make(cfg.alpha, cfg.theta);
    out << to_json(worst_protocol_discrimination(probe)).dump(2) << '\n';
    return kExitOk;
}

inline int cmd_campaign(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (cfg.trials <= 0) return usage_error(err, "trials must be positive");
    if (cfg.seed_size < 2) return usage_error(err, "seed size must be ≥ 2");
    if (cfg.target < cfg.seed_size || cfg.target > kMaxPlanSize)
        return usage_error(err, "target W_" + std::to_string(cfg.target) + " is unreachable from W_" +
                                    std::to_string(cfg.seed_size) + " seeds");
    const auto plan = optimal_costs<double>(qlf_scheme(), cfg.seed_size, 1.0, cfg.target);
    if (!plan.reachable(cfg.target))
        return usage_error(err, "target W_" + std::to_string(cfg.target) + " is unreachable from W_" +
                                    std::to_string(cfg.seed_size) + " seeds");
    const auto result = run_campaign(cfg.target, cfg.seed_size, cfg.trials, cfg.recycling, cfg.rng_seed);
    out << to_json(result).dump(2) << '\n';
    return kExitOk;
}

}  // namespace detail

/// Parses argv and dispatches. The hook is only used by `verify`.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err,
                   const TreeHook& verify_hook = {}) {
    RunConfig cfg;
    cfg.rng_seed = default_rng_seed();

    CLI::App app{"W-state fusion simulator and resource planner", "wfuse"};
    app.require_subcommand(1);

    auto* fuse = app.add_subcommand("fuse", "Run one fusion of W_n and W_m and print the outcome tree");
    fuse->add_option("-n", cfg.n, "Size of party A's W state")->required();
    fuse->add_option("-m", cfg.m, "Size of party B's W state")->required();
    fuse->add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

    auto* verify = app.add_subcommand("verify", "Cross-check the symbolic pipeline against the dense oracle");
    verify->add_option("--max", cfg.verify_max, "Largest n+m to check");

    auto* plan = app.add_subcommand("plan", "Optimal resource costs per target size (CSV)");
    plan->add_option("--scheme", cfg.schemes, "Fusion scheme(s)");
    plan->add_option("--seed", cfg.seeds, "Seed W-state size(s)");
    plan->add_option("--seed-cost", cfg.seed_cost, "Cost of one seed state");
    plan->add_option("--max", cfg.max_size, "Largest target size");
    plan->add_option("--out", cfg.out, "Write <out>.csv and gnuplot data <out>.dat");
    plan->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"json", "csv"}));

    auto* error = app.add_subcommand("error", "Homodyne discrimination error at a probe operating point");
    error->add_option("--alpha", cfg.alpha, "Probe coherent amplitude");
    error->add_option("--theta", cfg.theta, "Cross-Kerr phase per photon (rad)");

    auto* campaign = app.add_subcommand("campaign", "Monte-Carlo seed consumption for one target W state");
    campaign->add_option("--target", cfg.target, "Target W-state size")->required();
    campaign->add_option("--seed-size", cfg.seed_size, "Seed W-state size");
    campaign->add_option("--trials", cfg.trials, "Number of delivered targets to simulate");
    campaign->add_flag("--recycling", cfg.recycling, "Reuse recyclable failure outputs");
    campaign->add_option("--rng", cfg.rng_seed, "RNG seed (default: $WFUSE_SEED or 42)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    if (plan->parsed() && !plan->count("--format")) cfg.format = "csv";

    try {
        if (fuse->parsed()) return detail::cmd_fuse(cfg, out, err);
        if (verify->parsed()) return detail::cmd_verify(cfg, out, err, verify_hook);
        if (plan->parsed()) return detail::cmd_plan(cfg, out, err);
        if (error->parsed()) return detail::cmd_error(cfg, out, err);
        if (campaign->parsed()) return detail::cmd_campaign(cfg, out, err);
    } catch (const std::invalid_argument& e) {
        return detail::usage_error(err, e.what());
    } catch (const std::out_of_range& e) {
        return detail::usage_error(err, e.what());
    }
    return kExitUsage;
}

}  // namespace wfuse::cli
