// One PASS/FAIL line per acceptance criterion; exits nonzero if any fails.
#include "wfuse/cli.hpp"
#include "tree_oracle.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace wfuse;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Check {
    bool ok = true;
    std::string detail;

    void require(bool condition, const std::string& what) {
        if (!condition && ok) detail = what;
        ok = ok && condition;
    }
};

std::string str(double v) {
    std::ostringstream os;
    os << std::setprecision(6) << v;
    return os.str();
}

std::string pair_str(int n, int m) { return "(" + std::to_string(n) + "," + std::to_string(m) + ")"; }

/// Keeps one probe class and resets it, without renormalizing.
BranchState keep_class(const BranchState& s, int abs_half_theta) {
    return s.transform([&](const FusionTerm& t, auto emit) {
        if (std::abs(t.probe_half_theta) != abs_half_theta) return;
        FusionTerm u = t;
        u.probe_half_theta = 0;
        emit(u);
    });
}

/// Success amplitude along the zero-phase spatial branch with every projection
/// left unnormalized. After the wave plates the two legs differ in polarization,
/// so the couplers do not change the norm.
double unnormalized_branch_amplitude(int n, int m) {
    auto s = cross_kerr_on_polarization(build_input_state(n, m), Photon::First, Polarization::H, -2);
    s = cross_kerr_on_polarization(s, Photon::Second, Polarization::H, -2);
    s = keep_class(probe_linear_shift(s, 1), 1);
    s = keep_class(spatial_entangle(s), 0);
    s = apply_hwp45(s, Photon::First, PathLabel::S11);
    s = apply_hwp45(s, Photon::Second, PathLabel::S22);
    s = apply_path_coupler(apply_path_coupler(s, Photon::First), Photon::Second);
    s = cross_kerr_on_polarization(s, Photon::First, Polarization::V, -2);
    s = cross_kerr_on_polarization(s, Photon::Second, Polarization::V, -2);
    s = keep_class(probe_linear_shift(s, 1), 1);
    const auto dense = expand_symbolic(s);
    const auto w = make_w_state(n + m);
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < dense.dimension(); ++i) overlap += std::conj(w[i]) * dense[i];
    return std::abs(overlap);
}

Check criterion1() {
    Check c;
    const auto start = Clock::now();
    for (int n = 2; n <= 8; ++n) {
        for (int m = 2; m <= 8; ++m) {
            const Rational expected(n + m, 2 * n * m);
            const auto exact = run_fusion<SurdAmplitude>(n, m).leaf_probability(LeafKind::SuccessWnm);
            const double approx = run_fusion(n, m).leaf_probability(LeafKind::SuccessWnm);
            c.require(exact == expected, "exact P_s mismatch at " + pair_str(n, m));
            c.require(std::abs(approx - detail::to_double(expected)) <= 1e-12, "float P_s off at " + pair_str(n, m));
        }
    }
    const double elapsed = seconds_since(start);
    c.require(elapsed < 1.0, "runtime " + str(elapsed) + " s");
    if (c.ok) c.detail = "49 cases exact, runtime " + str(elapsed) + " s";
    return c;
}

Check criterion2() {
    Check c;
    for (int n = 2; n <= 8; ++n) {
        for (int m = 2; m <= 8; ++m) {
            const auto exact = run_fusion<SurdAmplitude>(n, m);
            const auto approx = run_fusion(n, m);
            const Rational p1(n + m - 1, n * m), p3(n + m, 2 * (n + m - 1));
            const auto check = [&](const auto& tree, auto close) {
                close(find_branch(tree.stage("step1")->branches, 1)->probability, p1, "step 1");
                const auto& step2 = tree.stage("step2")->branches;
                c.require(step2.size() == 2, "step 2 branch count at " + pair_str(n, m));
                for (const auto& b : step2) close(b.probability, Rational(1, 2), "step 2");
                for (const auto* label : {"step3[|k|=0]", "step3[|k|=2 +swap]"})
                    close(find_branch(tree.stage(label)->branches, 1)->probability, p3, "step 3");
            };
            check(exact, [&](const Rational& got, const Rational& want, const char* what) {
                c.require(got == want, std::string(what) + " exact mismatch at " + pair_str(n, m));
            });
            check(approx, [&](double got, const Rational& want, const char* what) {
                c.require(std::abs(got - detail::to_double(want)) <= 1e-12,
                          std::string(what) + " float mismatch at " + pair_str(n, m));
            });
        }
    }
    if (c.ok) c.detail = "49 cases, exact and float";
    return c;
}

Check criterion3() {
    Check c;
    double worst_fid = 0.0, worst_amp = 0.0;
    int cases = 0;
    for (int n = 2; n + 2 <= 10; ++n) {
        for (int m = 2; n + m <= 10; ++m) {
            ++cases;
            const auto tree = run_fusion(n, m);
            const auto oracle = brute_force_fusion(n, m);
            const auto symbolic = expand_symbolic(tree.first_leaf(LeafKind::SuccessWnm)->state);
            const double f1 = std::abs(fidelity(symbolic, make_w_state(n + m)).value - 1.0);
            const double f2 = std::abs(fidelity(oracle.success_state, make_w_state(n + m)).value - 1.0);
            worst_fid = std::max({worst_fid, f1, f2});
            const double amp = unnormalized_branch_amplitude(n, m);
            const double want = std::sqrt(double(n + m)) / (2.0 * std::sqrt(double(n * m)));
            worst_amp = std::max(worst_amp, std::abs(amp - want));
            c.require(f1 <= 1e-10 && f2 <= 1e-10, "fidelity off at " + pair_str(n, m));
            c.require(std::abs(amp - want) <= 1e-12, "branch amplitude " + str(amp) + " vs " + str(want) + " at " + pair_str(n, m));
        }
    }
    if (c.ok)
        c.detail = std::to_string(cases) + " cases, max |1-F| " + str(worst_fid) + ", max amplitude gap " + str(worst_amp);
    return c;
}

Check criterion4() {
    Check c;
    int cases = 0;
    for (int n = 2; n + 2 <= 10; ++n) {
        for (int m = 2; n + m <= 10; ++m) {
            ++cases;
            const auto exact = run_fusion<SurdAmplitude>(n, m);
            const auto tree = run_fusion(n, m);
            c.require(exact.leaf_probability(LeafKind::RecyclableD) == Rational((n - 1) * (m - 1), n * m),
                      "RecyclableD probability at " + pair_str(n, m));
            c.require(exact.leaf_probability(LeafKind::RecyclableWnm2) == Rational(n + m - 2, 2 * n * m),
                      "RecyclableWnm2 probability at " + pair_str(n, m));
            c.require(std::abs(tree.total_probability() - 1.0) <= 1e-12, "leaves do not sum to 1 at " + pair_str(n, m));
            const auto& d = tree.first_leaf(LeafKind::RecyclableD)->state;
            const double fd = fidelity(expand_kept_registers(d), tensor(make_w_state(n - 1), make_w_state(m - 1))).value;
            c.require(std::abs(fd - 1.0) <= 1e-10, "RecyclableD kept state at " + pair_str(n, m));
            for (const auto& leaf : tree.leaves) {
                if (leaf.classification.kind != LeafKind::RecyclableWnm2) continue;
                const double fw = fidelity(expand_kept_registers(leaf.state), make_w_state(n + m - 2)).value;
                c.require(std::abs(fw - 1.0) <= 1e-10, "RecyclableWnm2 kept state at " + pair_str(n, m));
            }
        }
    }
    if (c.ok) c.detail = std::to_string(cases) + " cases";
    return c;
}

Check criterion5() {
    Check c;
    // hand-multiplied BS * diag(1, e^{i pi}) * BS
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix2 bs{{{r, r}, {r, -r}}};
    const Matrix2 ps{{{1.0, 0.0}, {0.0, std::polar(1.0, std::numbers::pi)}}};
    Matrix2 mz{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) mz[i][j] += bs[i][k] * ps[k][l] * bs[l][j];
    const double gap = global_phase_distance(two_mode_fock_matrix(mz), swap_gate_matrix());
    c.require(gap <= 1e-12, "Mach-Zehnder differs from swap by " + str(gap));
    c.require(global_phase_distance(two_mode_fock_matrix(mach_zehnder_matrix()), swap_gate_matrix()) <= 1e-12,
              "library Mach-Zehnder differs from swap");
    for (int n = 2; n <= 8; ++n) {
        for (int m = 2; m <= 8; ++m) {
            const auto step1 = step1_polarization_gate(build_input_state<SurdAmplitude>(n, m));
            const auto branches = spatial_branches(find_branch(step1, 1)->post_state);
            const auto* zero = find_branch(branches, 0);
            const auto* two = find_branch(branches, 2);
            c.require(zero && two && zero->post_state == two->post_state,
                      "swapped branch differs at " + pair_str(n, m));
        }
    }
    if (c.ok) c.detail = "matrix gap " + str(gap) + ", swapped branch exactly equal for 49 cases";
    return c;
}

/// Gaussian tail beyond half the separation (unit variance), composite Simpson.
double gaussian_overlap(double separation) {
    const double a = separation / 2.0, b = a + 40.0;
    constexpr int n = 20000;
    const double h = (b - a) / n;
    auto pdf = [](double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi); };
    double sum = pdf(a) + pdf(b);
    for (int i = 1; i < n; ++i) sum += (i % 2 ? 4.0 : 2.0) * pdf(a + i * h);
    return sum * h / 3.0;
}

Check criterion6() {
    Check c;
    const auto probe = ProbeConfig::make(90000.0, 0.01);
    const auto worst = worst_protocol_discrimination(probe);
    c.require(std::abs(worst.p_error - 3.4e-6) <= 0.15 * 3.4e-6, "p_error " + str(worst.p_error));
    const auto it = worst.means.begin();
    const double oracle = gaussian_overlap(std::abs(it->second - std::next(it)->second));
    c.require(std::abs(oracle - worst.p_error) <= 1e-6 * oracle, "numerical overlap " + str(oracle));
    double previous = 1.0;
    for (double alpha : {30000.0, 60000.0, 90000.0, 120000.0, 150000.0}) {
        const double p = worst_protocol_discrimination(ProbeConfig::make(alpha, 0.01)).p_error;
        c.require(p < previous, "not decreasing at alpha " + str(alpha));
        previous = p;
    }
    if (c.ok) c.detail = "p_error " + str(worst.p_error) + " (quadrature oracle " + str(oracle) + ")";
    return c;
}

Check criterion7() {
    Check c;
    for (int seed : {2, 3}) {
        testing_support::TreeEnumerator trees(seed, Rational(1));
        const auto table = optimal_costs<Rational>(qlf_scheme(), seed, Rational(1), 10);
        for (int size = seed; size <= 10; ++size) {
            const auto& all = trees.costs(size);
            c.require(table.reachable(size) == !all.empty(), "reachability differs at W_" + std::to_string(size));
            if (!all.empty())
                c.require(table.at(size).opt_cost == *all.begin(), "cost differs at W_" + std::to_string(size));
        }
    }
    c.require(compose_cost(1.0, 1.0, qlf_scheme(), 2, 2) == 4.0, "compose (2,2)");
    c.require(compose_cost(1.0, 1.0, qlf_scheme(), 3, 3) == 6.0, "compose (3,3)");
    const auto pairs = optimal_costs<Rational>(qlf_scheme(), 2, Rational(1), 250);
    const auto triplets = optimal_costs<Rational>(qlf_scheme(), 3, Rational(1), 250);
    int common = 0;
    for (const auto& [size, entry] : triplets.entries) {
        if (!pairs.reachable(size)) continue;
        ++common;
        c.require(entry.opt_cost <= pairs.at(size).opt_cost, "W_3 seeds costlier at W_" + std::to_string(size));
    }
    const char* argv[] = {"wfuse", "plan", "--max", "250"};
    std::ostringstream out, err;
    const auto start = Clock::now();
    const int code = cli::run_cli(4, argv, out, err);
    const double elapsed = seconds_since(start);
    c.require(code == 0, "plan exited " + std::to_string(code));
    c.require(elapsed < 1.0, "plan took " + str(elapsed) + " s");
    if (c.ok) c.detail = std::to_string(common) + " common sizes, plan --max 250 in " + str(elapsed) + " s";
    return c;
}

Check criterion8() {
    Check c;
    const auto off = run_campaign(4, 2, 100000, false, cli::kDefaultRngSeed);
    const auto on = run_campaign(4, 2, 100000, true, cli::kDefaultRngSeed);
    c.require(std::abs(off.mean_seeds_consumed - 4.0) <= 3.0 * off.std_error,
              "recycling-off mean " + str(off.mean_seeds_consumed) + " +/- " + str(off.std_error));
    c.require(on.mean_seeds_consumed <= off.mean_seeds_consumed + 3.0 * std::hypot(on.std_error, off.std_error),
              "recycling-on mean " + str(on.mean_seeds_consumed));
    if (c.ok)
        c.detail = "off " + str(off.mean_seeds_consumed) + " +/- " + str(off.std_error) + ", on " +
                   str(on.mean_seeds_consumed) + " +/- " + str(on.std_error);
    return c;
}

Check criterion9() {
    Check c;
    const std::vector<std::vector<const char*>> invocations{
        {"wfuse", "fuse", "-n", "3", "-m", "4"},
        {"wfuse", "fuse", "-n", "2", "-m", "5", "--format", "csv"},
        {"wfuse", "verify", "--max", "6"},
        {"wfuse", "plan", "--max", "60"},
        {"wfuse", "error", "--alpha", "50000"},
        {"wfuse", "campaign", "--target", "8", "--trials", "20000", "--recycling", "--rng", "7"},
    };
    for (const auto& args : invocations) {
        std::ostringstream out1, err1, out2, err2;
        const int a = cli::run_cli(int(args.size()), args.data(), out1, err1);
        const int b = cli::run_cli(int(args.size()), args.data(), out2, err2);
        c.require(a == 0 && b == 0, std::string(args[1]) + " failed");
        c.require(out1.str() == out2.str() && err1.str() == err2.str(), std::string(args[1]) + " output differs");
    }
    if (c.ok) c.detail = std::to_string(invocations.size()) + " invocations byte-identical";
    return c;
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Check()>>> criteria{
        {"total success probability", criterion1},
        {"stage probabilities", criterion2},
        {"output state correctness", criterion3},
        {"recyclable branches", criterion4},
        {"swap gate", criterion5},
        {"homodyne error model", criterion6},
        {"planner", criterion7},
        {"campaign consistency", criterion8},
        {"determinism", criterion9},
    };
    int failures = 0;
    int index = 0;
    for (const auto& [name, run] : criteria) {
        ++index;
        Check result;
        try {
            result = run();
        } catch (const std::exception& e) {
            result = {false, std::string("exception: ") + e.what()};
        }
        failures += !result.ok;
        std::cout << (result.ok ? "PASS" : "FAIL") << "  criterion " << index << ": " << name << " (" << result.detail
                  << ")" << std::endl;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criterion(s) failed") << '\n';
    return failures == 0 ? 0 : 1;
}
