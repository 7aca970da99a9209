// Symbolic pipeline vs. brute-force oracle, case by case.
#pragma once

#include "wfuse/fusion.hpp"
#include "wfuse/oracle.hpp"

#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <vector>

namespace wfuse {

struct VerifyCase {
    int n = 0;
    int m = 0;
    double success_fidelity = 0.0;
    double recyclable_d_fidelity = 0.0;
    double recyclable_wnm2_fidelity = 0.0;
    double p_success_symbolic = 0.0;
    double p_success_oracle = 0.0;
    double max_probability_gap = 0.0;  // symbolic vs oracle, all leaves
    double max_exact_gap = 0.0;        // float vs exact mode, all leaves
    bool exact_formula_holds = false;  // exact success == (n+m)/(2nm)
    bool passed = false;
};

/// Lets tests tamper with the float tree before it is checked.
using TreeHook = std::function<void(OutcomeTree&)>;

inline constexpr double kFidelityTolerance = 1e-10;
inline constexpr double kOracleProbabilityTolerance = 1e-10;
inline constexpr double kExactTolerance = 1e-12;

inline VerifyCase verify_case(int n, int m, const TreeHook& hook = {}) {
    VerifyCase result{n, m};
    auto tree = run_fusion<Complex>(n, m);
    if (hook) hook(tree);
    const auto exact = run_fusion<SurdAmplitude>(n, m);
    const auto oracle = brute_force_fusion(n, m);

    const auto* success = tree.first_leaf(LeafKind::SuccessWnm);
    const auto* recyclable_d = tree.first_leaf(LeafKind::RecyclableD);
    const auto* recyclable_wnm2 = tree.first_leaf(LeafKind::RecyclableWnm2);
    if (success) result.success_fidelity = fidelity(expand_symbolic(success->state), make_w_state(n + m)).value;
    if (recyclable_d)
        result.recyclable_d_fidelity =
            fidelity(expand_kept_registers(recyclable_d->state), tensor(make_w_state(n - 1), make_w_state(m - 1))).value;
    if (recyclable_wnm2)
        result.recyclable_wnm2_fidelity =
            fidelity(expand_kept_registers(recyclable_wnm2->state), make_w_state(n + m - 2)).value;

    result.p_success_symbolic = tree.leaf_probability(LeafKind::SuccessWnm);
    result.p_success_oracle = oracle.leaves.at(LeafKind::SuccessWnm);
    for (const auto& [kind, p] : oracle.leaves) {
        result.max_probability_gap = std::max(result.max_probability_gap, std::abs(tree.leaf_probability(kind) - p));
        result.max_exact_gap = std::max(
            result.max_exact_gap, std::abs(tree.leaf_probability(kind) - detail::to_double(exact.leaf_probability(kind))));
    }
    result.exact_formula_holds = exact.leaf_probability(LeafKind::SuccessWnm) == Rational(n + m, 2 * n * m);

    result.passed = std::abs(result.success_fidelity - 1.0) <= kFidelityTolerance &&
                    std::abs(result.recyclable_d_fidelity - 1.0) <= kFidelityTolerance &&
                    std::abs(result.recyclable_wnm2_fidelity - 1.0) <= kFidelityTolerance &&
                    result.max_probability_gap <= kOracleProbabilityTolerance &&
                    result.max_exact_gap <= kExactTolerance && result.exact_formula_holds;
    return result;
}

/// Every (n, m) with n, m >= 2 and n + m <= max_total.
inline std::vector<VerifyCase> verify_all(int max_total, const TreeHook& hook = {}) {
    std::vector<VerifyCase> cases;
    for (int n = 2; n + 2 <= max_total; ++n)
        for (int m = 2; n + m <= max_total; ++m) cases.push_back(verify_case(n, m, hook));
    return cases;
}

inline void print_verify_table(std::ostream& os, const std::vector<VerifyCase>& cases) {
    os << " n  m  fidelity        p_success       p_oracle        status\n";
    for (const auto& c : cases) {
        os << std::setw(2) << c.n << ' ' << std::setw(2) << c.m << "  " << std::fixed << std::setprecision(12)
           << c.success_fidelity << "  " << c.p_success_symbolic << "  " << c.p_success_oracle << "  "
           << (c.passed ? "pass" : "FAIL") << '\n';
    }
    os.unsetf(std::ios_base::floatfield);
}

}  // namespace wfuse
