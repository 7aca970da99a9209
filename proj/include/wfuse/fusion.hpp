// Qubit-loss-free fusion of W_n and W_m into W_{n+m}.
//
// Pipeline: polarization gate -> spatial gate -> polarization gate, each
// ending in an X-quadrature homodyne measurement of the probe. Every
// measurement outcome is carried forward, so run_fusion returns the complete
// outcome tree with exact branch weights.
//
// Homodyne outcomes are idealized: terms are grouped by |probe phase| and the
// relative phase picked up inside a +- class is assumed removed by the
// feed-forward phase corrector, so no x value is sampled here.
#pragma once

#include "wfuse/optics.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace wfuse {

/// Homodyne outcome class |k|, probe phase k*theta/2.
struct PhaseClass {
    int abs_half_theta = 0;
    friend auto operator<=>(const PhaseClass&, const PhaseClass&) = default;
};

template <class Amp>
struct BasicMeasurementBranch {
    PhaseClass phase_class;
    probability_t<Amp> probability;
    BasicBranchState<Amp> post_state;
    std::string label;
};

enum class LeafKind : std::uint8_t { SuccessWnm, RecyclableD, RecyclableWnm2 };

constexpr std::string_view to_string(LeafKind kind) noexcept {
    switch (kind) {
        case LeafKind::SuccessWnm: return "SuccessWnm";
        case LeafKind::RecyclableD: return "RecyclableD";
        case LeafKind::RecyclableWnm2: return "RecyclableWnm2";
    }
    return "?";
}

struct LeafClassification {
    LeafKind kind = LeafKind::SuccessWnm;
    /// SuccessWnm: {n+m}; RecyclableD: {n-1, m-1}; RecyclableWnm2: {n+m-2}.
    std::vector<int> sizes;

    friend bool operator==(const LeafClassification&, const LeafClassification&) = default;
};

/// W states a leaf hands back for further fusion (W_1 is a lone photon and is dropped).
inline std::vector<int> reusable_sizes(const LeafClassification& leaf) {
    if (leaf.kind == LeafKind::SuccessWnm) return {};
    std::vector<int> out;
    for (int s : leaf.sizes)
        if (s >= 2) out.push_back(s);
    return out;
}

template <class Amp>
struct BasicLeaf {
    LeafClassification classification;
    probability_t<Amp> cumulative_probability;
    /// Measurement history, e.g. "step1:|k|=1/step2:|k|=0/step3:|k|=1".
    std::string path;
    BasicBranchState<Amp> state;
};

template <class Amp>
struct BasicStage {
    std::string label;
    std::vector<BasicMeasurementBranch<Amp>> branches;
};

template <class Amp>
struct BasicOutcomeTree {
    int n = 0;
    int m = 0;
    std::vector<BasicStage<Amp>> stages;
    std::vector<BasicLeaf<Amp>> leaves;

    probability_t<Amp> leaf_probability(LeafKind kind) const {
        probability_t<Amp> total{0};
        for (const auto& leaf : leaves)
            if (leaf.classification.kind == kind) total += leaf.cumulative_probability;
        return total;
    }

    probability_t<Amp> total_probability() const {
        probability_t<Amp> total{0};
        for (const auto& leaf : leaves) total += leaf.cumulative_probability;
        return total;
    }

    const BasicLeaf<Amp>* first_leaf(LeafKind kind) const {
        for (const auto& leaf : leaves)
            if (leaf.classification.kind == kind) return &leaf;
        return nullptr;
    }

    const BasicStage<Amp>* stage(std::string_view label) const {
        for (const auto& s : stages)
            if (s.label == label) return &s;
        return nullptr;
    }
};

using MeasurementBranch = BasicMeasurementBranch<Complex>;
using OutcomeTree = BasicOutcomeTree<Complex>;
using ExactOutcomeTree = BasicOutcomeTree<SurdAmplitude>;

namespace detail {

inline void require_party_size(int size, const char* name) {
    if (size < 2) throw std::invalid_argument(std::string(name) + " must be ≥ 2");
}

}  // namespace detail

/// |W_n>_A (x) |W_m>_B written as four terms over the photons sent to the fusion gate.
template <class Amp = Complex>
BasicBranchState<Amp> build_input_state(int n, int m) {
    detail::require_party_size(n, "n");
    detail::require_party_size(m, "m");
    using T = amplitude_traits<Amp>;
    const Rational nm(n * m);
    const auto horiz_a = RegisterContent::all_horizontal(n - 1);
    const auto horiz_b = RegisterContent::all_horizontal(m - 1);
    const auto w_a = RegisterContent::w_state(n - 1);
    const auto w_b = RegisterContent::w_state(m - 1);
    constexpr auto H = Polarization::H;
    constexpr auto V = Polarization::V;
    std::vector<BasicFusionTerm<Amp>> terms{
        {T::sqrt_of(Rational(1) / nm), horiz_a, horiz_b, {V, PathLabel::Unsplit}, {V, PathLabel::Unsplit}, 0},
        {T::sqrt_of(Rational(n - 1) / nm), w_a, horiz_b, {H, PathLabel::Unsplit}, {V, PathLabel::Unsplit}, 0},
        {T::sqrt_of(Rational(m - 1) / nm), horiz_a, w_b, {V, PathLabel::Unsplit}, {H, PathLabel::Unsplit}, 0},
        {T::sqrt_of(Rational((n - 1) * (m - 1)) / nm), w_a, w_b, {H, PathLabel::Unsplit}, {H, PathLabel::Unsplit}, 0},
    };
    return {n, m, std::move(terms)};
}

/// Ideal X-quadrature measurement of the probe: one branch per |k| class,
/// post-states renormalized with the probe reset to phase 0.
template <class Amp>
std::vector<BasicMeasurementBranch<Amp>> homodyne_measure(const BasicBranchState<Amp>& state) {
    if (state.empty()) throw std::invalid_argument("homodyne_measure: empty state");
    using T = amplitude_traits<Amp>;
    const auto total = state.norm();
    std::map<int, std::vector<BasicFusionTerm<Amp>>> groups;
    for (auto t : state.terms()) {
        const int cls = t.probe_half_theta < 0 ? -t.probe_half_theta : t.probe_half_theta;
        t.probe_half_theta = 0;
        groups[cls].push_back(std::move(t));
    }
    std::vector<BasicMeasurementBranch<Amp>> branches;
    for (auto& [cls, terms] : groups) {
        probability_t<Amp> weight{0};
        for (const auto& t : terms) weight += T::norm(t.amplitude);
        BasicBranchState<Amp> post(state.n(), state.m(), std::move(terms));
        if (post.empty()) continue;  // destructive interference after the phase reset
        branches.push_back({PhaseClass{cls}, weight / total, post.normalized().phase_fixed(),
                            "|k|=" + std::to_string(cls)});
    }
    return branches;
}

template <class Amp>
const BasicMeasurementBranch<Amp>* find_branch(const std::vector<BasicMeasurementBranch<Amp>>& branches,
                                               int abs_half_theta) {
    for (const auto& b : branches)
        if (b.phase_class.abs_half_theta == abs_half_theta) return &b;
    return nullptr;
}

/// First polarization entanglement gate: -theta on each H photon, +theta/2 on the probe.
/// |k|=1 keeps the VV, HV, VH terms; |k|=3 is the HH term.
template <class Amp>
std::vector<BasicMeasurementBranch<Amp>> step1_polarization_gate(const BasicBranchState<Amp>& state) {
    auto s = cross_kerr_on_polarization(state, Photon::First, Polarization::H, -2);
    s = cross_kerr_on_polarization(s, Photon::Second, Polarization::H, -2);
    s = probe_linear_shift(s, +1);
    return homodyne_measure(s);
}

/// Both photons through 50:50 splitters, then +theta on S11 and -theta on S21
/// (state before the probe is read out).
template <class Amp>
BasicBranchState<Amp> spatial_entangle(const BasicBranchState<Amp>& state) {
    auto s = apply_bs(state, Photon::First);
    s = apply_bs(s, Photon::Second);
    s = cross_kerr_on_path(s, Photon::First, PathLabel::S11, +2);
    return cross_kerr_on_path(s, Photon::Second, PathLabel::S21, -2);
}

/// Spatial gate measurement with the swap applied on the |k|=2 outcome;
/// both post-states are the path-entangled state before erasure.
template <class Amp>
std::vector<BasicMeasurementBranch<Amp>> spatial_branches(const BasicBranchState<Amp>& state) {
    auto branches = homodyne_measure(spatial_entangle(state));
    for (auto& b : branches) {
        if (b.phase_class.abs_half_theta != 0) {
            b.post_state = apply_swap(b.post_state).phase_fixed();
            b.label += " +swap";
        }
    }
    return branches;
}

/// sigma_x on S11 and S22, then both path couplers.
template <class Amp>
BasicBranchState<Amp> erase_paths(const BasicBranchState<Amp>& state) {
    auto s = apply_hwp45(state, Photon::First, PathLabel::S11);
    s = apply_hwp45(s, Photon::Second, PathLabel::S22);
    s = apply_path_coupler(s, Photon::First);
    s = apply_path_coupler(s, Photon::Second);
    return s.normalized().phase_fixed();
}

/// Spatial entanglement gate. Both outcomes have weight 1/2 and end in the same state.
template <class Amp>
std::vector<BasicMeasurementBranch<Amp>> step2_spatial_gate(const BasicBranchState<Amp>& state) {
    auto branches = spatial_branches(state);
    for (auto& b : branches) b.post_state = erase_paths(b.post_state);
    return branches;
}

/// Second polarization gate: -theta on each V photon, +theta/2 on the probe.
template <class Amp>
std::vector<BasicMeasurementBranch<Amp>> step3_polarization_gate(const BasicBranchState<Amp>& state) {
    auto s = cross_kerr_on_polarization(state, Photon::First, Polarization::V, -2);
    s = cross_kerr_on_polarization(s, Photon::Second, Polarization::V, -2);
    s = probe_linear_shift(s, +1);
    return homodyne_measure(s);
}

/// Terms with the two photons in (pol1, pol2); photons are left in place. Unnormalized.
template <class Amp>
BasicBranchState<Amp> project_photons(const BasicBranchState<Amp>& state, Polarization pol1, Polarization pol2) {
    return state.transform([&](const BasicFusionTerm<Amp>& t, auto emit) {
        if (t.photon1.pol == pol1 && t.photon2.pol == pol2) emit(t);
    });
}

/// True when the state is a W state over its register patterns, optionally
/// counting the two photons as qubits: every term carries exactly one excitation
/// and every basis pattern has the same amplitude.
template <class Amp>
bool has_w_form(const BasicBranchState<Amp>& state, bool include_photons, double tol = 1e-12) {
    using T = amplitude_traits<Amp>;
    if (state.empty()) return false;
    std::optional<Complex> reference;
    for (const auto& t : state.terms()) {
        int excitations = t.reg_a.excitations() + t.reg_b.excitations();
        if (include_photons)
            excitations += (t.photon1.pol == Polarization::V) + (t.photon2.pol == Polarization::V);
        if (excitations != 1) return false;
        const Complex per_pattern =
            T::to_complex(t.amplitude) / std::sqrt(double(t.reg_a.patterns()) * t.reg_b.patterns());
        if (!reference)
            reference = per_pattern;
        else if (std::abs(per_pattern - *reference) > tol)
            return false;
    }
    return true;
}

/// Von Neumann projection of both photons onto V (x) V on the step-3 |k|=3 branch.
/// Verifies the kept registers are left in W_{n+m-2}.
template <class Amp>
LeafClassification project_recyclable(const BasicBranchState<Amp>& state) {
    for (const auto& t : state.terms()) {
        if (t.photon1.path != PathLabel::Unsplit || t.photon2.path != PathLabel::Unsplit || t.probe_half_theta != 0)
            throw std::invalid_argument("project_recyclable: photons must be recombined and the probe read out");
    }
    const auto projected = project_photons(state, Polarization::V, Polarization::V);
    if (projected.empty() || projected.size() != state.size())
        throw std::invalid_argument("project_recyclable: photons are not in V V");
    if (!has_w_form(projected.normalized(), /*include_photons=*/false))
        throw std::invalid_argument("project_recyclable: kept registers are not a W state");
    return {LeafKind::RecyclableWnm2, {state.n() + state.m() - 2}};
}

/// Runs the whole fusion and returns every branch with its cumulative weight.
template <class Amp = Complex>
BasicOutcomeTree<Amp> run_fusion(int n, int m) {
    BasicOutcomeTree<Amp> tree;
    tree.n = n;
    tree.m = m;
    const auto input = build_input_state<Amp>(n, m);

    auto step1 = step1_polarization_gate(input);
    tree.stages.push_back({"step1", step1});
    const auto* pass1 = find_branch(step1, 1);
    const auto* fail1 = find_branch(step1, 3);
    if (!pass1) throw std::logic_error("run_fusion: step 1 produced no |k|=1 branch");
    if (fail1) {
        tree.leaves.push_back({{LeafKind::RecyclableD, {n - 1, m - 1}},
                               fail1->probability,
                               "step1:" + fail1->label,
                               fail1->post_state});
    }

    auto step2 = step2_spatial_gate(pass1->post_state);
    tree.stages.push_back({"step2", step2});
    for (const auto& b2 : step2) {
        const std::string prefix = "step1:" + pass1->label + "/step2:" + b2.label;
        auto step3 = step3_polarization_gate(b2.post_state);
        tree.stages.push_back({"step3[" + b2.label + "]", step3});
        const auto reach = pass1->probability * b2.probability;
        for (const auto& b3 : step3) {
            const std::string path = prefix + "/step3:" + b3.label;
            if (b3.phase_class.abs_half_theta == 1) {
                tree.leaves.push_back({{LeafKind::SuccessWnm, {n + m}}, reach * b3.probability, path, b3.post_state});
            } else if (b3.phase_class.abs_half_theta == 3) {
                auto classification = project_recyclable(b3.post_state);
                auto kept = project_photons(b3.post_state, Polarization::V, Polarization::V).normalized();
                tree.leaves.push_back({std::move(classification), reach * b3.probability, path, std::move(kept)});
            } else {
                throw std::logic_error("run_fusion: unexpected step-3 outcome " + b3.label);
            }
        }
    }
    return tree;
}

}  // namespace wfuse
