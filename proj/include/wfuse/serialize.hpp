// JSON documents for states, outcome trees, discrimination reports and campaigns.
// Field order is fixed (ordered_json); reals carry 12 significant digits.
#pragma once

#include "wfuse/fusion.hpp"
#include "wfuse/homodyne.hpp"
#include "wfuse/oracle.hpp"
#include "wfuse/planner.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>

namespace wfuse {

using Json = nlohmann::ordered_json;

/// Rounds to 12 significant digits so the shortest round-trip print is stable.
inline double round12(double value) {
    if (!std::isfinite(value)) return value;
    if (value == 0.0) return 0.0;
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.12g", value);
    const double rounded = std::strtod(buffer, nullptr);
    return rounded == 0.0 ? 0.0 : rounded;
}

inline std::string to_string(RegisterContent::Kind kind) {
    return kind == RegisterContent::Kind::WState ? "W" : "H";
}

inline Json to_json(const RegisterContent& reg) { return Json{{"kind", to_string(reg.kind)}, {"count", reg.count}}; }

inline Json to_json(const PhotonState& p) {
    return Json{{"pol", std::string(to_string(p.pol))}, {"path", std::string(to_string(p.path))}};
}

inline Json to_json(const BranchState& state) {
    Json terms = Json::array();
    for (const auto& t : state.terms()) {
        terms.push_back(Json{{"re", round12(t.amplitude.real())},
                             {"im", round12(t.amplitude.imag())},
                             {"regA", to_json(t.reg_a)},
                             {"regB", to_json(t.reg_b)},
                             {"p1", to_json(t.photon1)},
                             {"p2", to_json(t.photon2)},
                             {"k", t.probe_half_theta}});
    }
    return terms;
}

inline std::string rational_string(const Rational& r) {
    std::ostringstream os;
    os << r;
    return os.str();
}

inline Json to_json(const LeafClassification& leaf) {
    Json out{{"class", std::string(to_string(leaf.kind))}};
    out["sizes"] = leaf.sizes;
    return out;
}

/// Float tree plus, when given, the exact leaf probabilities of the same run.
inline Json to_json(const OutcomeTree& tree, const ExactOutcomeTree* exact = nullptr) {
    Json out{{"n", tree.n}, {"m", tree.m}};
    Json stages = Json::array();
    for (const auto& stage : tree.stages) {
        Json branches = Json::array();
        for (const auto& b : stage.branches) {
            branches.push_back(Json{{"phaseClass", b.phase_class.abs_half_theta},
                                    {"prob", round12(b.probability)},
                                    {"state", to_json(b.post_state)}});
        }
        stages.push_back(Json{{"label", stage.label}, {"branches", std::move(branches)}});
    }
    out["stages"] = std::move(stages);
    Json leaves = Json::array();
    for (LeafKind kind : {LeafKind::SuccessWnm, LeafKind::RecyclableD, LeafKind::RecyclableWnm2}) {
        const auto* leaf = tree.first_leaf(kind);
        if (!leaf) continue;
        Json entry = to_json(leaf->classification);
        entry["cumProb"] = round12(tree.leaf_probability(kind));
        if (exact) entry["cumProbExact"] = rational_string(exact->leaf_probability(kind));
        leaves.push_back(std::move(entry));
    }
    out["leaves"] = std::move(leaves);
    return out;
}

inline Json to_json(const DiscriminationReport& report) {
    Json means = Json::object();
    for (const auto& [cls, mean] : report.means) means[std::to_string(cls)] = round12(mean);
    return Json{{"alpha", round12(report.alpha)},
                {"theta", round12(report.theta)},
                {"means", std::move(means)},
                {"threshold", round12(report.threshold)},
                {"pError", round12(report.p_error)}};
}

inline Json to_json(const CampaignResult& result) {
    return Json{{"target", result.target_size},
                {"seed_size", result.seed_size},
                {"trials", result.trials},
                {"mean", round12(result.mean_seeds_consumed)},
                {"stderr", round12(result.std_error)},
                {"recycling", result.recycling_enabled}};
}

/// Debug dump of a dense vector as [[re, im], ...].
inline Json to_json(const DenseState& state) {
    Json amps = Json::array();
    for (const auto& a : state.amplitudes()) amps.push_back(Json::array({round12(a.real()), round12(a.imag())}));
    return Json{{"qubits", state.qubits()}, {"amplitudes", std::move(amps)}};
}

}  // namespace wfuse
