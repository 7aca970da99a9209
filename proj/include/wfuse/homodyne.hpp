// X-quadrature homodyne discrimination of coherent probe phases.
//
// Convention: a probe |alpha e^{i phi}> yields an X outcome distributed as
// N(2 alpha cos(phi), 1). Classes are decided by the midpoint between means.
#pragma once

#include "wfuse/fusion.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

namespace wfuse {

struct ProbeConfig {
    double alpha = 90000.0;
    double theta = 0.01;

    static ProbeConfig make(double alpha, double theta) {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        if (!(theta > 0.0) || !(theta < std::numbers::pi / 4)) throw std::invalid_argument("theta must be in (0, pi/4)");
        return {alpha, theta};
    }
};

struct DiscriminationReport {
    double alpha = 0.0;
    double theta = 0.0;
    std::map<int, double> means;  // |k| -> X mean
    double threshold = 0.0;
    double p_error = 0.0;
};

/// The pairs of classes each homodyne stage has to tell apart.
struct ProtocolDiscrimination {
    const char* stage;
    PhaseClass first;
    PhaseClass second;
};

inline const std::vector<ProtocolDiscrimination>& protocol_discriminations() {
    static const std::vector<ProtocolDiscrimination> pairs{
        {"step1", PhaseClass{1}, PhaseClass{3}},
        {"step2", PhaseClass{0}, PhaseClass{2}},
        {"step3", PhaseClass{1}, PhaseClass{3}},
    };
    return pairs;
}

inline double quadrature_mean(const ProbeConfig& probe, PhaseClass cls) {
    return 2.0 * probe.alpha * std::cos(cls.abs_half_theta * probe.theta / 2.0);
}

/// Midpoint-threshold confusion probability between two classes (equal priors).
inline double p_error(const ProbeConfig& probe, PhaseClass a, PhaseClass b) {
    if (a == b) throw std::invalid_argument("p_error: classes must differ");
    const double separation = std::abs(quadrature_mean(probe, a) - quadrature_mean(probe, b));
    return 0.5 * std::erfc(separation / (2.0 * std::numbers::sqrt2));
}

inline DiscriminationReport discriminate(const ProbeConfig& probe, PhaseClass a, PhaseClass b) {
    DiscriminationReport report;
    report.alpha = probe.alpha;
    report.theta = probe.theta;
    report.means[a.abs_half_theta] = quadrature_mean(probe, a);
    report.means[b.abs_half_theta] = quadrature_mean(probe, b);
    report.threshold = 0.5 * (quadrature_mean(probe, a) + quadrature_mean(probe, b));
    report.p_error = p_error(probe, a, b);
    return report;
}

/// Largest error over the protocol's three measurements (the phase-0 vs phase-theta
/// readout of the spatial gate is the least separated pair).
inline DiscriminationReport worst_protocol_discrimination(const ProbeConfig& probe) {
    DiscriminationReport worst;
    worst.p_error = -1.0;
    for (const auto& d : protocol_discriminations()) {
        auto report = discriminate(probe, d.first, d.second);
        if (report.p_error > worst.p_error) worst = std::move(report);
    }
    return worst;
}

/// Phase of <x|alpha e^{i k theta/2}> for k >= 0; the -k class carries the negative.
inline double overlap_phase(double x, const ProbeConfig& probe, int half_theta) {
    const double phi = half_theta * probe.theta / 2.0;
    return probe.alpha * std::sin(phi) * (x - 2.0 * probe.alpha * std::cos(phi));
}

/// 2 phi(x, theta/2) reduced to [0, 2 pi).
inline double phase_correction(double x, const ProbeConfig& probe) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double value = std::fmod(2.0 * overlap_phase(x, probe, 1), two_pi);
    if (value < 0.0) value += two_pi;
    if (value >= two_pi) value = 0.0;
    return value;
}

/// One X outcome for the given class, reproducible under the seed.
inline double sample_outcome(const ProbeConfig& probe, PhaseClass cls, std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(quadrature_mean(probe, cls), 1.0);
    return dist(gen);
}

inline std::vector<double> sample_outcomes(const ProbeConfig& probe, PhaseClass cls, std::size_t count,
                                           std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> dist(quadrature_mean(probe, cls), 1.0);
    std::vector<double> out(count);
    for (auto& x : out) x = dist(gen);
    return out;
}

/// Class assigned to outcome x by the midpoint rule between a and b.
inline PhaseClass decide(double x, const ProbeConfig& probe, PhaseClass a, PhaseClass b) {
    const double ma = quadrature_mean(probe, a);
    const double mb = quadrature_mean(probe, b);
    return std::abs(x - ma) <= std::abs(x - mb) ? a : b;
}

}  // namespace wfuse
