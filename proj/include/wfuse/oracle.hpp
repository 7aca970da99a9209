// Brute-force verification on explicit state vectors.
//
// Qubit ordering for a fusion of W_n and W_m (H = 0, V = 1, qubit 0 is the
// most significant bit of the basis index):
//   [0, n-1)      party A kept modes
//   n-1           photon 1
//   [n, n+m-1)    party B kept modes
//   n+m-1         photon 2
//
// brute_force_fusion re-derives the protocol on the full vector (polarization
// qubits x path bits x probe-phase sector) and shares no code with the
// symbolic pipeline in fusion.hpp.
#pragma once

#include "wfuse/fusion.hpp"

#include <cmath>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace wfuse {

inline constexpr int kMaxDenseQubits = 14;

class DenseState {
public:
    explicit DenseState(int qubits) : DenseState(qubits, std::vector<Complex>(dimension_of(qubits))) {}

    DenseState(int qubits, std::vector<Complex> amplitudes) : qubits_(qubits), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != dimension_of(qubits))
            throw std::invalid_argument("DenseState: amplitude count does not match 2^qubits");
    }

    int qubits() const noexcept { return qubits_; }
    std::size_t dimension() const noexcept { return amplitudes_.size(); }
    std::span<const Complex> amplitudes() const noexcept { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    double norm() const {
        double total = 0.0;
        for (const auto& a : amplitudes_) total += std::norm(a);
        return total;
    }

    void require_normalized(double tol = 1e-10) const {
        if (std::abs(norm() - 1.0) > tol)
            throw std::domain_error("DenseState is not normalized (norm " + std::to_string(norm()) + ")");
    }

    DenseState normalized() const {
        const double total = norm();
        if (total == 0.0) throw std::domain_error("cannot normalize the zero vector");
        auto amps = amplitudes_;
        for (auto& a : amps) a /= std::sqrt(total);
        return {qubits_, std::move(amps)};
    }

    /// Bit mask of a qubit within a basis index.
    std::size_t mask(int qubit) const { return std::size_t{1} << (qubits_ - 1 - qubit); }

    static std::size_t dimension_of(int qubits) {
        if (qubits < 0 || qubits > kMaxDenseQubits)
            throw std::out_of_range("dense states are limited to " + std::to_string(kMaxDenseQubits) + " qubits");
        return std::size_t{1} << qubits;
    }

private:
    int qubits_;
    std::vector<Complex> amplitudes_;
};

struct FidelityResult {
    double value = 0.0;
};

/// Equal 1/sqrt(n) amplitude on each single-V basis state.
inline DenseState make_w_state(int n) {
    if (n < 1 || n > kMaxDenseQubits) throw std::out_of_range("make_w_state: n must be in [1, 14]");
    std::vector<Complex> amps(std::size_t{1} << n);
    for (int j = 0; j < n; ++j) amps[std::size_t{1} << (n - 1 - j)] = 1.0 / std::sqrt(double(n));
    return {n, std::move(amps)};
}

inline DenseState tensor(const DenseState& a, const DenseState& b) {
    std::vector<Complex> amps(DenseState::dimension_of(a.qubits() + b.qubits()));
    for (std::size_t i = 0; i < a.dimension(); ++i)
        for (std::size_t j = 0; j < b.dimension(); ++j) amps[(i << b.qubits()) | j] = a[i] * b[j];
    return {a.qubits() + b.qubits(), std::move(amps)};
}

inline FidelityResult fidelity(const DenseState& a, const DenseState& b) {
    if (a.qubits() != b.qubits()) throw std::invalid_argument("fidelity: dimension mismatch");
    Complex overlap = 0.0;
    for (std::size_t i = 0; i < a.dimension(); ++i) overlap += std::conj(a[i]) * b[i];
    return {std::norm(overlap)};
}

/// Keeps the entries whose listed qubits hold the listed values and drops those qubits.
inline DenseState restrict_qubits(const DenseState& state, const std::vector<std::pair<int, bool>>& fixed) {
    const int kept = state.qubits() - int(fixed.size());
    std::vector<Complex> amps(DenseState::dimension_of(kept));
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        bool match = true;
        for (auto [q, v] : fixed) match = match && (((i & state.mask(q)) != 0) == v);
        if (!match) continue;
        std::size_t reduced = 0;
        for (int q = 0; q < state.qubits(); ++q) {
            bool is_fixed = false;
            for (auto [fq, v] : fixed) is_fixed = is_fixed || fq == q;
            if (is_fixed) continue;
            reduced = (reduced << 1) | ((i & state.mask(q)) ? 1 : 0);
        }
        amps[reduced] += state[i];
    }
    return {kept, std::move(amps)};
}

namespace detail {

/// (bit pattern, amplitude) pairs a symbolic register expands to.
inline std::vector<std::pair<std::size_t, double>> register_patterns(const RegisterContent& reg) {
    if (reg.kind == RegisterContent::Kind::AllHorizontal) return {{0, 1.0}};
    std::vector<std::pair<std::size_t, double>> out;
    for (int j = 0; j < reg.count; ++j)
        out.emplace_back(std::size_t{1} << (reg.count - 1 - j), 1.0 / std::sqrt(double(reg.count)));
    return out;
}

inline void check_register(const RegisterContent& reg, int expected, const char* party) {
    if (reg.count != expected)
        throw std::invalid_argument(std::string("expand: register ") + party + " has " + std::to_string(reg.count) +
                                    " photons, expected " + std::to_string(expected));
}

}  // namespace detail

/// Expands a recombined, probe-free symbolic state onto all n+m qubits.
inline DenseState expand_symbolic(const BranchState& state) {
    const int n = state.n();
    const int m = state.m();
    DenseState::dimension_of(n + m);
    std::vector<Complex> amps(std::size_t{1} << (n + m));
    for (const auto& t : state.terms()) {
        if (t.photon1.path != PathLabel::Unsplit || t.photon2.path != PathLabel::Unsplit)
            throw std::invalid_argument("expand_symbolic: photon paths are still split");
        if (t.probe_half_theta != 0) throw std::invalid_argument("expand_symbolic: probe still entangled");
        detail::check_register(t.reg_a, n - 1, "A");
        detail::check_register(t.reg_b, m - 1, "B");
        const std::size_t p1 = t.photon1.pol == Polarization::V;
        const std::size_t p2 = t.photon2.pol == Polarization::V;
        for (auto [pa, wa] : detail::register_patterns(t.reg_a))
            for (auto [pb, wb] : detail::register_patterns(t.reg_b)) {
                const std::size_t index = (pa << (m + 1)) | (p1 << m) | (pb << 1) | p2;
                amps[index] += t.amplitude * wa * wb;
            }
    }
    return {n + m, std::move(amps)};
}

/// Expands only the kept registers (n+m-2 qubits, A then B); every term must
/// share one photon configuration.
inline DenseState expand_kept_registers(const BranchState& state) {
    const int n = state.n();
    const int m = state.m();
    std::vector<Complex> amps(DenseState::dimension_of(n + m - 2));
    for (const auto& t : state.terms()) {
        const auto& first = state.terms().front();
        if (t.photon1 != first.photon1 || t.photon2 != first.photon2)
            throw std::invalid_argument("expand_kept_registers: photons are entangled with the registers");
        detail::check_register(t.reg_a, n - 1, "A");
        detail::check_register(t.reg_b, m - 1, "B");
        for (auto [pa, wa] : detail::register_patterns(t.reg_a))
            for (auto [pb, wb] : detail::register_patterns(t.reg_b)) amps[(pa << (m - 1)) | pb] += t.amplitude * wa * wb;
    }
    return {n + m - 2, std::move(amps)};
}

// ---------------------------------------------------------------------------
// Brute-force protocol on the extended space.

namespace detail {

/// Polarization qubits x two path bits x probe sector k in [-4, 4].
class ExtendedState {
public:
    static constexpr int kSectors = 9;
    static constexpr int kSectorOffset = 4;

    ExtendedState(int n, int m) : n_(n), m_(m), q_(n + m), amps_(std::size_t(kSectors * 4) << (n + m)) {}

    std::size_t index(int k, int path1, int path2, std::size_t pol) const {
        return ((std::size_t((k + kSectorOffset) * 4 + path1 * 2 + path2)) << q_) | pol;
    }

    Complex& at(int k, int path1, int path2, std::size_t pol) { return amps_[index(k, path1, path2, pol)]; }
    const Complex& at(int k, int path1, int path2, std::size_t pol) const {
        return amps_[index(k, path1, path2, pol)];
    }

    std::size_t pol_dim() const { return std::size_t{1} << q_; }
    std::size_t photon_mask(int photon) const {
        const int qubit = photon == 1 ? n_ - 1 : n_ + m_ - 1;
        return std::size_t{1} << (q_ - 1 - qubit);
    }

    template <class F>
    void for_each(F&& f) const {
        for (int k = -kSectorOffset; k <= kSectorOffset; ++k)
            for (int p1 = 0; p1 < 2; ++p1)
                for (int p2 = 0; p2 < 2; ++p2)
                    for (std::size_t pol = 0; pol < pol_dim(); ++pol) f(k, p1, p2, pol, at(k, p1, p2, pol));
    }

    /// Moves each amplitude to sector k + shift(p1, p2, pol).
    template <class Shift>
    ExtendedState shifted(Shift&& shift) const {
        ExtendedState out(n_, m_);
        for_each([&](int k, int p1, int p2, std::size_t pol, const Complex& a) {
            if (a == Complex{}) return;
            const int target = k + shift(p1, p2, pol);
            if (target < -kSectorOffset || target > kSectorOffset) throw std::out_of_range("oracle: probe sector overflow");
            out.at(target, p1, p2, pol) += a;
        });
        return out;
    }

    /// Applies the 2x2 matrix u to one photon's path bit.
    ExtendedState path_unitary(int photon, const Matrix2& u) const {
        ExtendedState out(n_, m_);
        for_each([&](int k, int p1, int p2, std::size_t pol, const Complex& a) {
            if (a == Complex{}) return;
            const int in = photon == 1 ? p1 : p2;
            for (int o = 0; o < 2; ++o) {
                const Complex c = u[o][in] * a;
                if (photon == 1)
                    out.at(k, o, p2, pol) += c;
                else
                    out.at(k, p1, o, pol) += c;
            }
        });
        return out;
    }

    /// Flips one photon's polarization qubit where its path bit equals `path`.
    ExtendedState flip_pol_on_path(int photon, int path) const {
        ExtendedState out(n_, m_);
        const std::size_t mask = photon_mask(photon);
        for_each([&](int k, int p1, int p2, std::size_t pol, const Complex& a) {
            const bool hit = (photon == 1 ? p1 : p2) == path;
            out.at(k, p1, p2, hit ? (pol ^ mask) : pol) += a;
        });
        return out;
    }

    double norm() const {
        double total = 0.0;
        for (const auto& a : amps_) total += std::norm(a);
        return total;
    }

    ExtendedState scaled(double factor) const {
        ExtendedState out = *this;
        for (auto& a : out.amps_) a *= factor;
        return out;
    }

    /// Projects onto sectors +-cls and folds them into sector 0 (ideal phase corrector).
    ExtendedState project_class(int cls) const {
        ExtendedState out(n_, m_);
        for_each([&](int k, int p1, int p2, std::size_t pol, const Complex& a) {
            if (std::abs(k) == cls) out.at(0, p1, p2, pol) += a;
        });
        return out;
    }

    /// Polarization vector for sector 0 with both path bits 0.
    DenseState polarization_part() const {
        std::vector<Complex> amps(pol_dim());
        for (std::size_t pol = 0; pol < pol_dim(); ++pol) amps[pol] = at(0, 0, 0, pol);
        return {q_, std::move(amps)};
    }

    int n() const { return n_; }
    int m() const { return m_; }

private:
    int n_, m_, q_;
    std::vector<Complex> amps_;
};

struct ClassOutcome {
    double probability;
    ExtendedState state;  // normalized
};

inline std::map<int, ClassOutcome> measure_probe(const ExtendedState& s) {
    std::map<int, ClassOutcome> out;
    const double total = s.norm();
    for (int cls = 0; cls <= ExtendedState::kSectorOffset; ++cls) {
        auto projected = s.project_class(cls);
        const double weight = projected.norm();
        if (weight < 1e-28) continue;
        out.emplace(cls, ClassOutcome{weight / total, projected.scaled(1.0 / std::sqrt(weight))});
    }
    return out;
}

}  // namespace detail

struct OracleFusion {
    int n = 0;
    int m = 0;
    double step1_pass = 0.0;
    std::map<int, double> step2_branches;  // class -> probability
    std::map<int, double> step3_pass;      // step-2 class -> step-3 success probability
    std::map<LeafKind, double> leaves;
    DenseState success_state{0};        // n+m qubits, from the zero-phase spatial branch
    DenseState recyclable_d_kept{0};    // n+m-2 kept qubits
    DenseState recyclable_wnm2_kept{0}; // n+m-2 kept qubits
};

/// Runs the fusion protocol on explicit vectors.
inline OracleFusion brute_force_fusion(int n, int m) {
    if (n < 2 || m < 2) throw std::invalid_argument("brute_force_fusion: n and m must be at least 2");
    if (n + m > kMaxDenseQubits) throw std::out_of_range("brute_force_fusion: n + m exceeds 14 qubits");
    using detail::ExtendedState;
    OracleFusion result;
    result.n = n;
    result.m = m;

    const DenseState input = tensor(make_w_state(n), make_w_state(m));
    ExtendedState s(n, m);
    for (std::size_t pol = 0; pol < input.dimension(); ++pol) s.at(0, 0, 0, pol) = input[pol];

    const std::size_t mask1 = s.photon_mask(1);
    const std::size_t mask2 = s.photon_mask(2);
    auto v_count = [&](std::size_t pol) { return int((pol & mask1) != 0) + int((pol & mask2) != 0); };

    // first polarization gate: phase per H photon, then a common offset
    auto after1 = s.shifted([&](int, int, std::size_t pol) { return -2 * (2 - v_count(pol)) + 1; });
    auto outcomes1 = detail::measure_probe(after1);
    result.step1_pass = outcomes1.at(1).probability;
    result.leaves[LeafKind::RecyclableD] = outcomes1.at(3).probability;
    {
        const auto d = outcomes1.at(3).state.polarization_part();
        result.recyclable_d_kept = restrict_qubits(d, {{n - 1, false}, {n + m - 1, false}}).normalized();
    }

    // spatial gate
    auto s2 = outcomes1.at(1).state.path_unitary(1, beam_splitter_matrix()).path_unitary(2, beam_splitter_matrix());
    s2 = s2.shifted([](int p1, int p2, std::size_t) { return (p1 == 0 ? 2 : 0) + (p2 == 0 ? -2 : 0); });
    const Matrix2 pauli_x{{{0.0, 1.0}, {1.0, 0.0}}};
    const double r = 1.0 / std::sqrt(2.0);
    const Matrix2 symmetric_port{{{r, r}, {0.0, 0.0}}};

    result.leaves[LeafKind::SuccessWnm] = 0.0;
    result.leaves[LeafKind::RecyclableWnm2] = 0.0;
    for (auto& [cls, outcome] : detail::measure_probe(s2)) {
        result.step2_branches[cls] = outcome.probability;
        auto branch = outcome.state;
        if (cls != 0) branch = branch.path_unitary(2, pauli_x);
        branch = branch.flip_pol_on_path(1, 0).flip_pol_on_path(2, 1);
        branch = branch.path_unitary(1, symmetric_port).path_unitary(2, symmetric_port);
        branch = branch.scaled(1.0 / std::sqrt(branch.norm()));

        // second polarization gate: phase per V photon, then a common offset
        auto after3 = branch.shifted([&](int, int, std::size_t pol) { return -2 * v_count(pol) + 1; });
        auto outcomes3 = detail::measure_probe(after3);
        const double reach = result.step1_pass * outcome.probability;
        result.step3_pass[cls] = outcomes3.at(1).probability;
        result.leaves[LeafKind::SuccessWnm] += reach * outcomes3.at(1).probability;
        result.leaves[LeafKind::RecyclableWnm2] += reach * outcomes3.at(3).probability;
        if (cls == 0) {
            result.success_state = outcomes3.at(1).state.polarization_part();
            const auto rest = outcomes3.at(3).state.polarization_part();
            result.recyclable_wnm2_kept = restrict_qubits(rest, {{n - 1, true}, {n + m - 1, true}}).normalized();
        }
    }
    return result;
}

inline std::map<LeafKind, double> brute_force_leaf_probabilities(int n, int m) {
    return brute_force_fusion(n, m).leaves;
}

}  // namespace wfuse
