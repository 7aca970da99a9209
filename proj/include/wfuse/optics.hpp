// Value-semantic algebra of fusion terms and the linear/nonlinear optical
// elements that act on them.
//
// A BranchState is a sparse superposition over
//   (register A, register B, photon 1, photon 2, probe phase)
// where the two kept registers are summarized symbolically (|k_H> or |W_k>)
// and the probe phase is an exact integer in units of theta/2.
#pragma once

#include "wfuse/amplitude.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

namespace wfuse {

enum class Polarization : std::uint8_t { H, V };

constexpr Polarization flip(Polarization p) noexcept {
    return p == Polarization::H ? Polarization::V : Polarization::H;
}

constexpr std::string_view to_string(Polarization p) noexcept { return p == Polarization::H ? "H" : "V"; }

enum class PathLabel : std::uint8_t { Unsplit, S11, S12, S21, S22 };

constexpr std::string_view to_string(PathLabel p) noexcept {
    switch (p) {
        case PathLabel::Unsplit: return "U";
        case PathLabel::S11: return "S11";
        case PathLabel::S12: return "S12";
        case PathLabel::S21: return "S21";
        case PathLabel::S22: return "S22";
    }
    return "?";
}

enum class Photon : std::uint8_t { First = 1, Second = 2 };

inline void require_valid(Photon photon) {
    if (photon != Photon::First && photon != Photon::Second)
        throw std::invalid_argument("photon index must be 1 or 2");
}

/// The two output legs of a photon's beam splitter.
inline std::pair<PathLabel, PathLabel> split_paths(Photon photon) {
    require_valid(photon);
    return photon == Photon::First ? std::pair{PathLabel::S11, PathLabel::S12}
                                   : std::pair{PathLabel::S21, PathLabel::S22};
}

inline bool path_allowed(Photon photon, PathLabel path) {
    if (path == PathLabel::Unsplit) return true;
    auto [first, second] = split_paths(photon);
    return path == first || path == second;
}

struct RegisterContent {
    enum class Kind : std::uint8_t { AllHorizontal, WState };

    Kind kind = Kind::AllHorizontal;
    int count = 0;

    /// |k_H>
    static RegisterContent all_horizontal(int k) {
        if (k < 0) throw std::invalid_argument("register photon count must be non-negative");
        return {Kind::AllHorizontal, k};
    }

    /// |W_k>; W_1 is the single photon |1_V>.
    static RegisterContent w_state(int k) {
        if (k < 1) throw std::invalid_argument("W register needs at least one photon");
        return {Kind::WState, k};
    }

    int excitations() const noexcept { return kind == Kind::WState ? 1 : 0; }
    /// Number of computational basis patterns the register spans.
    int patterns() const noexcept { return kind == Kind::WState ? count : 1; }

    friend auto operator<=>(const RegisterContent&, const RegisterContent&) = default;
};

struct PhotonState {
    Polarization pol = Polarization::H;
    PathLabel path = PathLabel::Unsplit;

    friend auto operator<=>(const PhotonState&, const PhotonState&) = default;
};

/// Probe phases stay within +-4 half-theta units for every element sequence of the protocol.
inline constexpr int kMaxProbeHalfTheta = 4;

template <class Amp>
struct BasicFusionTerm {
    Amp amplitude{};
    RegisterContent reg_a;
    RegisterContent reg_b;
    PhotonState photon1;
    PhotonState photon2;
    int probe_half_theta = 0;

    PhotonState& photon(Photon p) { return p == Photon::First ? photon1 : photon2; }
    const PhotonState& photon(Photon p) const { return p == Photon::First ? photon1 : photon2; }

    /// Canonical ordering/merge key.
    auto key() const {
        return std::tuple{reg_a.kind, reg_b.kind, photon1, photon2, probe_half_theta, reg_a.count, reg_b.count};
    }
};

template <class Amp>
class BasicBranchState {
public:
    using amplitude_type = Amp;
    using term_type = BasicFusionTerm<Amp>;
    using traits = amplitude_traits<Amp>;
    using probability_type = typename traits::probability_type;

    BasicBranchState(int n, int m, std::vector<term_type> terms = {})
        : n_(n), m_(m), terms_(canonicalize(std::move(terms))) {}

    int n() const noexcept { return n_; }
    int m() const noexcept { return m_; }
    std::span<const term_type> terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    probability_type norm() const {
        probability_type total{0};
        for (const auto& t : terms_) total += traits::norm(t.amplitude);
        return total;
    }

    /// Rescaled to unit norm.
    BasicBranchState normalized() const {
        const probability_type total = norm();
        if (!(total > probability_type{0})) throw std::domain_error("cannot normalize an empty state");
        return scaled(traits::inverse_sqrt(total));
    }

    /// First amplitude in canonical order rotated onto the positive real axis.
    BasicBranchState phase_fixed() const {
        if (terms_.empty()) return *this;
        return scaled(traits::unrotate(terms_.front().amplitude));
    }

    BasicBranchState scaled(const Amp& factor) const {
        auto terms = terms_;
        for (auto& t : terms) t.amplitude = t.amplitude * factor;
        return {n_, m_, std::move(terms)};
    }

    /// Rebuilds the state from f(term, emit) where emit(term) appends an output term.
    template <class F>
    BasicBranchState transform(F&& f) const {
        std::vector<term_type> out;
        out.reserve(terms_.size() * 2);
        auto emit = [&out](term_type t) { out.push_back(std::move(t)); };
        for (const auto& t : terms_) f(t, emit);
        return {n_, m_, std::move(out)};
    }

    friend bool operator==(const BasicBranchState& a, const BasicBranchState& b) {
        if (a.n_ != b.n_ || a.m_ != b.m_ || a.terms_.size() != b.terms_.size()) return false;
        for (std::size_t i = 0; i < a.terms_.size(); ++i) {
            if (a.terms_[i].key() != b.terms_[i].key()) return false;
            if (!(a.terms_[i].amplitude == b.terms_[i].amplitude)) return false;
        }
        return true;
    }

private:
    static std::vector<term_type> canonicalize(std::vector<term_type> terms) {
        for (const auto& t : terms) {
            if (t.probe_half_theta < -kMaxProbeHalfTheta || t.probe_half_theta > kMaxProbeHalfTheta)
                throw std::out_of_range("probe phase outside +-4 half-theta units");
        }
        std::stable_sort(terms.begin(), terms.end(),
                         [](const term_type& a, const term_type& b) { return a.key() < b.key(); });
        std::vector<term_type> merged;
        merged.reserve(terms.size());
        for (auto& t : terms) {
            if (!merged.empty() && merged.back().key() == t.key())
                merged.back().amplitude = merged.back().amplitude + t.amplitude;
            else
                merged.push_back(std::move(t));
        }
        std::erase_if(merged, [](const term_type& t) { return traits::is_zero(t.amplitude); });
        return merged;
    }

    int n_;
    int m_;
    std::vector<term_type> terms_;
};

using FusionTerm = BasicFusionTerm<Complex>;
using BranchState = BasicBranchState<Complex>;
using ExactBranchState = BasicBranchState<SurdAmplitude>;

/// Entrywise comparison of two float-mode states.
inline bool approx_equal(const BranchState& a, const BranchState& b, double tol = 1e-12) {
    if (a.n() != b.n() || a.m() != b.m() || a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a.terms()[i].key() != b.terms()[i].key()) return false;
        if (std::abs(a.terms()[i].amplitude - b.terms()[i].amplitude) > tol) return false;
    }
    return true;
}

/// Exact-mode state viewed as floats.
inline BranchState to_float(const ExactBranchState& s) {
    std::vector<FusionTerm> terms;
    terms.reserve(s.size());
    for (const auto& t : s.terms())
        terms.push_back({t.amplitude.to_double(), t.reg_a, t.reg_b, t.photon1, t.photon2, t.probe_half_theta});
    return {s.n(), s.m(), std::move(terms)};
}

// ---------------------------------------------------------------------------
// Optical elements

/// Cross-Kerr coupling of the probe to one polarization of one photon.
template <class Amp>
BasicBranchState<Amp> cross_kerr_on_polarization(const BasicBranchState<Amp>& state, Photon photon,
                                                 Polarization pol, int shift_half_theta) {
    require_valid(photon);
    return state.transform([&](BasicFusionTerm<Amp> t, auto emit) {
        if (t.photon(photon).pol == pol) t.probe_half_theta += shift_half_theta;
        emit(std::move(t));
    });
}

/// Cross-Kerr coupling of the probe to one spatial path of one photon.
template <class Amp>
BasicBranchState<Amp> cross_kerr_on_path(const BasicBranchState<Amp>& state, Photon photon, PathLabel path,
                                         int shift_half_theta) {
    require_valid(photon);
    return state.transform([&](BasicFusionTerm<Amp> t, auto emit) {
        if (t.photon(photon).path == path) t.probe_half_theta += shift_half_theta;
        emit(std::move(t));
    });
}

/// Photon-independent phase modulation of the probe.
template <class Amp>
BasicBranchState<Amp> probe_linear_shift(const BasicBranchState<Amp>& state, int shift_half_theta) {
    return state.transform([&](BasicFusionTerm<Amp> t, auto emit) {
        t.probe_half_theta += shift_half_theta;
        emit(std::move(t));
    });
}

/// 50:50 beam splitter on an unsplit photon: a^dag -> (c^dag + d^dag)/sqrt(2).
template <class Amp>
BasicBranchState<Amp> apply_bs(const BasicBranchState<Amp>& state, Photon photon) {
    const auto [first, second] = split_paths(photon);
    const Amp half = amplitude_traits<Amp>::sqrt_of(Rational(1, 2));
    return state.transform([&](BasicFusionTerm<Amp> t, auto emit) {
        if (t.photon(photon).path != PathLabel::Unsplit) throw std::logic_error("apply_bs: photon already split");
        t.amplitude = t.amplitude * half;
        t.photon(photon).path = first;
        emit(t);
        t.photon(photon).path = second;
        emit(std::move(t));
    });
}

/// Half-wave plate at 45 degrees (sigma_x) inserted into one path of one photon.
template <class Amp>
BasicBranchState<Amp> apply_hwp45(const BasicBranchState<Amp>& state, Photon photon, PathLabel path) {
    require_valid(photon);
    return state.transform([&](BasicFusionTerm<Amp> t, auto emit) {
        if (t.photon(photon).path == path) t.photon(photon).pol = flip(t.photon(photon).pol);
        emit(std::move(t));
    });
}

/// Path coupler (quantum eraser): drops which-path information and sums the
/// amplitudes that become indistinguishable. Not norm preserving; callers
/// renormalize afterwards.
template <class Amp>
BasicBranchState<Amp> apply_path_coupler(const BasicBranchState<Amp>& state, Photon photon) {
    require_valid(photon);
    return state.transform([&](BasicFusionTerm<Amp> t, auto emit) {
        t.photon(photon).path = PathLabel::Unsplit;
        emit(std::move(t));
    });
}

/// Swap gate between photon 2's paths S21 and S22.
template <class Amp>
BasicBranchState<Amp> apply_swap(const BasicBranchState<Amp>& state) {
    return state.transform([](BasicFusionTerm<Amp> t, auto emit) {
        auto& path = t.photon2.path;
        if (path == PathLabel::S21)
            path = PathLabel::S22;
        else if (path == PathLabel::S22)
            path = PathLabel::S21;
        else
            throw std::logic_error("apply_swap: photon 2 is not split");
        emit(std::move(t));
    });
}

/// Multiplies terms whose photon carries polarization `pol` by e^{i*phase}.
template <class Amp>
BasicBranchState<Amp> conditional_phase_on_polarization(const BasicBranchState<Amp>& state, Photon photon,
                                                        Polarization pol, double phase) {
    require_valid(photon);
    const Amp factor = amplitude_traits<Amp>::phase(phase);
    return state.transform([&](BasicFusionTerm<Amp> t, auto emit) {
        if (t.photon(photon).pol == pol) t.amplitude = t.amplitude * factor;
        emit(std::move(t));
    });
}

// ---------------------------------------------------------------------------
// Two-mode matrices for the swap gate realization.

using Matrix2 = std::array<std::array<Complex, 2>, 2>;
using Matrix4 = std::array<std::array<Complex, 4>, 4>;

inline Matrix2 operator*(const Matrix2& a, const Matrix2& b) {
    Matrix2 out{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) out[i][j] += a[i][k] * b[k][j];
    return out;
}

/// a^dag -> (c^dag + d^dag)/sqrt(2), b^dag -> (c^dag - d^dag)/sqrt(2); column = input mode.
inline Matrix2 beam_splitter_matrix() {
    const double r = 1.0 / std::sqrt(2.0);
    return {{{r, r}, {r, -r}}};
}

/// Phase shifter on the second mode.
inline Matrix2 phase_shifter_matrix(double phase) { return {{{1.0, 0.0}, {0.0, std::polar(1.0, phase)}}}; }

/// BS, then PS(pi) in one arm, then BS.
inline Matrix2 mach_zehnder_matrix() {
    return beam_splitter_matrix() * phase_shifter_matrix(std::numbers::pi) * beam_splitter_matrix();
}

/// Lifts a two-mode unitary to the occupation basis {|00>,|01>,|10>,|11>}
/// (first digit = mode a). Throws if the |11> input bunches out of the basis.
inline Matrix4 two_mode_fock_matrix(const Matrix2& u, double tol = 1e-12) {
    Matrix4 out{};
    out[0][0] = 1.0;
    // |01>: one photon in mode b
    out[1][1] = u[1][1];
    out[2][1] = u[0][1];
    // |10>: one photon in mode a
    out[1][2] = u[1][0];
    out[2][2] = u[0][0];
    // |11> = a^dag b^dag |0>
    out[3][3] = u[0][0] * u[1][1] + u[1][0] * u[0][1];
    const double leak = std::abs(u[0][0] * u[0][1]) + std::abs(u[1][0] * u[1][1]);
    if (leak > tol) throw std::domain_error("two-photon input leaves the single-occupancy basis");
    return out;
}

/// The swap gate in the basis {|00>,|01>,|10>,|11>}.
inline Matrix4 swap_gate_matrix() {
    Matrix4 out{};
    out[0][0] = 1.0;
    out[1][2] = 1.0;
    out[2][1] = 1.0;
    out[3][3] = 1.0;
    return out;
}

/// Max entrywise deviation between a and e^{i phi} b, with phi fixed by b's largest entry.
inline double global_phase_distance(const Matrix4& a, const Matrix4& b) {
    int bi = 0, bj = 0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(b[i][j]) > std::abs(b[bi][bj])) bi = i, bj = j;
    if (std::abs(a[bi][bj]) == 0.0) return std::numeric_limits<double>::infinity();
    const Complex phase = (a[bi][bj] / b[bi][bj]) / std::abs(a[bi][bj] / b[bi][bj]);
    double worst = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) worst = std::max(worst, std::abs(a[i][j] - phase * b[i][j]));
    return worst;
}

}  // namespace wfuse
