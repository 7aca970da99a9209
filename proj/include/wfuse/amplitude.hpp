// Amplitude policies. The optical algebra is written once against
// amplitude_traits<Amp> and instantiated for std::complex<double> (float mode)
// and SurdAmplitude (exact mode, rational probabilities).
#pragma once

#include "wfuse/exact.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace wfuse {

using Complex = std::complex<double>;

template <class Amp>
struct amplitude_traits;

template <>
struct amplitude_traits<Complex> {
    using probability_type = double;

    // squared moduli below this are treated as exact cancellation
    static constexpr double kZeroNorm = 1e-28;

    static Complex sqrt_of(const Rational& r) { return {std::sqrt(detail::to_double(r)), 0.0}; }
    static double norm(const Complex& a) { return std::norm(a); }
    static bool is_zero(const Complex& a) { return std::norm(a) < kZeroNorm; }
    static Complex inverse_sqrt(double p) { return {1.0 / std::sqrt(p), 0.0}; }
    static Complex phase(double radians) { return std::polar(1.0, radians); }
    /// Unit factor that rotates a onto the positive real axis.
    static Complex unrotate(const Complex& a) { return std::conj(a) / std::abs(a); }
    static Complex to_complex(const Complex& a) { return a; }
    static double to_double(double p) { return p; }
};

template <>
struct amplitude_traits<SurdAmplitude> {
    using probability_type = Rational;

    static SurdAmplitude sqrt_of(const Rational& r) { return SurdAmplitude::sqrt_of(r); }
    static Rational norm(const SurdAmplitude& a) { return a.squared(); }
    static bool is_zero(const SurdAmplitude& a) { return a.is_zero(); }
    static SurdAmplitude inverse_sqrt(const Rational& p) { return SurdAmplitude::sqrt_of(1 / p); }

    /// Only phases that keep amplitudes real are representable: 0 and pi (mod 2pi).
    static SurdAmplitude phase(double radians) {
        const double reduced = std::remainder(radians, 2.0 * std::numbers::pi);
        if (std::abs(reduced) < 1e-12) return 1;
        if (std::abs(std::abs(reduced) - std::numbers::pi) < 1e-12) return -1;
        throw std::domain_error("exact amplitudes only support phases 0 and pi");
    }
    static SurdAmplitude unrotate(const SurdAmplitude& a) { return a.sign() < 0 ? -1 : 1; }
    static Complex to_complex(const SurdAmplitude& a) { return {a.to_double(), 0.0}; }
    static double to_double(const Rational& p) { return detail::to_double(p); }
};

template <class Amp>
using probability_t = typename amplitude_traits<Amp>::probability_type;

}  // namespace wfuse
