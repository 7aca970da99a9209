// Exact arithmetic for amplitudes of the form q * sqrt(s).
//
// Every amplitude the fusion pipeline produces is a rational multiple of the
// square root of a rational, so probabilities (squared moduli) stay rational
// and can be compared for exact equality.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

namespace wfuse {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

namespace detail {

/// Splits x > 0 into (k, s) with x = k^2 * s and s squarefree.
inline std::pair<BigInt, BigInt> squarefree_split(BigInt x) {
    BigInt square_root = 1;
    BigInt squarefree = 1;
    for (BigInt p = 2; p * p <= x; ++p) {
        unsigned multiplicity = 0;
        while (x % p == 0) {
            x /= p;
            ++multiplicity;
        }
        for (unsigned i = 0; i + 1 < multiplicity; i += 2) square_root *= p;
        if (multiplicity % 2 == 1) squarefree *= p;
    }
    squarefree *= x;  // leftover prime (or 1)
    return {square_root, squarefree};
}

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace detail

/// Real amplitude coefficient * sqrt(radicand), radicand a squarefree positive
/// integer. Zero is represented with radicand 1.
class SurdAmplitude {
public:
    SurdAmplitude() = default;
    SurdAmplitude(int value) : coefficient_(value) {}  // NOLINT: literal amplitudes
    explicit SurdAmplitude(Rational value) : coefficient_(std::move(value)) {}

    /// sqrt(r) for a non-negative rational r.
    static SurdAmplitude sqrt_of(const Rational& r) {
        if (r < 0) throw std::domain_error("sqrt_of: negative argument");
        if (r == 0) return {};
        // sqrt(a/b) = sqrt(a*b) / b
        const BigInt num = boost::multiprecision::numerator(r);
        const BigInt den = boost::multiprecision::denominator(r);
        auto [k, s] = detail::squarefree_split(num * den);
        SurdAmplitude out;
        out.coefficient_ = Rational(k, den);
        out.radicand_ = std::move(s);
        return out;
    }

    const Rational& coefficient() const noexcept { return coefficient_; }
    const BigInt& radicand() const noexcept { return radicand_; }

    bool is_zero() const { return coefficient_ == 0; }
    Rational squared() const { return coefficient_ * coefficient_ * Rational(radicand_); }
    int sign() const { return coefficient_ > 0 ? 1 : (coefficient_ < 0 ? -1 : 0); }

    double to_double() const {
        return detail::to_double(coefficient_) * std::sqrt(radicand_.convert_to<double>());
    }

    SurdAmplitude operator-() const {
        SurdAmplitude out = *this;
        out.coefficient_ = -out.coefficient_;
        return out;
    }

    friend SurdAmplitude operator*(const SurdAmplitude& a, const SurdAmplitude& b) {
        if (a.is_zero() || b.is_zero()) return {};
        // both radicands squarefree: s1*s2 = g^2 * (s1/g)*(s2/g), the latter squarefree
        const BigInt g = boost::multiprecision::gcd(a.radicand_, b.radicand_);
        SurdAmplitude out;
        out.coefficient_ = a.coefficient_ * b.coefficient_ * Rational(g);
        out.radicand_ = (a.radicand_ / g) * (b.radicand_ / g);
        return out;
    }

    /// Sum of two surds; only defined when the radicands agree (or one is zero).
    friend SurdAmplitude operator+(const SurdAmplitude& a, const SurdAmplitude& b) {
        if (a.is_zero()) return b;
        if (b.is_zero()) return a;
        if (a.radicand_ != b.radicand_)
            throw std::domain_error("surd sum leaves the field Q(sqrt(" +
                                    a.radicand_.str() + ")) : incommensurable radicand " +
                                    b.radicand_.str());
        SurdAmplitude out = a;
        out.coefficient_ += b.coefficient_;
        if (out.coefficient_ == 0) out.radicand_ = 1;
        return out;
    }

    SurdAmplitude& operator+=(const SurdAmplitude& other) { return *this = *this + other; }
    SurdAmplitude& operator*=(const SurdAmplitude& other) { return *this = *this * other; }

    friend bool operator==(const SurdAmplitude& a, const SurdAmplitude& b) {
        return a.coefficient_ == b.coefficient_ && a.radicand_ == b.radicand_;
    }

    friend std::ostream& operator<<(std::ostream& os, const SurdAmplitude& a) {
        os << a.coefficient_;
        if (a.radicand_ != 1) os << "*sqrt(" << a.radicand_ << ")";
        return os;
    }

private:
    Rational coefficient_{0};
    BigInt radicand_{1};
};

}  // namespace wfuse
