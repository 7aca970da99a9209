#include "wfuse/exact.hpp"
#include "wfuse/amplitude.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace wfuse;

TEST(Surd, SqrtOfPerfectSquareIsRational) {
    const auto a = SurdAmplitude::sqrt_of(Rational(9, 4));
    EXPECT_EQ(a.coefficient(), Rational(3, 2));
    EXPECT_EQ(a.radicand(), 1);
}

TEST(Surd, SqrtExtractsSquarefreePart) {
    // sqrt(8/3) = sqrt(24)/3 = 2 sqrt(6) / 3
    const auto a = SurdAmplitude::sqrt_of(Rational(8, 3));
    EXPECT_EQ(a.coefficient(), Rational(2, 3));
    EXPECT_EQ(a.radicand(), 6);
    EXPECT_EQ(a.squared(), Rational(8, 3));
}

TEST(Surd, SqrtOfZeroAndNegative) {
    EXPECT_TRUE(SurdAmplitude::sqrt_of(Rational(0)).is_zero());
    EXPECT_THROW(SurdAmplitude::sqrt_of(Rational(-1, 2)), std::domain_error);
}

TEST(Surd, ProductOfHalvesIsRational) {
    const auto h = SurdAmplitude::sqrt_of(Rational(1, 2));
    EXPECT_EQ(h * h, SurdAmplitude(Rational(1, 2)));
}

TEST(Surd, ProductKeepsRadicandSquarefree) {
    const auto a = SurdAmplitude::sqrt_of(Rational(6));
    const auto b = SurdAmplitude::sqrt_of(Rational(10));
    const auto p = a * b;  // sqrt(60) = 2 sqrt(15)
    EXPECT_EQ(p.coefficient(), Rational(2));
    EXPECT_EQ(p.radicand(), 15);
}

TEST(Surd, SumRequiresCommonRadicand) {
    const auto a = SurdAmplitude::sqrt_of(Rational(2));
    const auto b = SurdAmplitude::sqrt_of(Rational(8));  // 2 sqrt(2)
    EXPECT_EQ((a + b).squared(), Rational(18));
    EXPECT_TRUE((a + (-a)).is_zero());
    EXPECT_THROW(a + SurdAmplitude::sqrt_of(Rational(3)), std::domain_error);
}

TEST(Surd, MatchesFloatingPointOnRandomRationals) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(0, 500), den(1, 500);
    for (int i = 0; i < 200; ++i) {
        const Rational r(num(rng), den(rng));
        const double expected = std::sqrt(detail::to_double(r));
        EXPECT_NEAR(SurdAmplitude::sqrt_of(r).to_double(), expected, 1e-12 * (1 + expected));
    }
}

TEST(SurdTraits, OnlyRealPhasesAreExact) {
    using T = amplitude_traits<SurdAmplitude>;
    EXPECT_EQ(T::phase(0.0), SurdAmplitude(1));
    EXPECT_EQ(T::phase(std::numbers::pi), SurdAmplitude(-1));
    EXPECT_EQ(T::phase(-3 * std::numbers::pi), SurdAmplitude(-1));
    EXPECT_THROW(T::phase(0.3), std::domain_error);
}
