#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvedwave/errors.hpp"
#include "curvedwave/specfun.hpp"
#include "oracles.hpp"

using namespace curvedwave;

namespace {

complex draw(std::mt19937_64& rng, double re, double im) {
    std::uniform_real_distribution<double> ur(-re, re), ui(-im, im);
    const double x = ur(rng);
    return {x, ui(rng)};
}

}  // namespace

TEST(Hyp2F1, ZeroAIsOne) {
    std::mt19937_64 rng(1);
    for (int i = 0; i < 50; ++i) {
        EXPECT_EQ(hyp2f1({0.0, draw(rng, 3, 1), complex(1.5, 0.2)}, draw(rng, 0.9, 0.3)), complex(1.0));
    }
    // terminates before reaching any denominator, so |x| is unrestricted
    EXPECT_EQ(hyp2f1({0.0, 2.0, 3.0}, 7.5), complex(1.0));
}

TEST(Hyp2F1, HandPolynomial) {
    EXPECT_NEAR(std::abs(hyp2f1({-1.0, 2.0, 3.0}, 0.5) - 2.0 / 3.0), 0.0, 1e-15);
    EXPECT_EQ(terminating_degree({-1.0, 2.0, 3.0}), 1);
    EXPECT_EQ(terminating_degree({0.5, -3.0, 3.0}), 3);
    EXPECT_FALSE(terminating_degree({0.5, 2.0, 3.0}).has_value());
}

TEST(Hyp2F1, ZeroArgument) {
    EXPECT_EQ(hyp2f1({0.3, 0.7, 1.9}, 0.0), complex(1.0));
    EXPECT_EQ(hyp2f1({0.3, 0.7, -1.0}, 0.0), complex(1.0));
}

TEST(Hyp2F1, MatchesLongDoubleSeries) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const complex A = draw(rng, 3, 1), B = draw(rng, 3, 1), C = complex(1.3, 0.0) + draw(rng, 1, 1);
        complex x = draw(rng, 0.8, 0.8);
        if (std::abs(x) > 0.8) x *= 0.8 / std::abs(x);
        const complex want = oracle::hyp2f1_brute(A, B, C, x);
        EXPECT_LE(std::abs(hyp2f1({A, B, C}, x) - want), 1e-12 * std::max(1.0, std::abs(want)));
    }
}

TEST(Hyp2F1, KnownClosedForms) {
    // F(1, 1, 2; x) = -log(1 - x) / x
    for (double x : {-0.9, -0.3, 0.2, 0.7, 0.95}) {
        EXPECT_NEAR(hyp2f1({1.0, 1.0, 2.0}, x).real(), -std::log1p(-x) / x, 1e-13);
    }
    // F(a, b, b; x) = (1 - x)^{-a}
    EXPECT_NEAR(std::abs(hyp2f1({0.5, 1.7, 1.7}, 0.3) - std::pow(0.7, -0.5)), 0.0, 1e-14);
}

TEST(Hyp2F1, PolynomialAgainstPochhammerLoop) {
    std::mt19937_64 rng(5);
    for (int n = 0; n <= 10; ++n) {
        for (int i = 0; i < 5; ++i) {
            const complex B = draw(rng, 3, 1), C = complex(2.5, 0.3) + draw(rng, 1, 1);
            const complex x = draw(rng, 2, 2);
            complex sum = 0.0, mag = 0.0;
            double fact = 1.0;
            for (int k = 0; k <= n; ++k) {
                if (k > 0) fact *= k;
                const complex t = oracle::rising(-static_cast<double>(n), k) * oracle::rising(B, k) /
                                  oracle::rising(C, k) * std::pow(x, k) / fact;
                sum += t;
                mag += std::abs(t);
            }
            EXPECT_LE(std::abs(hyp2f1({-static_cast<double>(n), B, C}, x) - sum), 1e-14 * mag.real());
        }
    }
}

TEST(Hyp2F1, ContiguousRelation) {
    std::mt19937_64 rng(9);
    for (int i = 0; i < 100; ++i) {
        const complex A = draw(rng, 2, 1), B = draw(rng, 2, 1), C = complex(1.7, 0.0) + draw(rng, 1, 1);
        const complex x = 0.5 * draw(rng, 0.7, 0.7);
        const complex t1 = C * (1.0 - x) * hyp2f1({A, B, C}, x);
        const complex t2 = C * hyp2f1({A - 1.0, B, C}, x);
        const complex t3 = (C - B) * x * hyp2f1({A, B, C + 1.0}, x);
        EXPECT_LE(std::abs(t1 - t2 + t3), 1e-10 * std::max({std::abs(t1), std::abs(t2), std::abs(t3)}));
    }
}

TEST(Hyp2F1, DomainErrors) {
    EXPECT_THROW(hyp2f1({0.5, 0.5, 1.5}, 1.0), DomainError);
    EXPECT_THROW(hyp2f1({0.5, 0.5, 1.5}, complex(0.0, 1.2)), DomainError);
    EXPECT_THROW(hyp2f1({0.5, 0.5, -2.0}, 0.3), DomainError);
    // terminates at degree 1 before (C)_k vanishes at k = 3
    EXPECT_NO_THROW(hyp2f1({-1.0, 0.5, -2.0}, 0.3));
    EXPECT_THROW(hyp2f1({-3.0, 0.5, -1.0}, 0.3), DomainError);
}

TEST(Hyp2F1, PolynomialOutsideUnitDisk) {
    // F(-2, b, c; x) = 1 - 2b/c x + b(b+1)/(c(c+1)) x^2
    const complex b = 0.7, c = 1.9, x = 3.5;
    const complex want = 1.0 - 2.0 * b / c * x + b * (b + 1.0) / (c * (c + 1.0)) * x * x;
    EXPECT_NEAR(std::abs(hyp2f1({-2.0, b, c}, x) - want), 0.0, 1e-13);
}

TEST(PrincipalPower, Examples) {
    EXPECT_EQ(principal_power(1.0, complex(0.3, 2.0)), complex(1.0));
    EXPECT_NEAR(std::abs(principal_power(-1.0, 0.5) - complex(0.0, 1.0)), 0.0, 1e-15);
    const complex e = principal_power(std::exp(1.0), complex(-1.0, 1.0));
    EXPECT_NEAR(std::abs(e - std::exp(-1.0) * complex(std::cos(1.0), std::sin(1.0))), 0.0, 1e-15);
}

TEST(PrincipalPower, ZeroBase) {
    EXPECT_EQ(principal_power(0.0, 2.0), complex(0.0));
    EXPECT_EQ(principal_power(0.0, complex(0.5, 3.0)), complex(0.0));
    EXPECT_THROW(principal_power(0.0, 0.0), DomainError);
    EXPECT_THROW(principal_power(0.0, complex(-1.0, 1.0)), DomainError);
}

TEST(PrincipalPower, NegativeZeroImaginaryStaysOnPrincipalBranch) {
    EXPECT_NEAR(std::abs(principal_power(complex(-4.0, -0.0), 0.5) - complex(0.0, 2.0)), 0.0, 1e-15);
}

TEST(PrincipalPower, ExponentAdditivity) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> ang(-1.5, 1.5), mag(0.2, 3.0);
    for (int i = 0; i < 200; ++i) {
        const complex base = std::polar(mag(rng), ang(rng));
        const complex a = draw(rng, 2, 2), b = draw(rng, 2, 2);
        const complex lhs = principal_power(base, a + b);
        EXPECT_LE(std::abs(lhs - principal_power(base, a) * principal_power(base, b)),
                  1e-13 * std::abs(lhs));
    }
}

TEST(Pochhammer, Values) {
    EXPECT_EQ(pochhammer(3.0, 0), complex(1.0));
    EXPECT_EQ(pochhammer(3.0, 4), complex(3.0 * 4 * 5 * 6));
    EXPECT_EQ(pochhammer(-2.0, 3), complex(0.0));
    EXPECT_NEAR(std::abs(pochhammer(complex(0.5, 1.0), 5) - oracle::rising(complex(0.5, 1.0), 5)), 0.0,
                1e-12);
}

TEST(RadialOde, SphericalCosine) {
    const RadialFunction R = [](double rho) { return complex(std::cos(rho)); };
    for (double rho : {0.2, 0.7, 1.2}) {
        EXPECT_LE(std::abs(radial_ode_residual(Space::spherical, 0, 1.0, 1.5, R, rho)), 1e-6);
    }
    // wrong energy
    EXPECT_GT(std::abs(radial_ode_residual(Space::spherical, 0, 1.0, 1.6, R, 0.7)), 1e-2);
}

TEST(RadialOde, HyperbolicCoshPower) {
    const complex alpha(-1.0, 1.0);
    const RadialFunction G = [alpha](double r) { return std::pow(complex(std::cosh(r)), alpha); };
    for (double r : {0.3, 1.0, 2.0}) {
        EXPECT_LE(std::abs(radial_ode_residual(Space::hyperbolic, 0, alpha, 1.0, G, r)), 1e-6);
    }
}

TEST(RadialOde, ZeroFunction) {
    const RadialFunction zero = [](double) { return complex(0.0); };
    EXPECT_EQ(radial_ode_residual(Space::hyperbolic, 2, complex(0.3, 1.0), 2.0, zero, 0.5), complex(0.0));
}

TEST(RadialOde, StencilMustStayInside) {
    const RadialFunction one = [](double) { return complex(1.0); };
    EXPECT_THROW(radial_ode_residual(Space::hyperbolic, 0, 0.0, 1.0, one, 1e-3), DomainError);
    EXPECT_THROW(radial_ode_residual(Space::spherical, 0, 0.0, 1.0, one, oracle::pi / 2.0 - 1e-3),
                 DomainError);
}
