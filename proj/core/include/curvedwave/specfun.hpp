#pragma once

#include <complex>
#include <functional>
#include <optional>

#include "curvedwave/geometry.hpp"

namespace curvedwave {

struct Hyp2F1Params {
    complex A;
    complex B;
    complex C;
};

/// If A or B is a non-positive integer (within 1e-12), the degree of the
/// terminating polynomial; otherwise nullopt.
std::optional<int> terminating_degree(const Hyp2F1Params& p);

/// Gauss series sum_k (A)_k (B)_k / (C)_k x^k / k!.
/// Non-terminating series need |x| < 1. Throws DomainError for |x| >= 1 without
/// termination and for C a non-positive integer reached by the sum.
complex hyp2f1(const Hyp2F1Params& p, complex x);

/// exp(exponent * Log base), principal Log with arg in (-pi, pi].
/// base = 0: returns 0 if Re(exponent) > 0, throws otherwise.
complex principal_power(complex base, complex exponent);

/// Rising factorial (x)_n.
complex pochhammer(complex x, int n);

using RadialFunction = std::function<complex(double)>;

/// Left-hand side of the separated radial equation, order-4 differences.
///   hyperbolic: G'' + (coth r + tanh r) G' - m^2/sh^2 r G + alpha^2/ch^2 r G + 2 eps G
///   spherical:  R'' + (cot rho - tan rho) R' - m^2/sin^2 R - alpha^2/cos^2 R + 2 eps R
/// Throws DomainError when the stencil reaches r <= 0 or rho outside (0, pi/2).
complex radial_ode_residual(Space space, int m, complex alpha, double epsilon,
                            const RadialFunction& fn, double x, double step = 1e-3);

}  // namespace curvedwave
