#include "curvedwave/specfun.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "curvedwave/errors.hpp"
#include "curvedwave/finite_difference.hpp"

namespace curvedwave {

namespace {

constexpr double integer_tol = 1e-12;
constexpr int max_terms = 100000;
constexpr double tiny_term = 1e-16;

bool is_nonpositive_integer(complex z) {
    if (std::abs(z.imag()) > integer_tol) return false;
    const double re = z.real();
    return re <= integer_tol && std::abs(re - std::round(re)) <= integer_tol;
}

std::string describe(const Hyp2F1Params& p) {
    auto c = [](complex z) {
        return "(" + std::to_string(z.real()) + "," + std::to_string(z.imag()) + ")";
    };
    return "A=" + c(p.A) + " B=" + c(p.B) + " C=" + c(p.C);
}

}  // namespace

std::optional<int> terminating_degree(const Hyp2F1Params& p) {
    std::optional<int> best;
    for (complex v : {p.A, p.B}) {
        if (is_nonpositive_integer(v)) {
            const int n = static_cast<int>(-std::round(v.real()));
            if (!best || n < *best) best = n;
        }
    }
    return best;
}

complex hyp2f1(const Hyp2F1Params& p, complex x) {
    if (x == complex(0.0, 0.0)) return 1.0;
    const std::optional<int> degree = terminating_degree(p);

    if (degree) {
        complex term = 1.0;
        complex sum = 1.0;
        for (int k = 0; k < *degree; ++k) {
            const complex c = p.C + static_cast<double>(k);
            if (std::abs(c) <= integer_tol) {
                throw DomainError("hyp2f1: C is a non-positive integer reached before the "
                                  "series terminates (" + describe(p) + ")");
            }
            term *= (p.A + static_cast<double>(k)) * (p.B + static_cast<double>(k)) /
                    (c * static_cast<double>(k + 1)) * x;
            sum += term;
        }
        return sum;
    }

    if (std::abs(x) >= 1.0) {
        throw DomainError("hyp2f1: |x| = " + std::to_string(std::abs(x)) +
                          " >= 1 for a non-terminating series (" + describe(p) + ")");
    }
    complex term = 1.0;
    complex sum = 1.0;
    int small = 0;
    for (int k = 0; k < max_terms; ++k) {
        const complex c = p.C + static_cast<double>(k);
        if (is_nonpositive_integer(c)) {
            throw DomainError("hyp2f1: C is a non-positive integer (" + describe(p) + ")");
        }
        term *= (p.A + static_cast<double>(k)) * (p.B + static_cast<double>(k)) /
                (c * static_cast<double>(k + 1)) * x;
        sum += term;
        if (std::abs(term) < tiny_term * std::abs(sum)) {
            if (++small == 3) return sum;
        } else {
            small = 0;
        }
    }
    throw DomainError("hyp2f1: series did not converge in " + std::to_string(max_terms) +
                      " terms (" + describe(p) + ")");
}

complex principal_power(complex base, complex exponent) {
    if (base == complex(0.0, 0.0)) {
        if (exponent.real() > 0.0) return 0.0;
        throw DomainError("principal_power: zero base with Re(exponent) <= 0");
    }
    // A signed zero imaginary part would select arg = -pi on the negative axis.
    if (base.imag() == 0.0) base = complex(base.real(), 0.0);
    if (exponent == complex(0.0, 0.0)) return 1.0;
    complex out = std::exp(exponent * std::log(base));
    if (out.imag() == 0.0) out = complex(out.real(), 0.0);
    return out;
}

complex pochhammer(complex x, int n) {
    complex out = 1.0;
    for (int k = 0; k < n; ++k) out *= x + static_cast<double>(k);
    return out;
}

complex radial_ode_residual(Space space, int m, complex alpha, double epsilon,
                            const RadialFunction& fn, double x, double step) {
    if (!(step > 0.0)) throw DomainError("radial_ode_residual: step must be positive");
    const double lo = x - 2.0 * step;
    if (space == Space::hyperbolic) {
        if (!(lo > 0.0)) {
            throw DomainError("radial_ode_residual: stencil reaches the singular locus r = 0");
        }
    } else if (!(lo > 0.0) || !(x + 2.0 * step < std::numbers::pi / 2.0)) {
        throw DomainError(
            "radial_ode_residual: stencil reaches a singular locus rho = 0 or rho = pi/2");
    }

    auto g = [&](double d) { return fn(x + d); };
    const complex f0 = fn(x);
    const complex d1 = fd::first(g, step);
    const complex d2 = fd::second(g, f0, step);
    const double mm = static_cast<double>(m) * static_cast<double>(m);

    if (space == Space::hyperbolic) {
        const double sh = std::sinh(x), ch = std::cosh(x);
        return d2 + (ch / sh + sh / ch) * d1 - mm / (sh * sh) * f0 +
               alpha * alpha / (ch * ch) * f0 + 2.0 * epsilon * f0;
    }
    const double s = std::sin(x), c = std::cos(x);
    return d2 + (c / s - s / c) * d1 - mm / (s * s) * f0 - alpha * alpha / (c * c) * f0 +
           2.0 * epsilon * f0;
}

}  // namespace curvedwave
