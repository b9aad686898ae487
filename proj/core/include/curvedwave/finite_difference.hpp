#pragma once

#include <array>
#include <complex>
#include <functional>
#include <type_traits>

#include <Eigen/Dense>

namespace curvedwave::fd {

// Order-4 central stencils. `g(offset)` evaluates the function at x + offset.

// The result is materialised as the value type of `g` so that Eigen expression
// templates never outlive their temporaries.

template <class G>
auto first(G&& g, double h) {
    using T = std::decay_t<decltype(g(h))>;
    return T((g(-2.0 * h) - 8.0 * g(-h) + 8.0 * g(h) - g(2.0 * h)) / (12.0 * h));
}

template <class G, class T>
auto second(G&& g, const T& center, double h) {
    using R = std::decay_t<decltype(g(h))>;
    return R((-g(2.0 * h) + 16.0 * g(h) - 30.0 * center + 16.0 * g(-h) - g(-2.0 * h)) /
             (12.0 * h * h));
}

/// One Richardson step for an order-4 estimate: kills the h^4 term.
template <class T>
T richardson(const T& coarse, const T& fine) {
    return (16.0 * fine - coarse) / 15.0;
}

using ScalarField = std::function<std::complex<double>(const std::array<double, 3>&)>;

struct Jet {
    std::complex<double> value;
    Eigen::Vector3cd gradient;
    Eigen::Matrix3cd hessian;  // off-diagonal entries only filled when requested
};

struct JetOptions {
    std::array<double, 3> steps{1e-3, 1e-3, 1e-3};
    bool richardson{true};
    bool mixed{false};
};

/// Value, gradient and Hessian of `f` at `x` by order-4 central differences
/// (optionally Richardson-extrapolated) with a separate step per axis.
Jet jet(const ScalarField& f, const std::array<double, 3>& x, const JetOptions& opts);

/// Directional first derivative along `axis` with plain order-4 differences.
std::complex<double> partial(const ScalarField& f, const std::array<double, 3>& x, int axis,
                             double h);

}  // namespace curvedwave::fd
