#include "curvedwave/finite_difference.hpp"

namespace curvedwave::fd {

namespace {

using complex = std::complex<double>;
using Point = std::array<double, 3>;

Point shifted(Point x, int axis, double d) {
    x[static_cast<std::size_t>(axis)] += d;
    return x;
}

Point shifted(Point x, int i, double di, int j, double dj) {
    x[static_cast<std::size_t>(i)] += di;
    x[static_cast<std::size_t>(j)] += dj;
    return x;
}

struct AxisDerivs {
    complex d1;
    complex d2;
};

AxisDerivs axis_derivs(const ScalarField& f, const Point& x, const complex& f0, int axis,
                       double h) {
    auto g = [&](double d) { return f(shifted(x, axis, d)); };
    return {first(g, h), second(g, f0, h)};
}

complex mixed_derivative(const ScalarField& f, const Point& x, int i, int j, double hi,
                         double hj) {
    // Tensor product of the first-derivative stencil along i and j.
    static constexpr std::array<double, 4> offsets{-2.0, -1.0, 1.0, 2.0};
    static constexpr std::array<double, 4> weights{1.0, -8.0, 8.0, -1.0};
    complex acc{};
    for (std::size_t a = 0; a < 4; ++a) {
        for (std::size_t b = 0; b < 4; ++b) {
            acc += weights[a] * weights[b] *
                   f(shifted(x, i, offsets[a] * hi, j, offsets[b] * hj));
        }
    }
    return acc / (144.0 * hi * hj);
}

}  // namespace

Jet jet(const ScalarField& f, const Point& x, const JetOptions& opts) {
    Jet out;
    out.value = f(x);
    out.gradient.setZero();
    out.hessian.setZero();
    for (int axis = 0; axis < 3; ++axis) {
        const double h = opts.steps[static_cast<std::size_t>(axis)];
        AxisDerivs d = axis_derivs(f, x, out.value, axis, h);
        if (opts.richardson) {
            const AxisDerivs fine = axis_derivs(f, x, out.value, axis, 0.5 * h);
            d.d1 = richardson(d.d1, fine.d1);
            d.d2 = richardson(d.d2, fine.d2);
        }
        out.gradient(axis) = d.d1;
        out.hessian(axis, axis) = d.d2;
    }
    if (opts.mixed) {
        for (int i = 0; i < 3; ++i) {
            for (int j = i + 1; j < 3; ++j) {
                const double hi = opts.steps[static_cast<std::size_t>(i)];
                const double hj = opts.steps[static_cast<std::size_t>(j)];
                complex m = mixed_derivative(f, x, i, j, hi, hj);
                if (opts.richardson) {
                    m = richardson(m, mixed_derivative(f, x, i, j, 0.5 * hi, 0.5 * hj));
                }
                out.hessian(i, j) = m;
                out.hessian(j, i) = m;
            }
        }
    }
    return out;
}

complex partial(const ScalarField& f, const Point& x, int axis, double h) {
    return first([&](double d) { return f(shifted(x, axis, d)); }, h);
}

}  // namespace curvedwave::fd
