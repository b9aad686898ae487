#include "curvedwave/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvedwave/errors.hpp"

namespace curvedwave {

namespace {

using Point = std::array<double, 3>;
constexpr complex I{0.0, 1.0};
constexpr double axis_cap_factor = 8.0;
constexpr double radial_fraction = 0.007;

void require_interior(const ChartPoint& p, double step, const char* who) {
    validate(p);
    if (!(step > 0.0)) throw DomainError(std::string(who) + ": step must be positive");
    const double dist = distance_to_singular_locus(p);
    if (dist < 10.0 * step) {
        throw DomainError(std::string(who) + ": point is " + std::to_string(dist) +
                          " from the singular locus " +
                          std::string(chart_info(p.chart).singular_loci) + " (needs >= " +
                          std::to_string(10.0 * step) + ")");
    }
}

fd::Jet metric_scaled_jet(const fd::ScalarField& psi, const ChartPoint& p, double step,
                          bool mixed, bool extrapolate = true) {
    const MetricTensor g = closed_form_metric(p);
    fd::JetOptions opts;
    opts.mixed = mixed;
    opts.richardson = extrapolate;
    const double cap = extrapolate ? axis_cap_factor * step : std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i) {
        opts.steps[static_cast<std::size_t>(i)] =
            std::min(step / std::sqrt(g.g(i, i).real()), cap);
    }
    // Resolve power-law behaviour on the scale of the distance to the locus.
    if (extrapolate) {
        opts.steps[0] = std::min(opts.steps[0], radial_fraction * distance_to_singular_locus(p));
    }
    return fd::jet(psi, p.coords, opts);
}

complex laplacian_real_chart(const fd::Jet& j, const ChartPoint& p) {
    const auto& x = p.coords;
    const auto& d1 = j.gradient;
    const auto& h = j.hessian;
    switch (p.chart) {
        case ChartId::h3_cylindrical: {
            const double sh = std::sinh(x[0]), ch = std::cosh(x[0]);
            return h(0, 0) + (ch / sh + sh / ch) * d1(0) + h(1, 1) / (sh * sh) +
                   h(2, 2) / (ch * ch);
        }
        case ChartId::s3_cylindrical: {
            const double s = std::sin(x[0]), c = std::cos(x[0]);
            return h(0, 0) + (c / s - s / c) * d1(0) + h(1, 1) / (s * s) + h(2, 2) / (c * c);
        }
        case ChartId::h3_horospherical: {
            const double e2z = std::exp(2.0 * x[2]);
            const double r = x[0];
            return e2z * (h(0, 0) + d1(0) / r) + e2z * h(1, 1) / (r * r) + h(2, 2) -
                   2.0 * d1(2);
        }
        case ChartId::s3_complex_horospherical: {
            const double fm1 = std::expm1(2.0 * x[0]);
            const double f = fm1 + 1.0;
            // (a, b, phi)
            return f / fm1 * h(2, 2) + fm1 * h(0, 0) + 2.0 * d1(0) + f * h(1, 1);
        }
    }
    throw DomainError("apply_hamiltonian: unknown chart");
}

complex hamiltonian_z_zstar(const fd::ScalarField& psi, const ChartPoint& p, double step) {
    const fd::Jet j = metric_scaled_jet(psi, p, step, true);
    const double fm1 = std::expm1(2.0 * p.coords[0]);
    const double f = fm1 + 1.0;
    const complex pa = j.gradient(0), pb = j.gradient(1);
    const complex paa = j.hessian(0, 0), pbb = j.hessian(1, 1), pab = j.hessian(0, 1);
    const complex dz = 0.5 * (pa - I * pb);
    const complex dw = 0.5 * (pa + I * pb);
    const complex dzz = 0.25 * (paa - 2.0 * I * pab - pbb);
    const complex dww = 0.25 * (paa + 2.0 * I * pab - pbb);
    const complex dzw = 0.25 * (paa + pbb);
    return 0.5 * (-f / fm1 * j.hessian(2, 2) + dzz + dww - 2.0 * (2.0 * f - 1.0) * dzw -
                  2.0 * dz - 2.0 * dw);
}

complex hamiltonian_r_rstar(const fd::ScalarField& psi, const ChartPoint& p, double step) {
    const double a = p.coords[0], b = p.coords[1], phi = p.coords[2];
    const double s = std::sqrt(std::expm1(2.0 * a));
    // r = A + iB = i s e^{ib}
    const Point x0{-s * std::sin(b), s * std::cos(b), phi};
    auto in_ab = [&psi, b](const Point& y) {
        const double s2 = y[0] * y[0] + y[1] * y[1];
        const double aa = 0.5 * std::log1p(s2);
        const double bb =
            b + std::remainder(std::atan2(-y[0], y[1]) - b, 2.0 * std::numbers::pi);
        return psi({aa, bb, y[2]});
    };
    fd::JetOptions opts;
    opts.mixed = true;
    const double hs = std::min(step * (1.0 + s * s), 0.1 * s);
    opts.steps = {hs, hs, std::min(step * std::sqrt(1.0 + s * s) / s, axis_cap_factor * step)};
    const fd::Jet j = fd::jet(in_ab, x0, opts);

    const complex pA = j.gradient(0), pB = j.gradient(1);
    const auto& hh = j.hessian;
    Eigen::Vector3cd grad;
    grad << 0.5 * (pA - I * pB), 0.5 * (pA + I * pB), j.gradient(2);
    Eigen::Matrix3cd hess;
    hess(0, 0) = 0.25 * (hh(0, 0) - 2.0 * I * hh(0, 1) - hh(1, 1));
    hess(1, 1) = 0.25 * (hh(0, 0) + 2.0 * I * hh(0, 1) - hh(1, 1));
    hess(0, 1) = hess(1, 0) = 0.25 * (hh(0, 0) + hh(1, 1));
    hess(0, 2) = hess(2, 0) = 0.5 * (hh(0, 2) - I * hh(1, 2));
    hess(1, 2) = hess(2, 1) = 0.5 * (hh(0, 2) + I * hh(1, 2));
    hess(2, 2) = hh(2, 2);

    const complex r = complexify(a, b).r;
    const Eigen::Vector3cd x(r, std::conj(r), phi);
    const MetricField block = [](const Eigen::Vector3cd& y) { return r_rstar_block(y(0), y(1)); };
    // The block is -dl^2, so its Laplacian is -Delta and H = +Delta_block / 2.
    return 0.5 * laplace_beltrami(block, x, grad, hess);
}

Point shifted(const QPoint& q) { return {q.q1, q.q2, q.q3}; }

}  // namespace

void validate(const QPoint& q) {
    if (!std::isfinite(q.q1) || !std::isfinite(q.q2) || !std::isfinite(q.q3)) {
        throw DomainError("QPoint: non-finite coordinate");
    }
    if (q.space == Space::hyperbolic && q.vec().squaredNorm() >= 1.0) {
        throw DomainError("QPoint: hyperbolic q^2 = " + std::to_string(q.vec().squaredNorm()) +
                          " must be < 1");
    }
}

OperatorSpec OperatorSpec::momentum(Eigen::Vector3d n, double step) {
    OperatorSpec s;
    s.kind = OperatorKind::momentum_component;
    s.n = n;
    s.step = step;
    return s;
}

OperatorSpec OperatorSpec::angular(int axis, double step) {
    OperatorSpec s;
    s.kind = OperatorKind::angular_momentum_component;
    s.axis = axis;
    s.step = step;
    return s;
}

void validate(const OperatorSpec& spec) {
    if (!(spec.step > 0.0)) throw DomainError("OperatorSpec: step must be positive");
    if (spec.kind == OperatorKind::momentum_component &&
        std::abs(spec.n.norm() - 1.0) > 1e-14) {
        throw DomainError("OperatorSpec: momentum direction n is not a unit vector");
    }
    if (spec.kind == OperatorKind::angular_momentum_component &&
        (spec.axis < 0 || spec.axis > 2)) {
        throw DomainError("OperatorSpec: angular momentum axis must be 0, 1 or 2");
    }
}

complex laplace_beltrami(const MetricField& g, const Eigen::Vector3cd& x,
                         const Eigen::Vector3cd& gradient, const Eigen::Matrix3cd& hessian,
                         double rel_step) {
    const Eigen::Matrix3cd g0 = g(x);
    const Eigen::Matrix3cd ginv = g0.inverse();
    const complex det0 = g0.determinant();

    complex out = ginv.cwiseProduct(hessian).sum();
    Eigen::Vector3cd first_order = Eigen::Vector3cd::Zero();
    for (int i = 0; i < 3; ++i) {
        const double h = rel_step * std::max(std::abs(x(i)), 1.0);
        auto at = [&](double d) {
            Eigen::Vector3cd y = x;
            y(i) += d;
            return y;
        };
        const Eigen::Matrix3cd dginv =
            fd::first([&](double d) -> Eigen::Matrix3cd { return g(at(d)).inverse(); }, h);
        const complex dlogdet =
            fd::first([&](double d) { return g(at(d)).determinant(); }, h) / det0;
        for (int j = 0; j < 3; ++j) {
            first_order(j) += dginv(i, j) + 0.5 * ginv(i, j) * dlogdet;
        }
    }
    out += first_order.cwiseProduct(gradient).sum();
    return out;
}

complex apply_hamiltonian(ChartId chart, const fd::ScalarField& psi, const ChartPoint& p,
                          double step, HamiltonianForm form) {
    if (p.chart != chart) throw DomainError("apply_hamiltonian: point belongs to another chart");
    require_interior(p, step, "apply_hamiltonian");
    if (chart != ChartId::s3_complex_horospherical && form != HamiltonianForm::native) {
        throw DomainError("apply_hamiltonian: variable-set forms exist only for the complex chart");
    }
    switch (form) {
        case HamiltonianForm::native:
            return -0.5 * laplacian_real_chart(metric_scaled_jet(psi, p, step, false), p);
        case HamiltonianForm::z_zstar: return hamiltonian_z_zstar(psi, p, step);
        case HamiltonianForm::r_rstar: return hamiltonian_r_rstar(psi, p, step);
    }
    throw DomainError("apply_hamiltonian: unknown form");
}

complex apply_hamiltonian_order4(ChartId chart, const fd::ScalarField& psi, const ChartPoint& p,
                                 double step) {
    if (p.chart != chart) throw DomainError("apply_hamiltonian_order4: point belongs to another chart");
    require_interior(p, step, "apply_hamiltonian_order4");
    return -0.5 * laplacian_real_chart(metric_scaled_jet(psi, p, step, false, false), p);
}

complex apply_p3(ChartId chart, const fd::ScalarField& psi, const ChartPoint& p, double step) {
    if (p.chart != chart) throw DomainError("apply_p3: point belongs to another chart");
    require_interior(p, step, "apply_p3");
    auto d = [&](int axis) {
        return fd::richardson(fd::partial(psi, p.coords, axis, step),
                              fd::partial(psi, p.coords, axis, 0.5 * step));
    };
    switch (chart) {
        case ChartId::h3_cylindrical: return -I * d(2);
        case ChartId::h3_horospherical: return -I * (p.coords[0] * d(0) + d(2));
        case ChartId::s3_complex_horospherical: return -d(1);
        case ChartId::s3_cylindrical:
            throw DomainError("apply_p3: no P3 form is defined on s3_cylindrical");
    }
    throw DomainError("apply_p3: unknown chart");
}

complex apply_generator(const OperatorSpec& spec, const fd::ScalarField& f, const QPoint& q,
                        double step) {
    validate(q);
    validate(spec);
    const Point x = shifted(q);
    Eigen::Vector3cd grad;
    for (int i = 0; i < 3; ++i) grad(i) = fd::partial(f, x, i, step);
    const Eigen::Vector3d qv = q.vec();

    switch (spec.kind) {
        case OperatorKind::momentum_component: {
            const double sign = q.space == Space::hyperbolic ? -1.0 : 1.0;
            const complex n_grad = spec.n.cast<complex>().dot(grad);
            const complex q_grad = qv.cast<complex>().dot(grad);
            return -I * (n_grad + sign * spec.n.dot(qv) * q_grad);
        }
        case OperatorKind::angular_momentum_component: {
            const int i = (spec.axis + 1) % 3, j = (spec.axis + 2) % 3;
            return -I * (qv(i) * grad(j) - qv(j) * grad(i));
        }
        case OperatorKind::hamiltonian:
        case OperatorKind::p3: break;
    }
    throw DomainError("apply_generator: operator kind is not a q-space generator");
}

double commutator_residual(const OperatorSpec& a, const OperatorSpec& b,
                           const OperatorCombination& expected, const fd::ScalarField& f,
                           const QPoint& q, double step) {
    auto lift = [&](const OperatorSpec& op) {
        return fd::ScalarField([&f, op, &q, step](const Point& y) {
            return apply_generator(op, f, QPoint{y[0], y[1], y[2], q.space}, step);
        });
    };
    const complex ab = apply_generator(a, lift(b), q, step) - apply_generator(b, lift(a), q, step);
    complex ex{};
    for (const auto& [c, op] : expected) ex += c * apply_generator(op, f, q, step);
    return std::abs(ab - ex);
}

std::array<OperatorSpec, 6> generator_basis(double step) {
    return {OperatorSpec::momentum({1.0, 0.0, 0.0}, step),
            OperatorSpec::momentum({0.0, 1.0, 0.0}, step),
            OperatorSpec::momentum({0.0, 0.0, 1.0}, step),
            OperatorSpec::angular(0, step),
            OperatorSpec::angular(1, step),
            OperatorSpec::angular(2, step)};
}

StructureFit fit_structure_constants(const OperatorSpec& a, const OperatorSpec& b,
                                     const std::vector<fd::ScalarField>& tests,
                                     const std::vector<QPoint>& fit_points,
                                     const std::vector<QPoint>& verify_points, double step) {
    const auto basis = generator_basis(step);
    auto sample = [&](const fd::ScalarField& f, const QPoint& q, Eigen::VectorXcd& row) {
        for (int k = 0; k < 6; ++k) row(k) = apply_generator(basis[static_cast<std::size_t>(k)], f, q, step);
        auto lift = [&](const OperatorSpec& op) {
            return fd::ScalarField([&f, op, &q, step](const Point& y) {
                return apply_generator(op, f, QPoint{y[0], y[1], y[2], q.space}, step);
            });
        };
        return apply_generator(a, lift(b), q, step) - apply_generator(b, lift(a), q, step);
    };

    const Eigen::Index rows = static_cast<Eigen::Index>(tests.size() * fit_points.size());
    Eigen::MatrixXcd m(rows, 6);
    Eigen::VectorXcd y(rows);
    Eigen::Index r = 0;
    Eigen::VectorXcd row(6);
    for (const QPoint& q : fit_points) {
        for (const auto& f : tests) {
            y(r) = sample(f, q, row);
            m.row(r) = row.transpose();
            ++r;
        }
    }
    const Eigen::VectorXcd c = m.colPivHouseholderQr().solve(y);

    StructureFit out;
    for (int k = 0; k < 6; ++k) out.coefficients[static_cast<std::size_t>(k)] = c(k);
    out.fit_residual = (m * c - y).cwiseAbs().maxCoeff();
    for (const QPoint& q : verify_points) {
        for (const auto& f : tests) {
            const complex lhs = sample(f, q, row);
            out.verify_residual =
                std::max(out.verify_residual, std::abs(lhs - row.cwiseProduct(c).sum()));
        }
    }
    return out;
}

}  // namespace curvedwave
