#pragma once

#include <array>
#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "curvedwave/finite_difference.hpp"
#include "curvedwave/geometry.hpp"

namespace curvedwave {

/// Projective point q = u / u0.
struct QPoint {
    double q1{};
    double q2{};
    double q3{};
    Space space{Space::hyperbolic};

    Eigen::Vector3d vec() const { return {q1, q2, q3}; }
};

/// Throws DomainError for hyperbolic q with q^2 >= 1 or non-finite entries.
void validate(const QPoint& q);

enum class OperatorKind { hamiltonian, p3, momentum_component, angular_momentum_component };

/// `n` is used by momentum_component (unit to 1e-14), `axis` (0, 1, 2) by
/// angular_momentum_component. `chart` is ignored for q-space generators.
struct OperatorSpec {
    OperatorKind kind{OperatorKind::hamiltonian};
    ChartId chart{ChartId::h3_cylindrical};
    Eigen::Vector3d n{0.0, 0.0, 1.0};
    int axis{2};
    double step{1e-3};

    static OperatorSpec momentum(Eigen::Vector3d n, double step = 1e-3);
    static OperatorSpec angular(int axis, double step = 1e-3);
};

void validate(const OperatorSpec& spec);

/// Representation used for the Hamiltonian of the complex chart.
enum class HamiltonianForm {
    native,   // chart coordinates; (a, b, phi) for the complex chart
    z_zstar,  // Wirtinger derivatives in z = a + ib, z*
    r_rstar,  // Laplace-Beltrami on the (r, r*) block
};

/// Default proper-length step for Hamiltonian stencils.
inline constexpr double default_hamiltonian_step = 2e-3;

/// (H psi)(p) with H = -Delta/2, second derivatives by order-4 stencils and
/// one Richardson step. `step` is a proper length; the coordinate step along
/// axis i is step / sqrt(g_ii), capped at 8 * step, and the non-periodic
/// axis is further limited to 0.007 times the distance to the singular locus.
/// Throws DomainError when p is closer than 10 * step to a singular locus.
complex apply_hamiltonian(ChartId chart, const fd::ScalarField& psi, const ChartPoint& p,
                          double step = default_hamiltonian_step,
                          HamiltonianForm form = HamiltonianForm::native);

/// Native-form Hamiltonian with the bare order-4 stencil: no extrapolation and
/// no cap on the coordinate steps. Used to measure the convergence order.
complex apply_hamiltonian_order4(ChartId chart, const fd::ScalarField& psi, const ChartPoint& p,
                                 double step);

using MetricField = std::function<Eigen::Matrix3cd(const Eigen::Vector3cd&)>;

/// g^{ij} d_i d_j psi + (d_i g^{ij} + g^{ij} d_i log sqrt(det g)) d_j psi for a
/// metric that is holomorphic in each coordinate. The metric derivatives use
/// order-4 differences with a step of `rel_step * max(|x_i|, 1)` per axis.
complex laplace_beltrami(const MetricField& g, const Eigen::Vector3cd& x,
                         const Eigen::Vector3cd& gradient, const Eigen::Matrix3cd& hessian,
                         double rel_step = 1e-3);

/// Third momentum component in chart coordinates:
///   h3_cylindrical -i d_z;  h3_horospherical -i (r d_r + d_z);
///   s3_complex_horospherical -d_b (the same generator on the real section).
/// s3_cylindrical has none and throws DomainError.
complex apply_p3(ChartId chart, const fd::ScalarField& psi, const ChartPoint& p,
                 double step = 1e-3);

/// q-space generators P = -i(1 -+ q q) d/dq (minus on H3), L = q x P.
complex apply_generator(const OperatorSpec& spec, const fd::ScalarField& f, const QPoint& q,
                        double step);

using OperatorCombination = std::vector<std::pair<complex, OperatorSpec>>;

/// |([A, B] - expected) f (q)| with nested differences at `step`.
double commutator_residual(const OperatorSpec& a, const OperatorSpec& b,
                           const OperatorCombination& expected, const fd::ScalarField& f,
                           const QPoint& q, double step);

/// P1, P2, P3, L1, L2, L3.
std::array<OperatorSpec, 6> generator_basis(double step = 1e-2);

struct StructureFit {
    std::array<complex, 6> coefficients{};  // on generator_basis order
    double fit_residual{0.0};
    double verify_residual{0.0};
};

/// Least-squares fit of [A, B] on the six generators over all (fit point, test
/// function) pairs, then the largest absolute residual at the verify points.
StructureFit fit_structure_constants(const OperatorSpec& a, const OperatorSpec& b,
                                     const std::vector<fd::ScalarField>& tests,
                                     const std::vector<QPoint>& fit_points,
                                     const std::vector<QPoint>& verify_points, double step);

}  // namespace curvedwave
