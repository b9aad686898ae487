#pragma once

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string_view>

#include <Eigen/Dense>

namespace curvedwave {

using complex = std::complex<double>;

enum class Space { hyperbolic, spherical };

/// The four charts of the atlas. Curvature radius is fixed to 1.
enum class ChartId {
    h3_cylindrical,            // (r, phi, z)
    s3_cylindrical,            // (rho, phi, z)
    h3_horospherical,          // (r, phi, z)
    s3_complex_horospherical,  // real parameters (a, b, phi)
};

inline constexpr std::array<ChartId, 4> all_charts{
    ChartId::h3_cylindrical, ChartId::s3_cylindrical, ChartId::h3_horospherical,
    ChartId::s3_complex_horospherical};

std::string_view to_string(ChartId chart);
std::string_view to_string(Space space);
std::optional<ChartId> parse_chart(std::string_view name);

Space space_of(ChartId chart);

/// A point of one chart. Plain aggregate: construction does not validate,
/// `validate` / `embed` do. Finite-difference stencils routinely step across
/// periodic seams, so evaluators accept unvalidated points.
struct ChartPoint {
    ChartId chart;
    std::array<double, 3> coords;
};

/// Quasi-Cartesian embedding coordinates. Hyperbolic: u0^2 - |u|^2 = 1, u0 >= 1.
/// Spherical: u0^2 + |u|^2 = 1. For the complex chart these are (V0, V1, V2, V3).
struct AmbientPoint {
    double u0{};
    double u1{};
    double u2{};
    double u3{};
    Space space{Space::hyperbolic};
};

/// Complex horospherical pair on S3; r^2 = e^{z - z*} - e^{2z} on the real section.
struct ComplexHoroPair {
    complex z;
    complex r;
};

enum class VariableSet { chart_real, z_zstar, r_rstar, a_b };

std::string_view to_string(VariableSet variables);
std::optional<VariableSet> parse_variable_set(std::string_view name);

/// How the 3x3 block relates to the line element.
///   line_element:    dl^2 = g_ij dx^i dx^j (positive definite on real charts)
///   spacetime_block: dS^2 = dt^2 + g_ij dx^i dx^j, i.e. g = -dl^2. This is
///                    the block the complex-coordinate metrics are written in.
enum class MetricSignature { line_element, spacetime_block };

struct MetricTensor {
    Eigen::Matrix3cd g;
    VariableSet variables{VariableSet::chart_real};
    MetricSignature signature{MetricSignature::line_element};
    complex determinant;
    /// Only set by pullback_metric: max entrywise |g(h) - g(h/2)|.
    double error_estimate{0.0};
};

struct AxisInfo {
    std::string_view name;
    double min;
    double max;  // +inf for unbounded axes
    bool periodic;
    bool max_inclusive;
};

struct ChartInfo {
    ChartId id;
    Space space;
    std::array<AxisInfo, 3> axes;
    std::string_view singular_loci;
};

const ChartInfo& chart_info(ChartId chart);

/// Throws DomainError naming the first out-of-range or non-finite coordinate.
void validate(const ChartPoint& p);

/// u0^2 - |u|^2 - 1 (hyperbolic) or u0^2 + |u|^2 - 1 (spherical).
double ambient_constraint(const AmbientPoint& q);

/// Constraint check scaled by the magnitude of the squared components, so
/// hyperboloid points far from the origin are judged at working precision.
bool satisfies_constraint(const AmbientPoint& q, double tol = 1e-12);

AmbientPoint embed(const ChartPoint& p);

/// Embedding formula without range validation.
AmbientPoint embed_unchecked(ChartId chart, const std::array<double, 3>& x);

struct UnembedResult {
    ChartPoint point;
    /// An angle was undefined at this point and set to 0 by convention.
    bool degenerate{false};
};

UnembedResult unembed(const AmbientPoint& q, ChartId chart);

/// Distance, measured along the chart's non-periodic coordinate, to the
/// nearest singular locus (r = 0; rho = 0 or pi/2; a = 0).
double distance_to_singular_locus(const ChartPoint& p);

/// Closed-form spatial metric as a line element. Tag chart_real for the real
/// charts and a_b for the complex chart (coordinates ordered a, b, phi).
MetricTensor closed_form_metric(const ChartPoint& p);

/// Numerical pullback of the ambient quadratic form through `embed`, using
/// order-4 central differences with one halving for the error estimate.
MetricTensor pullback_metric(const ChartPoint& p, double step = 1e-4);

ComplexHoroPair complexify(double a, double b);

/// |r^2 - e^{z - z*} + e^{2z}|.
double constraint_residual(const ComplexHoroPair& pair);

/// |(e^{2z} + r^2)(e^{2z} + r^2)* - 1|.
double unit_modulus_residual(const ComplexHoroPair& pair);

/// Metric of the complex chart in the requested variable set, as the
/// spacetime block (g_tt = 1, so `determinant` is also the 4x4 determinant).
/// Coordinates are ordered (a, b, phi), (z, z*, phi) or (r, r*, phi).
MetricTensor metric_in_variables(const ChartPoint& p, VariableSet variables);

/// Spacetime block in (z, W, phi) with z and W treated as independent.
Eigen::Matrix3cd z_zstar_block(complex z, complex w);

/// Spacetime block in (r, R, phi) with r and R = r* treated as independent.
Eigen::Matrix3cd r_rstar_block(complex r, complex rs);

}  // namespace curvedwave
