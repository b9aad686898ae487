#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curvedwave/geometry.hpp"
#include "curvedwave/operators.hpp"
#include "curvedwave/waves.hpp"

namespace curvedwave {

struct AxisRange {
    double min{0.0};
    double max{1.0};
    int count{2};
};

/// Tensor-product grid on one chart. Non-periodic axes include both ends;
/// periodic axes stop one spacing short of `max`.
struct GridSpec {
    ChartId chart{ChartId::h3_cylindrical};
    std::array<AxisRange, 3> axes{};
    /// Minimum distance of every point from the chart's singular loci.
    double margin{0.05};

    std::size_t size() const;
    std::vector<ChartPoint> points() const;
};

/// 20^3 by default: r in [0.1, 3], z in [-2, 2], rho in [0.05, pi/2 - 0.05],
/// a in [0.05, 3], angles over a full period.
GridSpec default_grid(ChartId chart, int count = 20);

/// Throws DomainError unless count >= 2, min + margin < max - margin on every
/// axis, margin >= 10 * step and every point keeps `margin` from the loci.
void validate(const GridSpec& grid, double step);

using ParamValue = std::variant<double, std::int64_t, std::string>;
using Params = std::map<std::string, ParamValue>;

struct ResidualReport {
    std::string name;
    std::optional<GridSpec> grid;
    double max_abs_residual{0.0};
    /// Max residual divided by max |psi| on the grid (or the check's own scale).
    double relative_residual{0.0};
    double tolerance{0.0};
    bool pass{false};
    Params params;
    /// Median of (Op psi)/psi over the grid, for eigenvalue checks.
    std::optional<complex> fitted_eigenvalue;

    /// pass = relative_residual <= tolerance (NaN fails).
    void finalize();
};

ResidualReport schrodinger_residual(ChartId chart, const WaveFunction& psi, double epsilon,
                                    const GridSpec& grid, double step, double tol,
                                    HamiltonianForm form = HamiltonianForm::native);

/// `op.kind` must be hamiltonian or p3.
ResidualReport eigen_residual(ChartId chart, const OperatorSpec& op, const WaveFunction& psi,
                              complex expected, const GridSpec& grid, double step, double tol);

/// q-space variant; `op` is a momentum or angular generator.
ResidualReport eigen_residual(const OperatorSpec& op, const fd::ScalarField& psi,
                              complex expected, const std::vector<QPoint>& points, double step,
                              double tol);

/// count^3 points: [-0.5, 0.5]^3 on H3 (inside q^2 < 1), [-1, 1]^3 on S3.
std::vector<QPoint> default_q_grid(Space space, int count = 5);

/// Pullback vs closed form at random interior points. `injected_scale`
/// multiplies the closed form.
ResidualReport metric_consistency(ChartId chart, int samples, std::uint64_t seed, double tol,
                                  double injected_scale = 1.0);

/// Complex-chart block in `variables` carried back to (a, b, phi) through a
/// numerical Jacobian of complexify, against the a_b block.
ResidualReport variable_set_consistency(VariableSet variables, int samples, std::uint64_t seed,
                                        double tol, double injected_scale = 1.0);

}  // namespace curvedwave
