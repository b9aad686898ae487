#include "curvedwave/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "curvedwave/errors.hpp"
#include "curvedwave/finite_difference.hpp"

namespace curvedwave {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

// Below this (relative) size a polar radius is treated as zero and its angle
// is undefined.
constexpr double degenerate_radius = 1e-14;

const std::array<ChartInfo, 4> atlas{{
    {ChartId::h3_cylindrical,
     Space::hyperbolic,
     {{{"r", 0.0, inf, false, false},
       {"phi", 0.0, two_pi, true, false},
       {"z", -inf, inf, false, false}}},
     "r = 0 (phi undefined)"},
    {ChartId::s3_cylindrical,
     Space::spherical,
     {{{"rho", 0.0, pi / 2.0, false, true},
       {"phi", 0.0, two_pi, true, false},
       {"z", -pi, pi, true, false}}},
     "rho = 0 (phi undefined); rho = pi/2 (z undefined)"},
    {ChartId::h3_horospherical,
     Space::hyperbolic,
     {{{"r", 0.0, inf, false, false},
       {"phi", 0.0, two_pi, true, false},
       {"z", -inf, inf, false, false}}},
     "r = 0 (phi undefined)"},
    {ChartId::s3_complex_horospherical,
     Space::spherical,
     {{{"a", 0.0, inf, false, false},
       {"b", 0.0, two_pi, true, false},
       {"phi", 0.0, two_pi, true, false}}},
     "a = 0 (phi mute); a -> infinity (b mute)"},
}};

double wrap_angle(double x) {
    double r = std::fmod(x, two_pi);
    if (r < 0.0) r += two_pi;
    if (r >= two_pi) r = 0.0;
    return r;
}

double wrap_symmetric(double x) {
    // [-pi, pi)
    double r = wrap_angle(x + pi) - pi;
    return r;
}

MetricTensor diagonal_metric(double g0, double g1, double g2, VariableSet vars,
                             MetricSignature sig) {
    MetricTensor m;
    m.g = Eigen::Matrix3cd::Zero();
    m.g(0, 0) = g0;
    m.g(1, 1) = g1;
    m.g(2, 2) = g2;
    m.variables = vars;
    m.signature = sig;
    m.determinant = g0 * g1 * g2;
    return m;
}

Eigen::Matrix<double, 4, 3> embedding_jacobian(ChartId chart, const std::array<double, 3>& x,
                                               double h) {
    Eigen::Matrix<double, 4, 3> jac;
    for (int axis = 0; axis < 3; ++axis) {
        auto g = [&](double d) {
            std::array<double, 3> y = x;
            y[static_cast<std::size_t>(axis)] += d;
            const AmbientPoint q = embed_unchecked(chart, y);
            return Eigen::Vector4d(q.u0, q.u1, q.u2, q.u3);
        };
        jac.col(axis) = fd::first(g, h);
    }
    return jac;
}

Eigen::Matrix3d pulled_back(ChartId chart, const std::array<double, 3>& x, double h) {
    const Eigen::Matrix<double, 4, 3> jac = embedding_jacobian(chart, x, h);
    Eigen::Vector4d eta(1.0, 1.0, 1.0, 1.0);
    // Spatial line element on H3 is -(du0^2 - du^2).
    if (space_of(chart) == Space::hyperbolic) eta(0) = -1.0;
    return jac.transpose() * eta.asDiagonal() * jac;
}

}  // namespace

std::string_view to_string(ChartId chart) {
    switch (chart) {
        case ChartId::h3_cylindrical: return "h3_cylindrical";
        case ChartId::s3_cylindrical: return "s3_cylindrical";
        case ChartId::h3_horospherical: return "h3_horospherical";
        case ChartId::s3_complex_horospherical: return "s3_complex_horospherical";
    }
    return "unknown";
}

std::string_view to_string(Space space) {
    return space == Space::hyperbolic ? "hyperbolic" : "spherical";
}

std::optional<ChartId> parse_chart(std::string_view name) {
    for (ChartId c : all_charts) {
        if (to_string(c) == name) return c;
    }
    return std::nullopt;
}

std::string_view to_string(VariableSet variables) {
    switch (variables) {
        case VariableSet::chart_real: return "chart_real";
        case VariableSet::z_zstar: return "z_zstar";
        case VariableSet::r_rstar: return "r_rstar";
        case VariableSet::a_b: return "a_b";
    }
    return "unknown";
}

std::optional<VariableSet> parse_variable_set(std::string_view name) {
    for (VariableSet v : {VariableSet::chart_real, VariableSet::z_zstar, VariableSet::r_rstar,
                          VariableSet::a_b}) {
        if (to_string(v) == name) return v;
    }
    return std::nullopt;
}

Space space_of(ChartId chart) { return chart_info(chart).space; }

const ChartInfo& chart_info(ChartId chart) {
    return atlas[static_cast<std::size_t>(chart)];
}

void validate(const ChartPoint& p) {
    const ChartInfo& info = chart_info(p.chart);
    for (std::size_t i = 0; i < 3; ++i) {
        const AxisInfo& ax = info.axes[i];
        const double x = p.coords[i];
        const bool below = x < ax.min;
        const bool above = ax.max_inclusive ? x > ax.max : x >= ax.max;
        if (!std::isfinite(x) || below || above) {
            throw DomainError(std::string(to_string(p.chart)) + ": coordinate " +
                              std::string(ax.name) + " = " + std::to_string(x) +
                              " is out of range");
        }
    }
}

double ambient_constraint(const AmbientPoint& q) {
    const double spatial = q.u1 * q.u1 + q.u2 * q.u2 + q.u3 * q.u3;
    if (q.space == Space::hyperbolic) return q.u0 * q.u0 - spatial - 1.0;
    return q.u0 * q.u0 + spatial - 1.0;
}

bool satisfies_constraint(const AmbientPoint& q, double tol) {
    const double scale =
        std::max(1.0, q.u0 * q.u0 + q.u1 * q.u1 + q.u2 * q.u2 + q.u3 * q.u3);
    if (!(std::abs(ambient_constraint(q)) <= tol * scale)) return false;
    if (q.space == Space::hyperbolic && q.u0 < 1.0 - tol * scale) return false;
    return true;
}

AmbientPoint embed_unchecked(ChartId chart, const std::array<double, 3>& x) {
    switch (chart) {
        case ChartId::h3_cylindrical: {
            const double r = x[0], phi = x[1], z = x[2];
            const double sh = std::sinh(r), ch = std::cosh(r);
            return {ch * std::cosh(z), sh * std::cos(phi), sh * std::sin(phi), ch * std::sinh(z),
                    Space::hyperbolic};
        }
        case ChartId::s3_cylindrical: {
            const double rho = x[0], phi = x[1], z = x[2];
            const double s = std::sin(rho), c = std::cos(rho);
            return {c * std::cos(z), s * std::cos(phi), s * std::sin(phi), c * std::sin(z),
                    Space::spherical};
        }
        case ChartId::h3_horospherical: {
            const double r = x[0], phi = x[1], z = x[2];
            const double em = std::exp(-z), ep = std::exp(z);
            return {0.5 * (ep + (r * r + 1.0) * em), r * em * std::cos(phi),
                    r * em * std::sin(phi), 0.5 * (ep + (r * r - 1.0) * em), Space::hyperbolic};
        }
        case ChartId::s3_complex_horospherical: {
            const double a = x[0], b = x[1], phi = x[2];
            // sqrt(e^{2a} - 1) e^{-a} = sqrt(1 - e^{-2a})
            const double s = std::sqrt(-std::expm1(-2.0 * a));
            const double ea = std::exp(-a);
            return {ea * std::cos(b), s * std::cos(phi), s * std::sin(phi), ea * std::sin(b),
                    Space::spherical};
        }
    }
    throw DomainError("embed: unknown chart");
}

AmbientPoint embed(const ChartPoint& p) {
    validate(p);
    return embed_unchecked(p.chart, p.coords);
}

UnembedResult unembed(const AmbientPoint& q, ChartId chart) {
    const ChartInfo& info = chart_info(chart);
    if (q.space != info.space) {
        throw DomainError("unembed: " + std::string(to_string(q.space)) +
                          " point cannot be expressed in chart " +
                          std::string(to_string(chart)));
    }
    if (!satisfies_constraint(q, 1e-10)) {
        throw DomainError("unembed: ambient point violates the " +
                          std::string(to_string(q.space)) + " constraint");
    }
    const double scale = std::sqrt(std::max(1.0, q.u0 * q.u0 + q.u3 * q.u3));
    const double rxy = std::hypot(q.u1, q.u2);
    UnembedResult out{{chart, {0.0, 0.0, 0.0}}, false};
    auto polar_angle = [&](double x, double y, double radius) {
        if (radius < degenerate_radius * scale) {
            out.degenerate = true;
            return 0.0;
        }
        return wrap_angle(std::atan2(y, x));
    };

    switch (chart) {
        case ChartId::h3_cylindrical: {
            const double r = std::asinh(rxy);
            const double chr = std::sqrt(1.0 + rxy * rxy);
            out.point.coords = {r, polar_angle(q.u1, q.u2, rxy), std::asinh(q.u3 / chr)};
            break;
        }
        case ChartId::s3_cylindrical: {
            const double r03 = std::hypot(q.u0, q.u3);
            const double rho = std::atan2(rxy, r03);
            double z = 0.0;
            if (r03 < degenerate_radius) {
                out.degenerate = true;
            } else {
                z = wrap_symmetric(std::atan2(q.u3, q.u0));
            }
            out.point.coords = {rho, polar_angle(q.u1, q.u2, rxy), z};
            break;
        }
        case ChartId::h3_horospherical: {
            // e^{-z} = u0 - u3, computed without cancellation.
            const double d =
                q.u3 >= 0.0 ? (1.0 + rxy * rxy) / (q.u0 + q.u3) : q.u0 - q.u3;
            out.point.coords = {rxy / d, polar_angle(q.u1, q.u2, rxy), -std::log(d)};
            break;
        }
        case ChartId::s3_complex_horospherical: {
            const double r03 = std::hypot(q.u0, q.u3);
            if (r03 < degenerate_radius) {
                throw DomainError(
                    "unembed: point lies on V0 = V3 = 0 (a = infinity), not representable");
            }
            const double rxy2 = rxy * rxy;
            double a = rxy2 < 0.5 ? -0.5 * std::log1p(-rxy2) : -std::log(r03);
            a = std::max(a, 0.0);
            out.point.coords = {a, wrap_angle(std::atan2(q.u3, q.u0)),
                                polar_angle(q.u1, q.u2, rxy)};
            break;
        }
    }
    return out;
}

double distance_to_singular_locus(const ChartPoint& p) {
    switch (p.chart) {
        case ChartId::h3_cylindrical:
        case ChartId::h3_horospherical: return p.coords[0];
        case ChartId::s3_cylindrical: return std::min(p.coords[0], pi / 2.0 - p.coords[0]);
        case ChartId::s3_complex_horospherical: return p.coords[0];
    }
    return 0.0;
}

MetricTensor closed_form_metric(const ChartPoint& p) {
    validate(p);
    const auto& x = p.coords;
    switch (p.chart) {
        case ChartId::h3_cylindrical: {
            const double sh = std::sinh(x[0]), ch = std::cosh(x[0]);
            return diagonal_metric(1.0, sh * sh, ch * ch, VariableSet::chart_real,
                                   MetricSignature::line_element);
        }
        case ChartId::s3_cylindrical: {
            const double s = std::sin(x[0]), c = std::cos(x[0]);
            return diagonal_metric(1.0, s * s, c * c, VariableSet::chart_real,
                                   MetricSignature::line_element);
        }
        case ChartId::h3_horospherical: {
            const double e = std::exp(-2.0 * x[2]);
            return diagonal_metric(e, x[0] * x[0] * e, 1.0, VariableSet::chart_real,
                                   MetricSignature::line_element);
        }
        case ChartId::s3_complex_horospherical: {
            const double a = x[0];
            return diagonal_metric(1.0 / std::expm1(2.0 * a), std::exp(-2.0 * a),
                                   -std::expm1(-2.0 * a), VariableSet::a_b,
                                   MetricSignature::line_element);
        }
    }
    throw DomainError("closed_form_metric: unknown chart");
}

MetricTensor pullback_metric(const ChartPoint& p, double step) {
    validate(p);
    if (!(step > 0.0)) throw DomainError("pullback_metric: step must be positive");
    const double dist = distance_to_singular_locus(p);
    if (dist < 10.0 * step) {
        throw DomainError("pullback_metric: step " + std::to_string(step) +
                          " too large for distance " + std::to_string(dist) +
                          " to the chart boundary");
    }
    const Eigen::Matrix3d coarse = pulled_back(p.chart, p.coords, step);
    const Eigen::Matrix3d fine = pulled_back(p.chart, p.coords, 0.5 * step);

    MetricTensor m;
    m.g = coarse.cast<complex>();
    m.variables = p.chart == ChartId::s3_complex_horospherical ? VariableSet::a_b
                                                               : VariableSet::chart_real;
    m.signature = MetricSignature::line_element;
    m.determinant = coarse.determinant();
    m.error_estimate = (coarse - fine).cwiseAbs().maxCoeff();
    return m;
}

ComplexHoroPair complexify(double a, double b) {
    if (!(a >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
        throw DomainError("complexify: a = " + std::to_string(a) + " must be finite and >= 0");
    }
    const double s = std::sqrt(std::expm1(2.0 * a));
    const complex eib = std::polar(1.0, b);
    return {complex(a, b), complex(0.0, 1.0) * s * eib};
}

double constraint_residual(const ComplexHoroPair& pair) {
    const complex& z = pair.z;
    return std::abs(pair.r * pair.r - std::exp(z - std::conj(z)) + std::exp(2.0 * z));
}

double unit_modulus_residual(const ComplexHoroPair& pair) {
    const complex w = std::exp(2.0 * pair.z) + pair.r * pair.r;
    return std::abs(w * std::conj(w) - 1.0);
}

Eigen::Matrix3cd z_zstar_block(complex z, complex w) {
    const complex f = std::exp(z + w);
    const complex c = 1.0 / (4.0 * f * (f - 1.0));
    Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
    g(0, 0) = -c;
    g(1, 1) = -c;
    g(0, 1) = g(1, 0) = -(2.0 * f - 1.0) * c;
    g(2, 2) = -(f - 1.0) / f;
    return g;
}

Eigen::Matrix3cd r_rstar_block(complex r, complex rs) {
    const complex p = r * rs;
    const complex k = 1.0 / (4.0 * (1.0 + p) * (1.0 + p));
    Eigen::Matrix3cd g = Eigen::Matrix3cd::Zero();
    g(0, 0) = k / (r * r);
    g(1, 1) = k / (rs * rs);
    g(0, 1) = g(1, 0) = -(2.0 * p + 1.0) * k / p;
    g(2, 2) = -p / (1.0 + p);
    return g;
}

MetricTensor metric_in_variables(const ChartPoint& p, VariableSet variables) {
    if (p.chart != ChartId::s3_complex_horospherical) {
        throw DomainError("metric_in_variables: variable set " +
                          std::string(to_string(variables)) +
                          " requires the s3_complex_horospherical chart, got " +
                          std::string(to_string(p.chart)));
    }
    validate(p);
    const double a = p.coords[0], b = p.coords[1];
    if (a == 0.0) {
        throw DomainError("metric_in_variables: singular locus a = 0");
    }
    MetricTensor m;
    m.variables = variables;
    m.signature = MetricSignature::spacetime_block;
    switch (variables) {
        case VariableSet::a_b: {
            const double fm1 = std::expm1(2.0 * a);
            const double f = fm1 + 1.0;
            m.g = Eigen::Matrix3cd::Zero();
            m.g(0, 0) = -1.0 / fm1;
            m.g(1, 1) = -1.0 / f;
            m.g(2, 2) = -fm1 / f;
            break;
        }
        case VariableSet::z_zstar: {
            const ComplexHoroPair pair = complexify(a, b);
            m.g = z_zstar_block(pair.z, std::conj(pair.z));
            break;
        }
        case VariableSet::r_rstar: {
            const ComplexHoroPair pair = complexify(a, b);
            m.g = r_rstar_block(pair.r, std::conj(pair.r));
            break;
        }
        case VariableSet::chart_real:
            throw DomainError("metric_in_variables: chart_real is not a variable set of the "
                              "complex chart");
    }
    m.determinant = m.g.determinant();
    return m;
}

}  // namespace curvedwave
