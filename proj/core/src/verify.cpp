#include "curvedwave/verify.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "curvedwave/errors.hpp"

namespace curvedwave {

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double m = *mid;
    if (v.size() % 2 == 0) {
        m = 0.5 * (m + *std::max_element(v.begin(), mid));
    }
    return m;
}

complex componentwise_median(const std::vector<complex>& values) {
    std::vector<double> re, im;
    re.reserve(values.size());
    im.reserve(values.size());
    for (complex v : values) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    return {median(re), median(im)};
}

void add_wave_params(ResidualReport& r, const WaveFunction& psi) {
    r.params["family"] = std::string(to_string(psi.family));
    r.params["orientation"] = static_cast<std::int64_t>(psi.orientation);
    r.params["alpha_re"] = psi.alpha.real();
    r.params["alpha_im"] = psi.alpha.imag();
    r.params["epsilon"] = psi.epsilon;
    if (psi.branch) r.params["branch"] = std::string(to_string(*psi.branch));
    if (psi.representation != "native") r.params["representation"] = psi.representation;
}

ChartPoint random_interior_point(ChartId chart, std::mt19937_64& rng) {
    const GridSpec g = default_grid(chart, 2);
    ChartPoint p{chart, {}};
    for (std::size_t i = 0; i < 3; ++i) {
        std::uniform_real_distribution<double> u(g.axes[i].min, g.axes[i].max);
        double x = u(rng);
        // Keep half-open periodic ranges half open.
        if (chart_info(chart).axes[i].periodic && x >= g.axes[i].max) x = g.axes[i].min;
        p.coords[i] = x;
    }
    return p;
}

double max_entry(const Eigen::Matrix3cd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

void ResidualReport::finalize() { pass = relative_residual <= tolerance; }

ResidualReport schrodinger_residual(ChartId chart, const WaveFunction& psi, double epsilon,
                                    const GridSpec& grid, double step, double tol,
                                    HamiltonianForm form) {
    if (psi.chart != chart || grid.chart != chart) {
        throw DomainError("schrodinger_residual: wave, grid and chart disagree");
    }
    validate(grid, step);
    double max_res = 0.0, max_psi = 0.0;
    for (const ChartPoint& p : grid.points()) {
        const complex v = psi.at(p.coords);
        const complex h = apply_hamiltonian(chart, psi.evaluator, p, step, form);
        max_res = std::max(max_res, std::abs(h - epsilon * v));
        max_psi = std::max(max_psi, std::abs(v));
        if (!std::isfinite(max_res)) break;
    }
    ResidualReport r;
    r.name = "schrodinger";
    r.grid = grid;
    r.max_abs_residual = max_res;
    r.relative_residual = max_psi > 0.0 ? max_res / max_psi : max_res;
    if (std::isnan(max_res)) r.relative_residual = max_res;
    r.tolerance = tol;
    add_wave_params(r, psi);
    r.params["epsilon"] = epsilon;
    r.params["chart"] = std::string(to_string(chart));
    r.params["step"] = step;
    r.finalize();
    return r;
}

ResidualReport eigen_residual(ChartId chart, const OperatorSpec& op, const WaveFunction& psi,
                              complex expected, const GridSpec& grid, double step, double tol) {
    if (psi.chart != chart || grid.chart != chart) {
        throw DomainError("eigen_residual: wave, grid and chart disagree");
    }
    if (op.kind != OperatorKind::p3 && op.kind != OperatorKind::hamiltonian) {
        throw DomainError("eigen_residual: chart operators are p3 or hamiltonian");
    }
    validate(grid, step);
    double max_res = 0.0, max_psi = 0.0;
    std::vector<complex> ratios;
    ratios.reserve(grid.size());
    for (const ChartPoint& p : grid.points()) {
        const complex v = psi.at(p.coords);
        const complex o = op.kind == OperatorKind::p3
                              ? apply_p3(chart, psi.evaluator, p, step)
                              : apply_hamiltonian(chart, psi.evaluator, p, step);
        max_res = std::max(max_res, std::abs(o - expected * v));
        max_psi = std::max(max_psi, std::abs(v));
        if (std::abs(v) > 1e-300) ratios.push_back(o / v);
    }
    ResidualReport r;
    r.name = op.kind == OperatorKind::p3 ? "eigen_p3" : "eigen_hamiltonian";
    r.grid = grid;
    r.max_abs_residual = max_res;
    r.relative_residual = max_psi > 0.0 ? max_res / max_psi : max_res;
    r.tolerance = tol;
    r.fitted_eigenvalue = componentwise_median(ratios);
    add_wave_params(r, psi);
    r.params["chart"] = std::string(to_string(chart));
    r.params["step"] = step;
    r.params["expected_re"] = expected.real();
    r.params["expected_im"] = expected.imag();
    r.params["fitted_re"] = r.fitted_eigenvalue->real();
    r.params["fitted_im"] = r.fitted_eigenvalue->imag();
    r.finalize();
    return r;
}

ResidualReport eigen_residual(const OperatorSpec& op, const fd::ScalarField& psi,
                              complex expected, const std::vector<QPoint>& points, double step,
                              double tol) {
    double max_res = 0.0, max_psi = 0.0;
    std::vector<complex> ratios;
    for (const QPoint& q : points) {
        const complex v = psi({q.q1, q.q2, q.q3});
        const complex o = apply_generator(op, psi, q, step);
        max_res = std::max(max_res, std::abs(o - expected * v));
        max_psi = std::max(max_psi, std::abs(v));
        if (std::abs(v) > 1e-300) ratios.push_back(o / v);
    }
    ResidualReport r;
    r.name = "eigen_generator";
    r.max_abs_residual = max_res;
    r.relative_residual = max_psi > 0.0 ? max_res / max_psi : max_res;
    r.tolerance = tol;
    r.fitted_eigenvalue = componentwise_median(ratios);
    r.params["points"] = static_cast<std::int64_t>(points.size());
    r.params["step"] = step;
    r.params["expected_re"] = expected.real();
    r.params["expected_im"] = expected.imag();
    r.params["fitted_re"] = r.fitted_eigenvalue->real();
    r.params["fitted_im"] = r.fitted_eigenvalue->imag();
    r.finalize();
    return r;
}

std::vector<QPoint> default_q_grid(Space space, int count) {
    const double half = space == Space::hyperbolic ? 0.5 : 1.0;
    std::vector<QPoint> out;
    for (int i = 0; i < count; ++i) {
        for (int j = 0; j < count; ++j) {
            for (int k = 0; k < count; ++k) {
                auto c = [&](int t) { return -half + 2.0 * half * t / (count - 1); };
                out.push_back({c(i), c(j), c(k), space});
            }
        }
    }
    return out;
}

ResidualReport metric_consistency(ChartId chart, int samples, std::uint64_t seed, double tol,
                                  double injected_scale) {
    if (samples < 1) throw DomainError("metric_consistency: samples must be >= 1");
    std::mt19937_64 rng(seed);
    double worst_rel = 0.0, worst_abs = 0.0;
    for (int s = 0; s < samples; ++s) {
        const ChartPoint p = random_interior_point(chart, rng);
        const MetricTensor pb = pullback_metric(p);
        const Eigen::Matrix3cd cf = injected_scale * closed_form_metric(p).g;
        const double diff = max_entry(pb.g - cf);
        worst_abs = std::max(worst_abs, diff);
        worst_rel = std::max(worst_rel, diff / max_entry(cf));
    }
    ResidualReport r;
    r.name = "metric_consistency";
    r.max_abs_residual = worst_abs;
    r.relative_residual = worst_rel;
    r.tolerance = tol;
    r.params["chart"] = std::string(to_string(chart));
    r.params["samples"] = static_cast<std::int64_t>(samples);
    r.params["seed"] = static_cast<std::int64_t>(seed);
    r.finalize();
    return r;
}

ResidualReport variable_set_consistency(VariableSet variables, int samples, std::uint64_t seed,
                                        double tol, double injected_scale) {
    if (variables != VariableSet::z_zstar && variables != VariableSet::r_rstar) {
        throw DomainError("variable_set_consistency: compare z_zstar or r_rstar with a_b");
    }
    if (samples < 1) throw DomainError("variable_set_consistency: samples must be >= 1");
    std::mt19937_64 rng(seed);
    const double h = 1e-4;
    double worst_rel = 0.0, worst_abs = 0.0;
    for (int s = 0; s < samples; ++s) {
        const ChartPoint p = random_interior_point(ChartId::s3_complex_horospherical, rng);
        const double a = p.coords[0], b = p.coords[1];
        auto coords = [&](double da, double db) {
            const ComplexHoroPair c = complexify(a + da, b + db);
            const complex x = variables == VariableSet::z_zstar ? c.z : c.r;
            return Eigen::Vector2cd(x, std::conj(x));
        };
        Eigen::Matrix3cd jac = Eigen::Matrix3cd::Zero();
        jac.block<2, 1>(0, 0) = fd::first([&](double d) { return coords(d, 0.0); }, h);
        jac.block<2, 1>(0, 1) = fd::first([&](double d) { return coords(0.0, d); }, h);
        jac(2, 2) = 1.0;
        const Eigen::Matrix3cd block = injected_scale * metric_in_variables(p, variables).g;
        const Eigen::Matrix3cd carried = jac.transpose() * block * jac;
        const Eigen::Matrix3cd reference = metric_in_variables(p, VariableSet::a_b).g;
        const double diff = max_entry(carried - reference);
        worst_abs = std::max(worst_abs, diff);
        worst_rel = std::max(worst_rel, diff / max_entry(reference));
    }
    ResidualReport r;
    r.name = "variable_set_consistency";
    r.max_abs_residual = worst_abs;
    r.relative_residual = worst_rel;
    r.tolerance = tol;
    r.params["variables"] = std::string(to_string(variables));
    r.params["samples"] = static_cast<std::int64_t>(samples);
    r.params["seed"] = static_cast<std::int64_t>(seed);
    r.finalize();
    return r;
}

}  // namespace curvedwave
