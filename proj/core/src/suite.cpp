#include "curvedwave/suite.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "curvedwave/errors.hpp"

namespace curvedwave {

namespace {

using nlohmann::json;
constexpr complex I{0.0, 1.0};
constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

std::string num(double x) {
    char buf[32];
    const auto r = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, r.ptr);
}

std::string sign(int s) { return s < 0 ? "-" : "+"; }

ResidualReport scalar_report(std::string name, double max_abs, double relative, double tol,
                             Params params = {}) {
    ResidualReport r;
    r.name = std::move(name);
    r.max_abs_residual = max_abs;
    r.relative_residual = relative;
    r.tolerance = tol;
    r.params = std::move(params);
    r.finalize();
    return r;
}

std::vector<double> plane_epsilons(Family family) {
    if (space_of(family) == Space::hyperbolic) return {0.6, 1.0, 2.5};
    std::vector<double> out;
    for (int n : {1, 2, 3, 5}) out.push_back((n * n - 1) / 2.0);
    return out;
}

double level(int big_n) { return (static_cast<double>(big_n) * big_n - 1.0) / 2.0; }

ChartPoint random_point(ChartId chart, std::mt19937_64& rng) {
    const GridSpec g = default_grid(chart, 2);
    ChartPoint p{chart, {}};
    for (std::size_t i = 0; i < 3; ++i) {
        std::uniform_real_distribution<double> u(g.axes[i].min, g.axes[i].max);
        p.coords[i] = u(rng);
        if (chart_info(chart).axes[i].periodic && p.coords[i] >= g.axes[i].max) {
            p.coords[i] = g.axes[i].min;
        }
    }
    return p;
}

double angular_distance(double x, double y, double period) {
    const double d = std::remainder(x - y, period);
    return std::abs(d);
}

// ---- geometry ----------------------------------------------------------

ResidualReport embedding_constraint(ChartId chart, const SuiteConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        AmbientPoint q = embed(random_point(chart, rng));
        q.u0 = cfg.perturb(q.u0);
        const double scale =
            std::max(1.0, q.u0 * q.u0 + q.u1 * q.u1 + q.u2 * q.u2 + q.u3 * q.u3);
        worst = std::max(worst, std::abs(ambient_constraint(q)) / scale);
    }
    return scalar_report("embedding_constraint", worst, worst, cfg.tol.exact,
                         {{"chart", std::string(to_string(chart))}, {"samples", std::int64_t{1000}}});
}

ResidualReport embedding_roundtrip(ChartId chart, const SuiteConfig& cfg) {
    std::mt19937_64 rng(cfg.seed + 1);
    const ChartInfo& info = chart_info(chart);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const ChartPoint p = random_point(chart, rng);
        const AmbientPoint q = embed(p);
        ChartPoint back = unembed(q, chart).point;
        back.coords[0] = cfg.perturb(back.coords[0]);
        const AmbientPoint q2 = embed_unchecked(chart, back.coords);
        const double norm = std::max({1.0, std::abs(q.u0), std::abs(q.u1), std::abs(q.u2),
                                      std::abs(q.u3)});
        double err = std::max({std::abs(q2.u0 - q.u0), std::abs(q2.u1 - q.u1),
                               std::abs(q2.u2 - q.u2), std::abs(q2.u3 - q.u3)}) /
                     norm;
        for (std::size_t k = 0; k < 3; ++k) {
            const AxisInfo& ax = info.axes[k];
            const double d = ax.periodic ? angular_distance(back.coords[k], p.coords[k], ax.max - ax.min)
                                         : std::abs(back.coords[k] - p.coords[k]);
            err = std::max(err, d / std::max(1.0, std::abs(p.coords[k])));
        }
        worst = std::max(worst, err);
    }
    return scalar_report("embedding_roundtrip", worst, worst, cfg.tol.representation,
                         {{"chart", std::string(to_string(chart))}, {"samples", std::int64_t{1000}}});
}

ResidualReport complex_constraint(const SuiteConfig& cfg) {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
        for (int j = 0; j < 50; ++j) {
            ComplexHoroPair c = complexify(3.0 * i / 49.0, 2.0 * pi * j / 50.0);
            c.r = cfg.perturb(c.r);
            worst = std::max({worst, constraint_residual(c), unit_modulus_residual(c)});
        }
    }
    return scalar_report("complex_constraint", worst, worst, cfg.tol.exact,
                         {{"grid", std::string("50x50")}});
}

// ---- plane waves -------------------------------------------------------

WaveFunction perturbed_plane_wave(Family f, int o, double eps, Branch b, const SuiteConfig& cfg) {
    WaveFunction w = make_plane_wave(f, o, eps, b);
    if (cfg.perturbation != 0.0) {
        WaveFunction p = make_plane_wave_with_alpha(f, o, cfg.perturb(w.alpha), eps);
        p.branch = b;
        return p;
    }
    return w;
}

ResidualReport schrodinger_check(Family f, int o, Branch b, double eps, const SuiteConfig& cfg) {
    const WaveFunction w = perturbed_plane_wave(f, o, eps, b, cfg);
    const ChartId chart = chart_of(f);
    ResidualReport r = schrodinger_residual(chart, w, eps, cfg.grid(chart), cfg.hamiltonian_step,
                                            cfg.tol.residual);
    r.params["dispersion_residual"] = dispersion_residual(f, w.alpha, eps);
    return r;
}

void fold_fitted_error(ResidualReport& r, complex expected) {
    const double err = std::abs(*r.fitted_eigenvalue - expected);
    r.params["operator_residual"] = r.relative_residual;
    r.params["fitted_error"] = err;
    r.relative_residual = std::max(r.relative_residual, err);
    r.finalize();
}

ResidualReport p3_check(Family f, int o, Branch b, double eps, const SuiteConfig& cfg) {
    const complex alpha = alpha_from_epsilon(f, eps, b);
    const complex expected = -I * static_cast<double>(o) * alpha;
    const WaveFunction w = perturbed_plane_wave(f, o, eps, b, cfg);
    const ChartId chart = chart_of(f);
    OperatorSpec op;
    op.kind = OperatorKind::p3;
    op.chart = chart;
    op.step = cfg.first_order_step;
    ResidualReport r = eigen_residual(chart, op, w, expected, cfg.grid(chart),
                                      cfg.first_order_step, cfg.tol.eigen);
    fold_fitted_error(r, expected);
    return r;
}

ResidualReport generator_check(Space space, const Eigen::Vector3d& n, Branch b, double eps,
                               const SuiteConfig& cfg) {
    const QPlaneWave reference = make_q_plane_wave(space, n, eps, b);
    const QPlaneWave w = make_q_plane_wave(space, n, cfg.perturb(eps), b);
    ResidualReport r = eigen_residual(OperatorSpec::momentum(n, cfg.first_order_step),
                                      w.evaluator, reference.momentum_eigenvalue,
                                      default_q_grid(space), cfg.first_order_step,
                                      cfg.tol.generator);
    fold_fitted_error(r, reference.momentum_eigenvalue);
    r.params["space"] = std::string(to_string(space));
    r.params["alpha_re"] = reference.alpha.real();
    r.params["alpha_im"] = reference.alpha.imag();
    r.params["epsilon"] = eps;
    r.params["branch"] = std::string(to_string(b));
    return r;
}

// ---- Lie algebra -------------------------------------------------------

std::vector<fd::ScalarField> lie_test_functions() {
    using P = std::array<double, 3>;
    return {
        [](const P& q) {
            return complex(std::exp(-(q[0] * q[0] + q[1] * q[1] + q[2] * q[2])) *
                           (1.0 + q[0] * q[2]));
        },
        [](const P& q) { return std::exp(complex(0.3 * q[0] - 0.2 * q[2], q[1] + 0.5 * q[2])); },
        [](const P& q) { return complex(std::sin(q[0] + 2.0 * q[1] - q[2]), q[0] * q[1]); },
        [](const P& q) { return complex(1.0 / (2.0 + 0.3 * q[0] + 0.5 * q[1] + 0.7 * q[2])); },
    };
}

std::vector<QPoint> lie_points(Space space, int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    std::vector<QPoint> out;
    for (int i = 0; i < count; ++i) {
        const double a = u(rng), b = u(rng), c = u(rng);
        out.push_back({a, b, c, space});
    }
    return out;
}

OperatorCombination combination(const std::array<complex, 6>& c, double step) {
    const auto basis = generator_basis(step);
    OperatorCombination out;
    for (std::size_t k = 0; k < 6; ++k) out.emplace_back(c[k], basis[k]);
    return out;
}

ResidualReport lie_closure(Space space, const SuiteConfig& cfg) {
    const double h = cfg.commutator_step;
    const auto tests = lie_test_functions();
    const auto fit_points = lie_points(space, 4, cfg.seed);
    const auto verify_points = lie_points(space, 10, cfg.seed + 7);
    const auto basis = generator_basis(h);
    double worst = 0.0, worst_fit = 0.0;
    Params params;
    for (std::size_t i = 0; i < 6; ++i) {
        for (std::size_t j = i + 1; j < 6; ++j) {
            const StructureFit fit =
                fit_structure_constants(basis[i], basis[j], tests, fit_points, {}, h);
            std::array<complex, 6> c = fit.coefficients;
            for (complex& v : c) v = cfg.perturbation != 0.0 ? cfg.perturb(v) : v;
            const OperatorCombination expected = combination(c, h);
            for (const QPoint& q : verify_points) {
                for (const auto& f : tests) {
                    worst = std::max(worst,
                                     commutator_residual(basis[i], basis[j], expected, f, q, h));
                }
            }
            worst_fit = std::max(worst_fit, fit.fit_residual);
        }
    }
    params["space"] = std::string(to_string(space));
    params["pairs"] = std::int64_t{15};
    params["fit_residual"] = worst_fit;
    params["step"] = h;
    return scalar_report("lie_closure", worst, worst, cfg.tol.commutator, std::move(params));
}

ResidualReport lie_sign_flip(const SuiteConfig& cfg) {
    const double h = cfg.commutator_step;
    const auto tests = lie_test_functions();
    const auto basis = generator_basis(h);
    double worst = 0.0;
    Params params;
    for (Space space : {Space::hyperbolic, Space::spherical}) {
        const StructureFit fit = fit_structure_constants(
            basis[0], basis[1], tests, lie_points(space, 4, cfg.seed), {}, h);
        std::array<complex, 6> c = fit.coefficients;
        for (complex& v : c) v = cfg.perturbation != 0.0 ? cfg.perturb(v) : v;
        // [P1, P2] = -i L3 on H3 and +i L3 on S3.
        const complex target = space == Space::hyperbolic ? -I : I;
        worst = std::max(worst, std::abs(c[5] - target));
        for (std::size_t k = 0; k < 5; ++k) worst = std::max(worst, std::abs(c[k]));
        const std::string key = space == Space::hyperbolic ? "h3" : "s3";
        params[key + "_l3_re"] = c[5].real();
        params[key + "_l3_im"] = c[5].imag();
    }
    return scalar_report("lie_sign_flip", worst, worst, cfg.tol.commutator, std::move(params));
}

// ---- separated solutions ----------------------------------------------

ResidualReport reduction_report(const SpectralSolution& s, const SuiteConfig& cfg,
                                Params params) {
    const std::optional<WaveFunction> w = reduce_to_plane_wave(s);
    if (!w) {
        params["error"] = std::string("no plane-wave reduction");
        return scalar_report("sov_reduction", inf, inf, cfg.tol.representation, std::move(params));
    }
    const GridSpec grid = cfg.grid(s.chart);
    double diff = 0.0, scale = 0.0;
    for (const ChartPoint& p : grid.points()) {
        const complex sv = s.evaluate(p.coords);
        diff = std::max(diff, std::abs(w->at(p.coords) - sv));
        scale = std::max(scale, std::abs(sv));
    }
    const Family family = s.space == Space::hyperbolic ? Family::h3_cyl_plane : Family::s3_cyl_plane;
    const double alpha_err = std::abs(w->alpha - alpha_from_epsilon(family, s.epsilon, *w->branch));
    params["alpha_pw_re"] = w->alpha.real();
    params["alpha_pw_im"] = w->alpha.imag();
    params["orientation"] = static_cast<std::int64_t>(w->orientation);
    params["branch"] = std::string(to_string(*w->branch));
    params["alpha_error"] = alpha_err;
    ResidualReport r = scalar_report("sov_reduction", diff, std::max(diff / scale, alpha_err),
                                     cfg.tol.representation, std::move(params));
    r.grid = grid;
    return r;
}

ResidualReport h3_reduction(double eps, bool a_zero, int sign_b, const SuiteConfig& cfg) {
    const complex k = I * std::sqrt(2.0 * eps - 1.0) / 2.0;
    const complex b = a_zero ? -0.5 - k : -0.5 + k;
    const complex alpha = static_cast<double>(sign_b) * 2.0 * b;
    const SpectralSolution s =
        make_sov_solution(Space::hyperbolic, 0, alpha, cfg.perturb(eps), 1, sign_b);
    return reduction_report(s, cfg,
                            {{"space", std::string("h3")},
                             {"epsilon", eps},
                             {"vanishing", std::string(a_zero ? "A" : "B")},
                             {"sign_b", static_cast<std::int64_t>(sign_b)}});
}

ResidualReport s3_reduction(int n, bool a_zero, int alpha_sign, const SuiteConfig& cfg) {
    // A = 0: b = n - 1 >= 0; B = 0: b = -(n + 1).
    const int b = a_zero ? n - 1 : -(n + 1);
    const int sign_b = b < 0 ? -1 : 1;
    const double alpha = static_cast<double>(alpha_sign * std::abs(b));
    const SpectralSolution s =
        make_sov_solution(Space::spherical, 0, alpha, cfg.perturb(level(n)), 1, sign_b);
    return reduction_report(s, cfg,
                            {{"space", std::string("s3")},
                             {"n", static_cast<std::int64_t>(n)},
                             {"vanishing", std::string(a_zero ? "A" : "B")},
                             {"alpha", alpha}});
}

ResidualReport s3_sov_hamiltonian(int m, int al, int n, const SuiteConfig& cfg) {
    const int big_n = m + al + 1 + 2 * n;
    const double eps = level(big_n);
    const SpectralSolution s = make_sov_solution(Space::spherical, m, al, eps, 1, 1);
    ResidualReport r =
        schrodinger_residual(ChartId::s3_cylindrical, sov_wave(s), cfg.perturb(eps),
                             cfg.grid(ChartId::s3_cylindrical), cfg.hamiltonian_step, cfg.tol.residual);
    r.params["m"] = static_cast<std::int64_t>(m);
    r.params["n"] = static_cast<std::int64_t>(n);
    r.params["N"] = static_cast<std::int64_t>(big_n);
    return r;
}

SpectralSolution h3_terminating(int m, int n, double eps) {
    const double a = std::abs(m) / 2.0;
    const complex k = I * std::sqrt(2.0 * eps - 1.0) / 2.0;
    const complex b = -static_cast<double>(n) - a - 0.5 - k;
    return make_sov_solution(Space::hyperbolic, m, 2.0 * b, eps, 1, 1);
}

ResidualReport h3_sov_hamiltonian(int m, int n, const SuiteConfig& cfg) {
    const double eps = 1.0;
    const SpectralSolution s = h3_terminating(m, n, eps);
    ResidualReport r =
        schrodinger_residual(ChartId::h3_cylindrical, sov_wave(s), cfg.perturb(eps),
                             cfg.grid(ChartId::h3_cylindrical), cfg.hamiltonian_step, cfg.tol.residual);
    r.params["m"] = static_cast<std::int64_t>(m);
    r.params["n"] = static_cast<std::int64_t>(n);
    r.params["degree"] = static_cast<std::int64_t>(terminating_degree(s.hyp).value_or(-1));
    return r;
}

struct SovTriple {
    int m, alpha, n;
};

const std::array<SovTriple, 10> radial_ode_cases{{{0, 0, 0}, {0, 0, 1}, {1, 0, 1}, {0, 1, 1},
                                                  {1, 1, 1}, {2, 0, 2}, {0, 2, 2}, {2, 2, 1},
                                                  {3, 1, 2}, {1, 3, 3}}};

ResidualReport s3_radial_ode(const SuiteConfig& cfg) {
    double worst = 0.0, worst_abs = 0.0;
    for (const SovTriple& t : radial_ode_cases) {
        const double eps = level(t.m + t.alpha + 1 + 2 * t.n);
        const SpectralSolution s = make_sov_solution(Space::spherical, t.m, t.alpha, eps, 1, 1);
        const RadialFunction radial = [&s](double x) { return s.radial(x); };
        double res = 0.0, scale = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double rho = 0.05 + (pi / 2.0 - 0.1) * i / 49.0;
            res = std::max(res, std::abs(radial_ode_residual(Space::spherical, t.m, t.alpha,
                                                             cfg.perturb(eps), radial, rho)));
            scale = std::max(scale, std::abs(radial(rho)));
        }
        worst_abs = std::max(worst_abs, res);
        worst = std::max(worst, res / scale);
    }
    return scalar_report("s3_radial_ode", worst_abs, worst, cfg.tol.residual,
                         {{"solutions", std::int64_t{10}}, {"points", std::int64_t{50}}});
}

// ---- complex-chart representations ------------------------------------

ResidualReport representation_check(VariableSet vs, int o, Branch b, const SuiteConfig& cfg) {
    const double eps = 4.0;
    const WaveFunction native = make_plane_wave(Family::s3_complex_plane, o, eps, b);
    const WaveFunction alt =
        alternate_representation(perturbed_plane_wave(Family::s3_complex_plane, o, eps, b, cfg), vs);
    std::mt19937_64 rng(cfg.seed + 3);
    double diff = 0.0, scale = 0.0;
    for (int i = 0; i < 50; ++i) {
        const ChartPoint p = random_point(ChartId::s3_complex_horospherical, rng);
        const complex v = native(p);
        diff = std::max(diff, std::abs(alt(p) - v));
        scale = std::max(scale, std::abs(v));
    }
    ResidualReport r = scalar_report("representation", diff, diff / scale, cfg.tol.representation,
                                     {{"variables", std::string(to_string(vs))},
                                      {"orientation", static_cast<std::int64_t>(o)},
                                      {"branch", std::string(to_string(b))},
                                      {"alpha_re", native.alpha.real()},
                                      {"epsilon", eps}});
    return r;
}

ResidualReport hamiltonian_form_check(HamiltonianForm form, int o, Branch b, const SuiteConfig& cfg) {
    const double eps = 4.0;
    const WaveFunction w = make_plane_wave(Family::s3_complex_plane, o, eps, b);
    const WaveFunction wp = perturbed_plane_wave(Family::s3_complex_plane, o, eps, b, cfg);
    std::mt19937_64 rng(cfg.seed + 5);
    double diff = 0.0, scale = 0.0;
    const ChartId chart = ChartId::s3_complex_horospherical;
    for (int i = 0; i < 50; ++i) {
        const ChartPoint p = random_point(chart, rng);
        const complex h_ab = apply_hamiltonian(chart, w.evaluator, p, cfg.hamiltonian_step);
        const complex h_form =
            apply_hamiltonian(chart, wp.evaluator, p, cfg.hamiltonian_step, form);
        diff = std::max(diff, std::abs(h_ab - h_form));
        scale = std::max(scale, std::abs(w(p)));
    }
    return scalar_report("hamiltonian_forms", diff, diff / scale, cfg.tol.variable_set,
                         {{"form", std::string(form == HamiltonianForm::z_zstar ? "z_zstar" : "r_rstar")},
                          {"orientation", static_cast<std::int64_t>(o)},
                          {"branch", std::string(to_string(b))},
                          {"epsilon", eps}});
}

// ---- spectrum ----------------------------------------------------------

ResidualReport plane_quantization(Family f, const SuiteConfig& cfg) {
    double worst = 0.0;
    for (const QuantizedLevel& q : quantize_s3(f, 10)) {
        const std::int64_t n = q.n;
        if (q.twice_epsilon != n * n - 1) worst = std::max(worst, 1.0);
        for (int al : {q.alpha_plus, q.alpha_minus}) {
            // alpha^2 + 2 alpha - 2 eps = 0 in integers
            if (static_cast<std::int64_t>(al) * al + 2 * al - q.twice_epsilon != 0) {
                worst = std::max(worst, 1.0);
            }
        }
        const double eps = cfg.perturb(q.epsilon);
        worst = std::max(worst, std::abs(alpha_from_epsilon(f, eps, Branch::plus) -
                                         static_cast<double>(q.alpha_plus)));
        worst = std::max(worst, std::abs(alpha_from_epsilon(f, eps, Branch::minus) -
                                         static_cast<double>(q.alpha_minus)));
    }
    // The ground state is the constant 1.
    const WaveFunction ground = make_plane_wave(f, 1, cfg.perturb(0.0), Branch::plus);
    for (const ChartPoint& p : default_grid(chart_of(f), 6).points()) {
        worst = std::max(worst, std::abs(ground(p) - 1.0));
    }
    return scalar_report("quantization", worst, worst, cfg.tol.exact,
                         {{"family", std::string(to_string(f))}, {"n_max", std::int64_t{10}}});
}

ResidualReport sov_quantization(const SuiteConfig& cfg) {
    double worst = 0.0;
    for (const QuantizedLevel& q : quantize_s3(Family::s3_sov, 3)) {
        if (q.big_n != q.m + q.alpha_abs + 1 + 2 * q.n) worst = std::max(worst, 1.0);
        if (q.twice_epsilon != static_cast<std::int64_t>(q.big_n) * q.big_n - 1) worst = 1.0;
        const SpectralSolution s = make_sov_solution(Space::spherical, q.m, q.alpha_abs,
                                                     cfg.perturb(q.epsilon), 1, 1);
        worst = std::max(worst, std::abs(s.hyp.A + static_cast<double>(q.n)));
    }
    return scalar_report("quantization", worst, worst, cfg.tol.exact,
                         {{"family", std::string("s3_sov")}, {"n_max", std::int64_t{3}}});
}

ResidualReport classification_audit(Family f, const SuiteConfig& cfg) {
    std::int64_t disagreements = 0, total = 0;
    const RejectReason expected_reason = f == Family::s3_cyl_plane
                                             ? RejectReason::diverges_at_rho_pi_2
                                             : RejectReason::growth_at_a_infinity;
    for (const QuantizedLevel& q : quantize_s3(f, 10)) {
        for (Branch b : {Branch::plus, Branch::minus}) {
            for (int o : {-1, 1}) {
                const WaveFunction w = perturbed_plane_wave(f, o, q.epsilon, b, cfg);
                const Classification c = classify_physical(w);
                const bool want_physical = b == Branch::plus;  // alpha = n - 1 >= 0
                const bool ok = want_physical
                                    ? c.verdict == Verdict::physical && c.reason == RejectReason::ok
                                    : c.verdict == Verdict::rejected && c.reason == expected_reason;
                disagreements += ok ? 0 : 1;
                ++total;
            }
        }
    }
    const double d = static_cast<double>(disagreements);
    return scalar_report("classification", d, d, 0.0,
                         {{"family", std::string(to_string(f))},
                          {"solutions", total},
                          {"disagreements", disagreements}});
}

ResidualReport flat_limit_check(Family f, const SuiteConfig& cfg) {
    const double target = cfg.perturb(std::sqrt(2.0));
    const double e3 = std::abs(flat_limit_eigenvalue(f, 1.0, 1.0, 1e3) - target);
    const double e6 = std::abs(flat_limit_eigenvalue(f, 1.0, 1.0, 1e6) - target);
    const double ratio = e3 / e6;
    const double dev = std::abs(ratio / 1e3 - 1.0);
    return scalar_report("flat_limit", dev, dev, cfg.tol.flat_limit,
                         {{"space", std::string(to_string(space_of(f)))},
                          {"error_rho_1e3", e3},
                          {"error_rho_1e6", e6},
                          {"ratio", ratio}});
}

// ---- special functions -------------------------------------------------

complex random_complex(std::mt19937_64& rng, double re, double im) {
    std::uniform_real_distribution<double> ur(-re, re), ui(-im, im);
    const double x = ur(rng);
    return {x, ui(rng)};
}

complex safe_c(std::mt19937_64& rng) {
    for (;;) {
        const complex c = random_complex(rng, 3.0, 1.0);
        bool ok = true;
        for (int k = 0; k <= 12; ++k) ok = ok && std::abs(c + static_cast<double>(k)) > 0.2;
        if (ok) return c;
    }
}

ResidualReport specfun_zero_a(const SuiteConfig& cfg) {
    std::mt19937_64 rng(cfg.seed + 11);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const complex b = random_complex(rng, 3.0, 1.0), c = safe_c(rng);
        const complex x = random_complex(rng, 0.7, 0.7);
        const double a = cfg.perturbation != 0.0 ? cfg.perturb(0.0) : 0.0;
        worst = std::max(worst, std::abs(hyp2f1({a, b, c}, x) - 1.0));
    }
    return scalar_report("hyp2f1_zero_a", worst, worst, 0.0, {{"draws", std::int64_t{100}}});
}

ResidualReport specfun_polynomial(const SuiteConfig& cfg) {
    std::mt19937_64 rng(cfg.seed + 13);
    double worst = 0.0;
    for (int n = 0; n <= 10; ++n) {
        for (int i = 0; i < 10; ++i) {
            const complex b = random_complex(rng, 3.0, 1.0), c = safe_c(rng);
            const complex x = random_complex(rng, 1.5, 1.5);
            const complex value = hyp2f1({-static_cast<double>(n), b, c}, x);
            const complex bp = cfg.perturbation != 0.0 ? cfg.perturb(b) : b;
            complex brute{};
            double magnitude = 0.0;
            double factorial = 1.0;
            for (int k = 0; k <= n; ++k) {
                if (k > 0) factorial *= k;
                const complex term = pochhammer(-static_cast<double>(n), k) * pochhammer(bp, k) /
                                     pochhammer(c, k) * std::pow(x, k) / factorial;
                brute += term;
                magnitude += std::abs(term);
            }
            worst = std::max(worst, std::abs(value - brute) / magnitude);
        }
    }
    return scalar_report("hyp2f1_polynomial", worst, worst, cfg.tol.polynomial,
                         {{"draws", std::int64_t{110}}, {"norm", std::string("sum_abs_terms")}});
}

ResidualReport specfun_contiguity(const SuiteConfig& cfg) {
    std::mt19937_64 rng(cfg.seed + 17);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const complex a = random_complex(rng, 2.0, 1.0), b = random_complex(rng, 2.0, 1.0);
        const complex c = safe_c(rng);
        complex x = random_complex(rng, 0.5, 0.5);
        if (std::abs(x) > 0.5) x *= 0.5 / std::abs(x);
        const complex cp = cfg.perturbation != 0.0 ? cfg.perturb(c) : c;
        const complex t1 = c * (1.0 - x) * hyp2f1({a, b, c}, x);
        const complex t2 = c * hyp2f1({a - 1.0, b, c}, x);
        const complex t3 = (c - b) * x * hyp2f1({a, b, cp + 1.0}, x);
        const double scale = std::max({std::abs(t1), std::abs(t2), std::abs(t3)});
        worst = std::max(worst, std::abs(t1 - t2 + t3) / scale);
    }
    return scalar_report("hyp2f1_contiguity", worst, worst, cfg.tol.contiguity,
                         {{"draws", std::int64_t{100}}});
}

// ---- convergence -------------------------------------------------------

ResidualReport richardson_check(Family f, const SuiteConfig& cfg) {
    const double eps = space_of(f) == Space::hyperbolic ? 1.0 : 4.0;
    const WaveFunction w = perturbed_plane_wave(f, 1, eps, Branch::plus, cfg);
    const ChartId chart = chart_of(f);
    GridSpec grid = default_grid(chart, 5);
    switch (chart) {
        case ChartId::h3_cylindrical: grid.axes[0] = {0.5, 2.0, 5}; break;
        case ChartId::s3_cylindrical: grid.axes[0] = {0.5, pi / 2.0 - 0.5, 5}; break;
        case ChartId::h3_horospherical:
            grid.axes[0] = {0.5, 2.0, 5};
            grid.axes[2] = {-1.0, 0.0, 5};
            break;
        case ChartId::s3_complex_horospherical: grid.axes[0] = {0.5, 1.5, 5}; break;
    }
    grid.margin = 0.5;
    const double coarse = 0.04;
    auto residual = [&](double h) {
        double res = 0.0, scale = 0.0;
        for (const ChartPoint& p : grid.points()) {
            const complex v = w.at(p.coords);
            res = std::max(res, std::abs(apply_hamiltonian_order4(chart, w.evaluator, p, h) - eps * v));
            scale = std::max(scale, std::abs(v));
        }
        return res / scale;
    };
    const double r1 = residual(coarse);
    const double r2 = residual(coarse / 2.0);
    const double ratio = r1 / r2;
    // Order 4 gives 16x per halving; 8x is required.
    ResidualReport r = scalar_report("richardson_convergence", 8.0 / ratio, 8.0 / ratio, 1.0,
                                     {{"family", std::string(to_string(f))},
                                      {"residual_coarse", r1},
                                      {"residual_fine", r2},
                                      {"ratio", ratio},
                                      {"step", coarse}});
    r.grid = grid;
    return r;
}

// ---- registry ----------------------------------------------------------

std::vector<CheckEntry> build_registry() {
    std::vector<CheckEntry> reg;
    auto add = [&reg](std::string name, std::optional<ChartId> chart, std::optional<Family> family,
                      std::function<ResidualReport(const SuiteConfig&)> run) {
        reg.push_back({std::move(name), chart, family, std::move(run)});
    };
    const ChartId cplx = ChartId::s3_complex_horospherical;

    for (ChartId c : all_charts) {
        add("metric/pullback/" + std::string(to_string(c)), c, std::nullopt,
            [c](const SuiteConfig& cfg) {
                return metric_consistency(c, 100, cfg.seed, cfg.tol.metric, cfg.perturb(1.0));
            });
    }
    for (VariableSet vs : {VariableSet::z_zstar, VariableSet::r_rstar}) {
        add("metric/variables/" + std::string(to_string(vs)), cplx, std::nullopt,
            [vs](const SuiteConfig& cfg) {
                return variable_set_consistency(vs, 100, cfg.seed, cfg.tol.variable_set,
                                                cfg.perturb(1.0));
            });
    }
    for (ChartId c : all_charts) {
        add("geometry/embed_constraint/" + std::string(to_string(c)), c, std::nullopt,
            [c](const SuiteConfig& cfg) { return embedding_constraint(c, cfg); });
        add("geometry/roundtrip/" + std::string(to_string(c)), c, std::nullopt,
            [c](const SuiteConfig& cfg) { return embedding_roundtrip(c, cfg); });
    }
    add("geometry/complex_constraint", cplx, std::nullopt, complex_constraint);

    for (const PlaneWaveKey& k : plane_wave_registry()) {
        for (double eps : plane_epsilons(k.family)) {
            add("schrodinger/" + std::string(to_string(k.family)) + "/o" + sign(k.orientation) +
                    "/b" + std::string(to_string(k.branch)) + "/eps=" + num(eps),
                chart_of(k.family), k.family, [k, eps](const SuiteConfig& cfg) {
                    return schrodinger_check(k.family, k.orientation, k.branch, eps, cfg);
                });
        }
    }
    for (const PlaneWaveKey& k : plane_wave_registry()) {
        if (k.family == Family::s3_cyl_plane) continue;
        for (double eps : plane_epsilons(k.family)) {
            add("p3/" + std::string(to_string(k.family)) + "/o" + sign(k.orientation) + "/b" +
                    std::string(to_string(k.branch)) + "/eps=" + num(eps),
                chart_of(k.family), k.family, [k, eps](const SuiteConfig& cfg) {
                    return p3_check(k.family, k.orientation, k.branch, eps, cfg);
                });
        }
    }
    const std::array<std::pair<std::string, Eigen::Vector3d>, 2> directions{
        {{"e3", Eigen::Vector3d(0.0, 0.0, 1.0)}, {"n", Eigen::Vector3d(2.0, -1.0, 2.0) / 3.0}}};
    for (Space space : {Space::hyperbolic, Space::spherical}) {
        const Family f = space == Space::hyperbolic ? Family::h3_cyl_plane : Family::s3_cyl_plane;
        for (const auto& [label, n] : directions) {
            for (Branch b : {Branch::plus, Branch::minus}) {
                for (double eps : plane_epsilons(f)) {
                    add("generator/" + std::string(to_string(space)) + "/" + label + "/b" +
                            std::string(to_string(b)) + "/eps=" + num(eps),
                        std::nullopt, std::nullopt, [space, n = n, b, eps](const SuiteConfig& cfg) {
                            return generator_check(space, n, b, eps, cfg);
                        });
                }
            }
        }
    }
    for (Space space : {Space::hyperbolic, Space::spherical}) {
        add("lie/closure/" + std::string(to_string(space)), std::nullopt, std::nullopt,
            [space](const SuiteConfig& cfg) { return lie_closure(space, cfg); });
    }
    add("lie/sign_flip", std::nullopt, std::nullopt, lie_sign_flip);

    const ChartId hcyl = ChartId::h3_cylindrical, scyl = ChartId::s3_cylindrical;
    for (double eps : plane_epsilons(Family::h3_cyl_plane)) {
        for (bool a_zero : {true, false}) {
            for (int sb : {1, -1}) {
                add("sov/reduction/h3/eps=" + num(eps) + "/" + (a_zero ? "A" : "B") + "/s" + sign(sb),
                    hcyl, Family::h3_sov, [eps, a_zero, sb](const SuiteConfig& cfg) {
                        return h3_reduction(eps, a_zero, sb, cfg);
                    });
            }
        }
    }
    for (int n : {1, 2, 3, 5}) {
        for (bool a_zero : {true, false}) {
            for (int as : {1, -1}) {
                add("sov/reduction/s3/n=" + std::to_string(n) + "/" + (a_zero ? "A" : "B") +
                        "/alpha" + sign(as),
                    scyl, Family::s3_sov,
                    [n, a_zero, as](const SuiteConfig& cfg) { return s3_reduction(n, a_zero, as, cfg); });
            }
        }
    }
    for (const SovTriple t : std::array<SovTriple, 6>{
             {{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {2, 1, 2}, {0, 2, 3}, {3, 3, 3}}}) {
        add("sov/hamiltonian/s3/m=" + std::to_string(t.m) + "/alpha=" + std::to_string(t.alpha) +
                "/n=" + std::to_string(t.n),
            scyl, Family::s3_sov,
            [t](const SuiteConfig& cfg) { return s3_sov_hamiltonian(t.m, t.alpha, t.n, cfg); });
    }
    for (const auto& [m, n] : std::array<std::pair<int, int>, 3>{{{0, 1}, {1, 1}, {2, 2}}}) {
        add("sov/hamiltonian/h3/m=" + std::to_string(m) + "/n=" + std::to_string(n), hcyl,
            Family::h3_sov,
            [m = m, n = n](const SuiteConfig& cfg) { return h3_sov_hamiltonian(m, n, cfg); });
    }
    add("sov/radial_ode/s3", scyl, Family::s3_sov, s3_radial_ode);

    for (VariableSet vs : {VariableSet::z_zstar, VariableSet::r_rstar}) {
        for (int o : {-1, 1}) {
            for (Branch b : {Branch::plus, Branch::minus}) {
                add("representation/" + std::string(to_string(vs)) + "/o" + sign(o) + "/b" +
                        std::string(to_string(b)),
                    cplx, Family::s3_complex_plane,
                    [vs, o, b](const SuiteConfig& cfg) { return representation_check(vs, o, b, cfg); });
            }
        }
    }
    for (HamiltonianForm form : {HamiltonianForm::z_zstar, HamiltonianForm::r_rstar}) {
        for (int o : {-1, 1}) {
            for (Branch b : {Branch::plus, Branch::minus}) {
                add(std::string("hamiltonian_forms/") +
                        (form == HamiltonianForm::z_zstar ? "z_zstar" : "r_rstar") + "/o" + sign(o) +
                        "/b" + std::string(to_string(b)),
                    cplx, Family::s3_complex_plane, [form, o, b](const SuiteConfig& cfg) {
                        return hamiltonian_form_check(form, o, b, cfg);
                    });
            }
        }
    }
    for (Family f : {Family::s3_cyl_plane, Family::s3_complex_plane}) {
        add("quantization/" + std::string(to_string(f)), chart_of(f), f,
            [f](const SuiteConfig& cfg) { return plane_quantization(f, cfg); });
    }
    add("quantization/s3_sov", scyl, Family::s3_sov, sov_quantization);
    for (Family f : {Family::s3_cyl_plane, Family::s3_complex_plane}) {
        add("classification/" + std::string(to_string(f)), chart_of(f), f,
            [f](const SuiteConfig& cfg) { return classification_audit(f, cfg); });
    }
    for (Family f : {Family::h3_cyl_plane, Family::s3_cyl_plane}) {
        add("flat_limit/" + std::string(to_string(space_of(f))), std::nullopt, std::nullopt,
            [f](const SuiteConfig& cfg) { return flat_limit_check(f, cfg); });
    }
    add("specfun/hyp2f1_zero_a", std::nullopt, std::nullopt, specfun_zero_a);
    add("specfun/hyp2f1_polynomial", std::nullopt, std::nullopt, specfun_polynomial);
    add("specfun/hyp2f1_contiguity", std::nullopt, std::nullopt, specfun_contiguity);
    for (Family f : plane_families) {
        add("convergence/richardson/" + std::string(to_string(f)), chart_of(f), f,
            [f](const SuiteConfig& cfg) { return richardson_check(f, cfg); });
    }
    return reg;
}

// ---- config ------------------------------------------------------------

class ConfigReader {
public:
    explicit ConfigReader(std::string path) : path_(std::move(path)) {}

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        throw ConfigError(path_, field, what);
    }

    const json& object(const json& j, const std::string& field) const {
        if (!j.is_object()) fail(field, "expected an object");
        return j;
    }

    void known_keys(const json& j, const std::string& field,
                    std::initializer_list<std::string_view> keys) const {
        for (const auto& [k, v] : j.items()) {
            if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
                fail(field + "/" + k, "unknown key");
            }
        }
    }

    double number(const json& j, const std::string& field) const {
        if (!j.is_number()) fail(field, "expected a number");
        return j.get<double>();
    }

    double positive(const json& j, const std::string& field) const {
        const double v = number(j, field);
        if (!(v > 0.0)) fail(field, "must be positive");
        return v;
    }

    std::int64_t integer(const json& j, const std::string& field) const {
        if (!j.is_number_integer()) fail(field, "expected an integer");
        return j.get<std::int64_t>();
    }

    std::string string(const json& j, const std::string& field) const {
        if (!j.is_string()) fail(field, "expected a string");
        return j.get<std::string>();
    }

    ChartId chart(const json& j, const std::string& field) const {
        const auto c = parse_chart(string(j, field));
        if (!c) fail(field, "unknown chart '" + j.get<std::string>() + "'");
        return *c;
    }

private:
    std::string path_;
};

void read_tolerances(const ConfigReader& rd, const json& j, Tolerances& t) {
    rd.object(j, "/tolerances");
    rd.known_keys(j, "/tolerances",
                  {"residual", "eigen", "generator", "commutator", "metric", "variable_set",
                   "exact", "representation", "polynomial", "contiguity", "flat_limit"});
    const std::array<std::pair<const char*, double*>, 11> fields{{{"residual", &t.residual},
                                                                  {"eigen", &t.eigen},
                                                                  {"generator", &t.generator},
                                                                  {"commutator", &t.commutator},
                                                                  {"metric", &t.metric},
                                                                  {"variable_set", &t.variable_set},
                                                                  {"exact", &t.exact},
                                                                  {"representation", &t.representation},
                                                                  {"polynomial", &t.polynomial},
                                                                  {"contiguity", &t.contiguity},
                                                                  {"flat_limit", &t.flat_limit}}};
    for (const auto& [key, target] : fields) {
        if (j.contains(key)) {
            const double v = rd.number(j[key], std::string("/tolerances/") + key);
            if (v < 0.0) rd.fail(std::string("/tolerances/") + key, "must be non-negative");
            *target = v;
        }
    }
}

GridSpec read_grid_override(const ConfigReader& rd, const json& j, const std::string& field,
                            ChartId chart, int count) {
    rd.object(j, field);
    rd.known_keys(j, field, {"axes", "margin"});
    GridSpec g = default_grid(chart, count);
    if (j.contains("margin")) g.margin = rd.positive(j["margin"], field + "/margin");
    if (j.contains("axes")) {
        const json& axes = j["axes"];
        if (!axes.is_array() || axes.size() != 3) rd.fail(field + "/axes", "expected 3 axes");
        for (std::size_t i = 0; i < 3; ++i) {
            const std::string f = field + "/axes/" + std::to_string(i);
            const json& ax = axes[i];
            if (!ax.is_array() || ax.size() != 3) rd.fail(f, "expected [min, max, count]");
            g.axes[i].min = rd.number(ax[0], f + "/0");
            g.axes[i].max = rd.number(ax[1], f + "/1");
            const std::int64_t c = rd.integer(ax[2], f + "/2");
            if (c < 2 || c > 1000) rd.fail(f + "/2", "count must lie in [2, 1000]");
            g.axes[i].count = static_cast<int>(c);
        }
    }
    return g;
}

}  // namespace

GridSpec SuiteConfig::grid(ChartId chart) const {
    const auto it = grid_overrides.find(chart);
    if (it != grid_overrides.end()) return it->second;
    return default_grid(chart, grid_count);
}

SuiteConfig parse_config(std::string_view json_text, const std::string& path) {
    const ConfigReader rd(path);
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path, "/", std::string("malformed JSON: ") + e.what());
    }
    rd.object(root, "/");
    rd.known_keys(root, "",
                  {"charts", "families", "tolerances", "grid", "seed", "steps", "perturbation",
                   "threads", "output"});
    SuiteConfig cfg;
    if (root.contains("charts")) {
        const json& c = root["charts"];
        if (!c.is_array()) rd.fail("/charts", "expected an array of chart names");
        for (std::size_t i = 0; i < c.size(); ++i) {
            cfg.charts.push_back(rd.chart(c[i], "/charts/" + std::to_string(i)));
        }
    }
    if (root.contains("families")) {
        const json& f = root["families"];
        if (!f.is_array()) rd.fail("/families", "expected an array of family names");
        for (std::size_t i = 0; i < f.size(); ++i) {
            const std::string field = "/families/" + std::to_string(i);
            const auto fam = parse_family(rd.string(f[i], field));
            if (!fam) rd.fail(field, "unknown family '" + f[i].get<std::string>() + "'");
            cfg.families.push_back(*fam);
        }
    }
    if (root.contains("tolerances")) read_tolerances(rd, root["tolerances"], cfg.tol);
    if (root.contains("grid")) {
        const json& g = rd.object(root["grid"], "/grid");
        rd.known_keys(g, "/grid", {"count", "charts"});
        if (g.contains("count")) {
            const std::int64_t c = rd.integer(g["count"], "/grid/count");
            if (c < 2 || c > 1000) rd.fail("/grid/count", "count must lie in [2, 1000]");
            cfg.grid_count = static_cast<int>(c);
        }
        if (g.contains("charts")) {
            const json& charts = rd.object(g["charts"], "/grid/charts");
            for (const auto& [name, spec] : charts.items()) {
                const std::string field = "/grid/charts/" + name;
                const auto chart = parse_chart(name);
                if (!chart) rd.fail(field, "unknown chart");
                cfg.grid_overrides[*chart] =
                    read_grid_override(rd, spec, field, *chart, cfg.grid_count);
            }
        }
    }
    if (root.contains("seed")) {
        const std::int64_t s = rd.integer(root["seed"], "/seed");
        if (s < 0) rd.fail("/seed", "must be non-negative");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    if (root.contains("steps")) {
        const json& s = rd.object(root["steps"], "/steps");
        rd.known_keys(s, "/steps", {"hamiltonian", "first_order", "commutator"});
        if (s.contains("hamiltonian")) cfg.hamiltonian_step = rd.positive(s["hamiltonian"], "/steps/hamiltonian");
        if (s.contains("first_order")) cfg.first_order_step = rd.positive(s["first_order"], "/steps/first_order");
        if (s.contains("commutator")) cfg.commutator_step = rd.positive(s["commutator"], "/steps/commutator");
    }
    if (root.contains("perturbation")) {
        cfg.perturbation = rd.number(root["perturbation"], "/perturbation");
        if (cfg.perturbation < 0.0 || cfg.perturbation > 1.0) rd.fail("/perturbation", "must lie in [0, 1]");
    }
    if (root.contains("threads")) {
        const std::int64_t t = rd.integer(root["threads"], "/threads");
        if (t < 0 || t > 1024) rd.fail("/threads", "must lie in [0, 1024]");
        cfg.threads = static_cast<unsigned>(t);
    }
    if (root.contains("output")) {
        const json& o = rd.object(root["output"], "/output");
        rd.known_keys(o, "/output", {"json", "csv"});
        if (o.contains("json")) cfg.json_output = rd.string(o["json"], "/output/json");
        if (o.contains("csv")) cfg.csv_output = rd.string(o["csv"], "/output/csv");
    }
    return cfg;
}

SuiteConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "/", "cannot open configuration file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

const std::vector<CheckEntry>& check_registry() {
    static const std::vector<CheckEntry> registry = build_registry();
    return registry;
}

std::vector<const CheckEntry*> selected_checks(const SuiteConfig& config) {
    std::vector<const CheckEntry*> out;
    for (const CheckEntry& e : check_registry()) {
        if (!config.charts.empty() &&
            (!e.chart || std::find(config.charts.begin(), config.charts.end(), *e.chart) ==
                             config.charts.end())) {
            continue;
        }
        if (!config.families.empty() &&
            (!e.family || std::find(config.families.begin(), config.families.end(), *e.family) ==
                              config.families.end())) {
            continue;
        }
        out.push_back(&e);
    }
    return out;
}

std::vector<ResidualReport> run_suite(const SuiteConfig& config) {
    const std::vector<const CheckEntry*> checks = selected_checks(config);
    std::vector<ResidualReport> reports(checks.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < checks.size(); i = next++) {
            const CheckEntry& e = *checks[i];
            ResidualReport r;
            try {
                r = e.run(config);
            } catch (const std::exception& ex) {
                r = scalar_report(e.name, inf, inf, 0.0, {{"error", std::string(ex.what())}});
            }
            r.name = e.name;
            if (e.chart) r.params.emplace("chart", std::string(to_string(*e.chart)));
            reports[i] = std::move(r);
        }
    };
    unsigned threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(checks.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();
    return reports;
}

SuiteSummary summarize(const std::vector<ResidualReport>& reports) {
    SuiteSummary s;
    s.total = reports.size();
    for (const ResidualReport& r : reports) {
        if (r.pass) {
            ++s.passed;
        } else {
            ++s.failed;
            s.failures.push_back(r.name);
        }
    }
    return s;
}

}  // namespace curvedwave
