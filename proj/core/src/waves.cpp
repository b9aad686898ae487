#include "curvedwave/waves.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "curvedwave/errors.hpp"

namespace curvedwave {

namespace {

constexpr complex I{0.0, 1.0};
constexpr double pi = std::numbers::pi;
constexpr double zero_tol = 1e-12;

bool is_integer(complex v, double tol = 1e-12) {
    return std::abs(v.imag()) <= tol && std::abs(v.real() - std::round(v.real())) <= tol;
}

void require_orientation(int orientation) {
    if (orientation != 1 && orientation != -1) {
        throw DomainError("orientation must be +1 or -1, got " + std::to_string(orientation));
    }
}

fd::ScalarField plane_evaluator(Family family, int sigma, complex alpha) {
    const double s = sigma;
    switch (family) {
        case Family::h3_cyl_plane:
            return [alpha, s](const std::array<double, 3>& x) {
                return principal_power(std::cosh(x[0]), alpha) * std::exp(s * alpha * x[2]);
            };
        case Family::s3_cyl_plane:
            return [alpha, s](const std::array<double, 3>& x) {
                return principal_power(std::cos(x[0]), alpha) * std::exp(I * s * alpha * x[2]);
            };
        case Family::h3_horo_plane:
            if (sigma < 0) {
                return [alpha](const std::array<double, 3>& x) {
                    return std::exp(-alpha * x[2]);
                };
            }
            return [alpha](const std::array<double, 3>& x) {
                const double r = x[0], z = x[2];
                return principal_power(std::exp(z) + r * r * std::exp(-z), alpha);
            };
        case Family::s3_complex_plane:
            // orientation -1: e^{-alpha z}; +1: e^{-alpha z*}, z = a + ib.
            return [alpha, s](const std::array<double, 3>& x) {
                return std::exp(-alpha * complex(x[0], -s * x[1]));
            };
        case Family::h3_sov:
        case Family::s3_sov: break;
    }
    throw DomainError("not a plane-wave family: " + std::string(to_string(family)));
}

Family sov_family(Space space) { return space == Space::hyperbolic ? Family::h3_sov : Family::s3_sov; }

}  // namespace

std::string_view to_string(Family family) {
    switch (family) {
        case Family::h3_cyl_plane: return "h3_cyl_plane";
        case Family::s3_cyl_plane: return "s3_cyl_plane";
        case Family::h3_horo_plane: return "h3_horo_plane";
        case Family::s3_complex_plane: return "s3_complex_plane";
        case Family::h3_sov: return "h3_sov";
        case Family::s3_sov: return "s3_sov";
    }
    return "unknown";
}

std::string_view to_string(Branch branch) { return branch == Branch::plus ? "+" : "-"; }

std::optional<Family> parse_family(std::string_view name) {
    for (Family f : {Family::h3_cyl_plane, Family::s3_cyl_plane, Family::h3_horo_plane,
                     Family::s3_complex_plane, Family::h3_sov, Family::s3_sov}) {
        if (to_string(f) == name) return f;
    }
    return std::nullopt;
}

Space space_of(Family family) {
    switch (family) {
        case Family::h3_cyl_plane:
        case Family::h3_horo_plane:
        case Family::h3_sov: return Space::hyperbolic;
        default: return Space::spherical;
    }
}

ChartId chart_of(Family family) {
    switch (family) {
        case Family::h3_cyl_plane:
        case Family::h3_sov: return ChartId::h3_cylindrical;
        case Family::s3_cyl_plane:
        case Family::s3_sov: return ChartId::s3_cylindrical;
        case Family::h3_horo_plane: return ChartId::h3_horospherical;
        case Family::s3_complex_plane: return ChartId::s3_complex_horospherical;
    }
    return ChartId::h3_cylindrical;
}

bool is_plane(Family family) { return family != Family::h3_sov && family != Family::s3_sov; }

complex WaveFunction::operator()(const ChartPoint& p) const {
    if (p.chart != chart) {
        throw DomainError("wave " + std::string(to_string(family)) + " lives on " +
                          std::string(to_string(chart)) + ", not " +
                          std::string(to_string(p.chart)));
    }
    validate(p);
    return evaluator(p.coords);
}

complex alpha_from_epsilon(Family family, double epsilon, Branch branch) {
    const double sign = branch == Branch::plus ? 1.0 : -1.0;
    if (!std::isfinite(epsilon)) throw DomainError("alpha_from_epsilon: epsilon is not finite");
    if (space_of(family) == Space::hyperbolic) {
        if (epsilon < 0.5) {
            throw DomainError("alpha_from_epsilon: epsilon = " + std::to_string(epsilon) +
                              " is below the H3 minimum 1/2");
        }
        return complex(-1.0, sign * std::sqrt(2.0 * epsilon - 1.0));
    }
    if (epsilon < 0.0) {
        throw DomainError("alpha_from_epsilon: epsilon = " + std::to_string(epsilon) +
                          " is below the S3 minimum 0");
    }
    return complex(-1.0 + sign * std::sqrt(2.0 * epsilon + 1.0), 0.0);
}

double dispersion_residual(Family family, complex alpha, double epsilon) {
    const double s = space_of(family) == Space::hyperbolic ? 2.0 : -2.0;
    return std::abs(alpha * alpha + 2.0 * alpha + s * epsilon);
}

WaveFunction make_plane_wave_with_alpha(Family family, int orientation, complex alpha,
                                        double epsilon) {
    require_orientation(orientation);
    WaveFunction w;
    w.family = family;
    w.chart = chart_of(family);
    w.orientation = orientation;
    w.alpha = alpha;
    w.epsilon = epsilon;
    w.evaluator = plane_evaluator(family, orientation, alpha);
    return w;
}

WaveFunction make_plane_wave(Family family, int orientation, double epsilon, Branch branch) {
    if (!is_plane(family)) {
        throw DomainError("make_plane_wave: " + std::string(to_string(family)) +
                          " is not a plane-wave family");
    }
    WaveFunction w =
        make_plane_wave_with_alpha(family, orientation, alpha_from_epsilon(family, epsilon, branch),
                                   epsilon);
    w.branch = branch;
    return w;
}

QPlaneWave make_q_plane_wave(Space space, const Eigen::Vector3d& n, double epsilon,
                             Branch branch) {
    if (std::abs(n.norm() - 1.0) > 1e-14) {
        throw DomainError("make_q_plane_wave: n is not a unit vector");
    }
    QPlaneWave w;
    w.space = space;
    w.n = n;
    w.epsilon = epsilon;
    w.branch = branch;
    const Family family = space == Space::hyperbolic ? Family::h3_cyl_plane : Family::s3_cyl_plane;
    const complex alpha = alpha_from_epsilon(family, epsilon, branch);
    w.alpha = alpha;
    if (space == Space::hyperbolic) {
        w.momentum_eigenvalue = -I * alpha;
        w.evaluator = [alpha, n](const std::array<double, 3>& q) {
            const Eigen::Vector3d v(q[0], q[1], q[2]);
            return principal_power(1.0 - v.squaredNorm(), -alpha / 2.0) *
                   principal_power(1.0 + n.dot(v), alpha);
        };
    } else {
        w.momentum_eigenvalue = alpha;
        w.evaluator = [alpha, n](const std::array<double, 3>& q) {
            const Eigen::Vector3d v(q[0], q[1], q[2]);
            return principal_power(1.0 + v.squaredNorm(), -alpha / 2.0) *
                   principal_power(complex(1.0, n.dot(v)), alpha);
        };
    }
    return w;
}

WaveFunction alternate_representation(const WaveFunction& w, VariableSet variables) {
    if (w.family != Family::s3_complex_plane) {
        throw DomainError("alternate_representation: only s3_complex_plane waves have "
                          "alternate variable sets");
    }
    WaveFunction out = w;
    const complex alpha = w.alpha;
    const int sigma = w.orientation;
    switch (variables) {
        case VariableSet::a_b:
        case VariableSet::chart_real:
            out.representation = "native";
            out.evaluator = plane_evaluator(w.family, sigma, alpha);
            return out;
        case VariableSet::z_zstar:
            out.representation = "z_zstar";
            if (sigma < 0) {
                out.evaluator = [alpha](const std::array<double, 3>& x) {
                    return std::exp(-alpha * complex(x[0], x[1]));
                };
            } else {
                out.evaluator = [alpha](const std::array<double, 3>& x) {
                    const ComplexHoroPair p = complexify(x[0], x[1]);
                    return principal_power(std::exp(p.z) + p.r * p.r * std::exp(-p.z), alpha);
                };
            }
            return out;
        case VariableSet::r_rstar:
            out.representation = "r_rstar";
            out.evaluator = [alpha, sigma](const std::array<double, 3>& x) {
                if (!(x[0] > 0.0)) {
                    throw DomainError("alternate_representation: r*/r is indeterminate at a = 0");
                }
                const complex r = complexify(x[0], x[1]).r;
                const double rr = std::norm(r);
                const double root = std::sqrt(rr * (1.0 + rr));
                // Branch of sqrt(-r*/r) fixed as i r*/|r|.
                const complex base = sigma < 0 ? I * std::conj(r) / root : -I * r / root;
                return principal_power(base, alpha);
            };
            return out;
    }
    throw DomainError("alternate_representation: unknown variable set");
}

SpectralSolution make_sov_solution(Space space, int m, complex alpha, double epsilon,
                                   int sign_a, int sign_b) {
    require_orientation(sign_a);
    require_orientation(sign_b);
    SpectralSolution s;
    s.space = space;
    s.m = m;
    s.alpha = alpha;
    s.epsilon = epsilon;
    s.sign_a = sign_a;
    s.sign_b = sign_b;
    const double am = std::abs(static_cast<double>(m));

    if (space == Space::hyperbolic) {
        if (epsilon < 0.5) {
            throw DomainError("make_sov_solution: epsilon = " + std::to_string(epsilon) +
                              " is below the H3 minimum 1/2");
        }
        s.chart = ChartId::h3_cylindrical;
        s.a = sign_a * am / 2.0;
        s.b = static_cast<double>(sign_b) * alpha / 2.0;
        const complex k = I * std::sqrt(2.0 * epsilon - 1.0) / 2.0;
        s.hyp = {s.a + s.b + 0.5 + k, s.a + s.b + 0.5 - k, 2.0 * s.b + 1.0};
    } else {
        if (epsilon < 0.0) {
            throw DomainError("make_sov_solution: epsilon = " + std::to_string(epsilon) +
                              " is below the S3 minimum 0");
        }
        if (!is_integer(alpha)) {
            throw DomainError("make_sov_solution: S3 requires an integer alpha for a "
                              "single-valued solution");
        }
        s.chart = ChartId::s3_cylindrical;
        s.a = sign_a * am;
        s.b = sign_b * std::abs(std::round(alpha.real()));
        const double root = std::sqrt(2.0 * epsilon + 1.0);
        s.hyp = {(s.a + s.b + 1.0 - root) / 2.0, (s.a + s.b + 1.0 + root) / 2.0, s.b + 1.0};
    }

    const std::optional<int> degree = terminating_degree(s.hyp);
    const complex c = s.hyp.C;
    if (is_integer(c) && c.real() <= 0.5) {
        const int reach = static_cast<int>(-std::round(c.real()));
        if (!degree || *degree > reach) {
            throw DomainError("make_sov_solution: C = " + std::to_string(c.real()) +
                              " is a non-positive integer and the series reaches it");
        }
    }
    s.ode_verified_only = space == Space::hyperbolic && !degree;
    return s;
}

complex SpectralSolution::radial(double x) const {
    if (ode_verified_only) {
        throw DomainError("SpectralSolution: series argument ch^2 r lies outside the unit disk "
                          "and does not terminate");
    }
    if (space == Space::hyperbolic) {
        const double sh = std::sinh(x), ch = std::cosh(x);
        return principal_power(sh * sh, a) * principal_power(ch * ch, b) *
               hyp2f1(hyp, ch * ch);
    }
    const double c = std::cos(x);
    return principal_power(std::sin(x), a) * principal_power(c, b) * hyp2f1(hyp, c * c);
}

complex SpectralSolution::evaluate(const std::array<double, 3>& x) const {
    const complex angular = std::exp(I * static_cast<double>(m) * x[1]);
    const complex along = space == Space::hyperbolic ? std::exp(alpha * x[2])
                                                     : std::exp(I * alpha * x[2]);
    return angular * along * radial(x[0]);
}

WaveFunction sov_wave(const SpectralSolution& s) {
    WaveFunction w;
    w.family = sov_family(s.space);
    w.chart = s.chart;
    w.alpha = s.alpha;
    w.epsilon = s.epsilon;
    w.m = s.m;
    w.evaluator = [s](const std::array<double, 3>& x) { return s.evaluate(x); };
    return w;
}

std::optional<WaveFunction> reduce_to_plane_wave(const SpectralSolution& s) {
    if (s.m != 0) return std::nullopt;
    const bool a_zero = std::abs(s.hyp.A) <= zero_tol;
    const bool b_zero = std::abs(s.hyp.B) <= zero_tol;
    if (!a_zero && !b_zero) return std::nullopt;

    const Family family =
        s.space == Space::hyperbolic ? Family::h3_cyl_plane : Family::s3_cyl_plane;
    // The radial factor collapses to ch^{2b} r or cos^b rho.
    const complex alpha_pw = s.space == Space::hyperbolic ? 2.0 * s.b : s.b;
    int orientation = 1;
    if (std::abs(alpha_pw) > zero_tol) {
        const complex ratio = s.alpha / alpha_pw;
        orientation = ratio.real() > 0.0 ? 1 : -1;
        if (std::abs(ratio - static_cast<double>(orientation)) > 1e-10) return std::nullopt;
    }
    for (Branch br : {Branch::plus, Branch::minus}) {
        complex root;
        try {
            root = alpha_from_epsilon(family, s.epsilon, br);
        } catch (const DomainError&) {
            return std::nullopt;
        }
        if (std::abs(root - alpha_pw) <= 1e-10) {
            WaveFunction w = make_plane_wave(family, orientation, s.epsilon, br);
            return w;
        }
    }
    return std::nullopt;
}

std::vector<QuantizedLevel> quantize_s3(Family family, int n_max) {
    if (n_max < 1) throw DomainError("quantize_s3: n_max must be >= 1");
    std::vector<QuantizedLevel> out;
    if (family == Family::s3_cyl_plane || family == Family::s3_complex_plane) {
        for (int n = 1; n <= n_max; ++n) {
            QuantizedLevel q;
            q.family = family;
            q.n = n;
            q.big_n = n;
            q.twice_epsilon = static_cast<std::int64_t>(n) * n - 1;
            q.epsilon = static_cast<double>(q.twice_epsilon) / 2.0;
            q.alpha_plus = n - 1;
            q.alpha_minus = -1 - n;
            out.push_back(q);
        }
        return out;
    }
    if (family == Family::s3_sov) {
        for (int m = 0; m <= 3; ++m) {
            for (int al = 0; al <= 3; ++al) {
                for (int n = 0; n <= n_max; ++n) {
                    QuantizedLevel q;
                    q.family = family;
                    q.n = n;
                    q.m = m;
                    q.alpha_abs = al;
                    q.big_n = m + al + 1 + 2 * n;
                    q.twice_epsilon = static_cast<std::int64_t>(q.big_n) * q.big_n - 1;
                    q.epsilon = static_cast<double>(q.twice_epsilon) / 2.0;
                    q.alpha_plus = al;
                    q.alpha_minus = -al;
                    out.push_back(q);
                }
            }
        }
        return out;
    }
    throw DomainError("quantize_s3: " + std::string(to_string(family)) +
                      " has a continuous spectrum");
}

std::string_view to_string(Verdict verdict) {
    return verdict == Verdict::physical ? "physical" : "rejected";
}

std::string_view to_string(RejectReason reason) {
    switch (reason) {
        case RejectReason::ok: return "ok";
        case RejectReason::diverges_at_rho_pi_2: return "diverges_at_rho_pi_2";
        case RejectReason::diverges_at_rho_0: return "diverges_at_rho_0";
        case RejectReason::nonperiodic_b: return "nonperiodic_b";
        case RejectReason::nonperiodic_z: return "nonperiodic_z";
        case RejectReason::growth_at_a_infinity: return "growth_at_a_infinity";
    }
    return "unknown";
}

namespace {

bool differs(complex u, complex v) {
    const double scale = std::max({std::abs(u), std::abs(v), 1e-300});
    return std::abs(u - v) / scale > periodicity_threshold;
}

Classification rejected(RejectReason reason, std::string note) {
    return {Verdict::rejected, reason, std::move(note)};
}

std::string growth_note(const WaveFunction& w) {
    const double re = w.alpha.real();
    switch (w.family) {
        case Family::h3_cyl_plane:
            return "|psi| = ch^" + std::to_string(re) + " r exp(" +
                   std::to_string(w.orientation * re) + " z)";
        case Family::h3_horo_plane:
            return w.orientation < 0 ? "|psi| = exp(" + std::to_string(-re) + " z)"
                                     : "|psi| = (e^z + r^2 e^-z)^" + std::to_string(re);
        default: return "separated solution on an open space";
    }
}

}  // namespace

Classification classify_physical(const WaveFunction& w) {
    const double probe = 1e-3;
    switch (w.family) {
        case Family::h3_cyl_plane:
        case Family::h3_horo_plane:
        case Family::h3_sov: return {Verdict::physical, RejectReason::ok, growth_note(w)};
        case Family::s3_cyl_plane: {
            const complex edge = w.at({pi / 2.0 - probe, 0.0, 0.3});
            if (std::abs(edge) > divergence_threshold) {
                return rejected(RejectReason::diverges_at_rho_pi_2,
                                "|psi(rho = pi/2 - 1e-3)| = " + std::to_string(std::abs(edge)));
            }
            if (differs(w.at({0.7, 0.4, -pi + 0.3}), w.at({0.7, 0.4, pi + 0.3}))) {
                return rejected(RejectReason::nonperiodic_z, "psi(z + 2 pi) != psi(z)");
            }
            return {Verdict::physical, RejectReason::ok, "bounded and periodic"};
        }
        case Family::s3_complex_plane: {
            const complex far = w.at({30.0, 0.3, 0.2});
            if (std::abs(far) > divergence_threshold) {
                return rejected(RejectReason::growth_at_a_infinity,
                                "|psi(a = 30)| = " + std::to_string(std::abs(far)));
            }
            if (differs(w.at({0.5, 0.3, 0.2}), w.at({0.5, 0.3 + 2.0 * pi, 0.2}))) {
                return rejected(RejectReason::nonperiodic_b, "psi(b + 2 pi) != psi(b)");
            }
            return {Verdict::physical, RejectReason::ok, "bounded and periodic"};
        }
        case Family::s3_sov: {
            // Negative exponents of sin or cos can be as small as 1, so the
            // probes sit much closer to the singular circles.
            const double close = 1e-7;
            complex edge, axis;
            try {
                axis = w.at({close, 0.0, 0.3});
            } catch (const DomainError&) {
                return rejected(RejectReason::diverges_at_rho_0,
                                "hypergeometric series does not converge at rho -> 0");
            }
            if (std::abs(axis) > divergence_threshold) {
                return rejected(RejectReason::diverges_at_rho_0,
                                "|psi(rho = 1e-7)| = " + std::to_string(std::abs(axis)));
            }
            edge = w.at({pi / 2.0 - close, 0.0, 0.3});
            if (std::abs(edge) > divergence_threshold) {
                return rejected(RejectReason::diverges_at_rho_pi_2,
                                "|psi(rho = pi/2 - 1e-7)| = " + std::to_string(std::abs(edge)));
            }
            return {Verdict::physical, RejectReason::ok, "bounded and periodic"};
        }
    }
    return {};
}

Classification classify_physical(const SpectralSolution& s) {
    if (s.space == Space::spherical && !terminating_degree(s.hyp)) {
        return rejected(RejectReason::diverges_at_rho_0,
                        "non-terminating series is singular at cos^2 rho = 1");
    }
    return classify_physical(sov_wave(s));
}

complex flat_limit_eigenvalue(Family family, double energy, double mass, double rho_curv,
                              Branch branch) {
    if (!(rho_curv > 0.0) || !(energy > 0.0) || !(mass > 0.0)) {
        throw DomainError("flat_limit_eigenvalue: E, M and rho must be positive");
    }
    const double sign = branch == Branch::plus ? 1.0 : -1.0;
    const double two_em = 2.0 * energy * mass;
    const double inv = 1.0 / rho_curv;
    if (space_of(family) == Space::spherical) {
        return -inv + sign * std::sqrt(two_em + inv * inv);
    }
    if (two_em * rho_curv * rho_curv < 1.0) {
        throw DomainError("flat_limit_eigenvalue: 2EM rho^2 = " +
                          std::to_string(two_em * rho_curv * rho_curv) +
                          " is below the H3 minimum 1");
    }
    return complex(sign * std::sqrt(std::max(two_em - inv * inv, 0.0)), inv);
}

std::vector<CatalogEntry> solution_catalog(Family family, int n_max) {
    std::vector<CatalogEntry> out;
    for (const QuantizedLevel& q : quantize_s3(family, n_max)) {
        if (family == Family::s3_sov) {
            const SpectralSolution s =
                make_sov_solution(Space::spherical, q.m, q.alpha_abs, q.epsilon, 1, 1);
            out.push_back({family, 0, std::nullopt, s.alpha, q.epsilon, q, classify_physical(s)});
            continue;
        }
        for (Branch b : {Branch::plus, Branch::minus}) {
            for (int o : {-1, 1}) {
                const WaveFunction w = make_plane_wave(family, o, q.epsilon, b);
                out.push_back({family, o, b, w.alpha, q.epsilon, q, classify_physical(w)});
            }
        }
    }
    return out;
}

std::vector<PlaneWaveKey> plane_wave_registry() {
    std::vector<PlaneWaveKey> out;
    for (Family f : plane_families) {
        for (int o : {-1, 1}) {
            for (Branch b : {Branch::plus, Branch::minus}) out.push_back({f, o, b});
        }
    }
    return out;
}

}  // namespace curvedwave
