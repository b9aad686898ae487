#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "curvedwave/finite_difference.hpp"
#include "curvedwave/geometry.hpp"
#include "curvedwave/specfun.hpp"

namespace curvedwave {

enum class Family { h3_cyl_plane, s3_cyl_plane, h3_horo_plane, s3_complex_plane, h3_sov, s3_sov };

inline constexpr std::array<Family, 4> plane_families{
    Family::h3_cyl_plane, Family::s3_cyl_plane, Family::h3_horo_plane, Family::s3_complex_plane};

/// Root selector of the dispersion quadratic: plus takes the + sign in front
/// of the radical, i.e. alpha = -1 + i sqrt(2 eps - 1) on H3 and
/// alpha = -1 + sqrt(2 eps + 1) on S3.
enum class Branch { plus, minus };

std::string_view to_string(Family family);
std::string_view to_string(Branch branch);
std::optional<Family> parse_family(std::string_view name);
Space space_of(Family family);
ChartId chart_of(Family family);
bool is_plane(Family family);

/// Closed-form solution on one chart. The time factor e^{-i eps t} is omitted.
struct WaveFunction {
    Family family{Family::h3_cyl_plane};
    ChartId chart{ChartId::h3_cylindrical};
    /// +1 / -1 for n = (0, 0, +-1); 0 for separated solutions.
    int orientation{0};
    complex alpha;
    double epsilon{0.0};
    std::optional<Branch> branch;
    int m{0};
    /// Variable set the evaluator is written in ("native", "z_zstar", "r_rstar").
    std::string representation{"native"};
    /// Evaluates on raw chart coordinates (no range validation).
    fd::ScalarField evaluator;

    /// Validates that p belongs to this chart and its range, then evaluates.
    complex operator()(const ChartPoint& p) const;
    complex at(const std::array<double, 3>& x) const { return evaluator(x); }
};

/// Plane wave written in q = u / u0 coordinates with a general unit direction n:
/// H3 (1 - q^2)^{-alpha/2} (1 + n.q)^alpha, S3 (1 + q^2)^{-alpha/2} (1 + i n.q)^alpha.
struct QPlaneWave {
    Space space{Space::hyperbolic};
    Eigen::Vector3d n{0.0, 0.0, 1.0};
    complex alpha;
    double epsilon{0.0};
    Branch branch{Branch::plus};
    fd::ScalarField evaluator;
    /// Eigenvalue of P.n: -i alpha on H3, alpha on S3.
    complex momentum_eigenvalue;
};

/// alpha^2 + 2 alpha + 2 eps = 0 on H3; alpha^2 + 2 alpha - 2 eps = 0 on S3.
/// Throws DomainError below the floor (eps >= 1/2 on H3, eps >= 0 on S3).
complex alpha_from_epsilon(Family family, double epsilon, Branch branch);

double dispersion_residual(Family family, complex alpha, double epsilon);

WaveFunction make_plane_wave(Family family, int orientation, double epsilon, Branch branch);

/// Same closed form with an arbitrary alpha and no dispersion check. Used to
/// build deliberately wrong inputs.
WaveFunction make_plane_wave_with_alpha(Family family, int orientation, complex alpha,
                                        double epsilon);

QPlaneWave make_q_plane_wave(Space space, const Eigen::Vector3d& n, double epsilon,
                             Branch branch);

/// Complex-chart plane wave through another variable set:
///   z_zstar: e^{-alpha z} (orientation -1) or (e^z + r^2 e^{-z})^alpha (+1);
///   r_rstar: (i r* / sqrt(r r* (1 + r r*)))^alpha or (-i r / sqrt(...))^alpha.
/// The evaluator throws DomainError at a = 0 where r*/r is indeterminate.
WaveFunction alternate_representation(const WaveFunction& w, VariableSet variables);

struct SpectralSolution {
    Space space{Space::spherical};
    ChartId chart{ChartId::s3_cylindrical};
    int m{0};
    complex alpha;     // z-wavenumber
    complex a;         // exponent of (y - 1) on H3, of sin rho on S3
    complex b;         // exponent of y on H3, of cos rho on S3
    Hyp2F1Params hyp{};
    double epsilon{0.0};
    int sign_a{1};
    int sign_b{1};
    /// Hypergeometric argument outside the unit disk without termination:
    /// only the radial equation can be checked, not point values.
    bool ode_verified_only{false};

    /// Radial factor at r (H3) or rho (S3). Throws DomainError if ode_verified_only.
    complex radial(double x) const;
    /// e^{i m phi} e^{alpha z} G (H3) or e^{i m phi} e^{i alpha z} R (S3).
    complex evaluate(const std::array<double, 3>& x) const;
};

/// H3: a = +-|m|/2, b = +-alpha/2, C = 2b + 1, A, B = a + b + 1/2 +- i sqrt(2 eps - 1)/2,
///     radial factor (y - 1)^a y^b F(A, B, C; y), y = ch^2 r.
/// S3: a = +-|m|, b = +-|alpha|, C = b + 1, A, B = (a + b + 1 -+ sqrt(2 eps + 1))/2,
///     radial factor sin^a cos^b F(A, B, C; cos^2 rho). m and alpha must be integers.
SpectralSolution make_sov_solution(Space space, int m, complex alpha, double epsilon,
                                   int sign_a, int sign_b);

WaveFunction sov_wave(const SpectralSolution& s);

/// When m = 0 and A or B vanishes (to 1e-12), the equivalent cylindrical plane wave.
std::optional<WaveFunction> reduce_to_plane_wave(const SpectralSolution& s);

struct QuantizedLevel {
    Family family{Family::s3_cyl_plane};
    int n{0};
    int m{0};          // SoV only
    int alpha_abs{0};  // SoV only, |alpha|
    int big_n{0};      // sqrt(2 eps + 1)
    std::int64_t twice_epsilon{0};
    double epsilon{0.0};
    int alpha_plus{0};
    int alpha_minus{0};
};

/// Plane families: n = 1..n_max, sqrt(2 eps + 1) = n, alpha = -1 +- n.
/// s3_sov: a = |m|, b = |alpha| for m, |alpha| in [0, 3], n = 0..n_max,
/// N = a + b + 1 + 2n; alpha_plus/minus list +-|alpha|.
std::vector<QuantizedLevel> quantize_s3(Family family, int n_max);

enum class Verdict { physical, rejected };
enum class RejectReason {
    ok,
    diverges_at_rho_pi_2,
    diverges_at_rho_0,
    nonperiodic_b,
    nonperiodic_z,
    growth_at_a_infinity
};

std::string_view to_string(Verdict verdict);
std::string_view to_string(RejectReason reason);

struct Classification {
    Verdict verdict{Verdict::physical};
    RejectReason reason{RejectReason::ok};
    std::string note;
};

inline constexpr double divergence_threshold = 1e6;
inline constexpr double periodicity_threshold = 1e-8;

/// S3 families by probing |psi| at rho = pi/2 - 1e-3 (or a = 30) and comparing
/// values a period apart; H3 families are always physical.
Classification classify_physical(const WaveFunction& w);
Classification classify_physical(const SpectralSolution& s);

/// Dimensionful eigenvalue of P.n at curvature radius rho (hbar = 1):
///   S3: alpha/rho = -1/rho +- sqrt(2EM + 1/rho^2)
///   H3: -i alpha/rho = i/rho +- sqrt(2EM - 1/rho^2), DomainError if 2EM < 1/rho^2.
complex flat_limit_eigenvalue(Family family, double energy, double mass, double rho_curv,
                              Branch branch = Branch::plus);

/// One classified solution of the S3 spectrum.
struct CatalogEntry {
    Family family{Family::s3_cyl_plane};
    int orientation{0};  // 0 for separated solutions
    std::optional<Branch> branch;
    complex alpha;
    double epsilon{0.0};
    QuantizedLevel level;
    Classification classification;
};

/// Every quantized level of `family` up to n_max, classified. Plane families
/// list both orientations and both roots; s3_sov lists the regular
/// (sign_a = sign_b = +1) solution of each level.
std::vector<CatalogEntry> solution_catalog(Family family, int n_max);

struct PlaneWaveKey {
    Family family;
    int orientation;
    Branch branch;
};

/// Every plane-wave family x orientation x branch.
std::vector<PlaneWaveKey> plane_wave_registry();

}  // namespace curvedwave
