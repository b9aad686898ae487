#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "curvedwave/errors.hpp"
#include "curvedwave/verify.hpp"
#include "curvedwave/waves.hpp"
#include "oracles.hpp"

using namespace curvedwave;

namespace {

constexpr double pi = oracle::pi;

std::vector<ChartPoint> sample(ChartId chart, int n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<ChartPoint> out;
    for (int i = 0; i < n; ++i) {
        const double s = u(rng), t = u(rng), v = u(rng);
        switch (chart) {
            case ChartId::h3_cylindrical: out.push_back({chart, {0.1 + 2.5 * s, 2 * pi * t, -2 + 4 * v}}); break;
            case ChartId::s3_cylindrical:
                out.push_back({chart, {0.05 + (pi / 2 - 0.1) * s, 2 * pi * t, -pi + 2 * pi * v}});
                break;
            case ChartId::h3_horospherical: out.push_back({chart, {0.1 + 2.5 * s, 2 * pi * t, -2 + 4 * v}}); break;
            case ChartId::s3_complex_horospherical:
                out.push_back({chart, {0.05 + 2.5 * s, 2 * pi * t, 2 * pi * v}});
                break;
        }
    }
    return out;
}

}  // namespace

TEST(Dispersion, AlphaExamples) {
    EXPECT_EQ(alpha_from_epsilon(Family::s3_cyl_plane, 4.0, Branch::plus), complex(2.0));
    EXPECT_EQ(alpha_from_epsilon(Family::s3_cyl_plane, 4.0, Branch::minus), complex(-4.0));
    EXPECT_EQ(alpha_from_epsilon(Family::s3_complex_plane, 0.0, Branch::plus), complex(0.0));
    EXPECT_EQ(alpha_from_epsilon(Family::h3_cyl_plane, 1.0, Branch::plus), complex(-1.0, 1.0));
    EXPECT_EQ(alpha_from_epsilon(Family::h3_horo_plane, 1.0, Branch::minus), complex(-1.0, -1.0));
    EXPECT_EQ(alpha_from_epsilon(Family::h3_cyl_plane, 0.5, Branch::plus), complex(-1.0));
}

TEST(Dispersion, Floors) {
    EXPECT_THROW(alpha_from_epsilon(Family::h3_cyl_plane, 0.49, Branch::plus), DomainError);
    EXPECT_THROW(alpha_from_epsilon(Family::s3_cyl_plane, -0.01, Branch::plus), DomainError);
}

TEST(Dispersion, ResidualVanishesOnRoots) {
    for (const PlaneWaveKey& k : plane_wave_registry()) {
        for (double eps : {0.5, 1.0, 2.5, 12.0}) {
            const complex a = alpha_from_epsilon(k.family, eps, k.branch);
            EXPECT_LE(dispersion_residual(k.family, a, eps), 1e-12 * std::max(1.0, eps));
        }
    }
}

TEST(Dispersion, HyperbolicBranchesAreConjugate) {
    for (double eps : {0.75, 1.0, 5.0}) {
        for (Family f : {Family::h3_cyl_plane, Family::h3_horo_plane}) {
            EXPECT_EQ(alpha_from_epsilon(f, eps, Branch::plus),
                      std::conj(alpha_from_epsilon(f, eps, Branch::minus)));
        }
    }
}

TEST(PlaneWave, MatchesDirectFormulas) {
    const double eps = 1.0;
    for (int o : {-1, 1}) {
        for (Branch br : {Branch::plus, Branch::minus}) {
            const int sgn = br == Branch::plus ? 1 : -1;
            const WaveFunction hc = make_plane_wave(Family::h3_cyl_plane, o, eps, br);
            for (const ChartPoint& p : sample(ChartId::h3_cylindrical, 20, 1)) {
                const complex want = oracle::h3_cyl_wave(oracle::h3_alpha(eps, sgn), o, p.coords[0], p.coords[2]);
                EXPECT_LE(std::abs(hc(p) - want), 1e-12 * std::abs(want));
            }
            const WaveFunction hh = make_plane_wave(Family::h3_horo_plane, o, eps, br);
            for (const ChartPoint& p : sample(ChartId::h3_horospherical, 20, 2)) {
                const complex want = oracle::h3_horo_wave(oracle::h3_alpha(eps, sgn), o, p.coords[0], p.coords[2]);
                EXPECT_LE(std::abs(hh(p) - want), 1e-12 * std::abs(want));
            }
            const WaveFunction sc = make_plane_wave(Family::s3_cyl_plane, o, eps, br);
            for (const ChartPoint& p : sample(ChartId::s3_cylindrical, 20, 3)) {
                const complex want = oracle::s3_cyl_wave(oracle::s3_alpha(eps, sgn), o, p.coords[0], p.coords[2]);
                EXPECT_LE(std::abs(sc(p) - want), 1e-12 * std::abs(want));
            }
            const WaveFunction sx = make_plane_wave(Family::s3_complex_plane, o, eps, br);
            for (const ChartPoint& p : sample(ChartId::s3_complex_horospherical, 20, 4)) {
                const complex want = oracle::s3_complex_wave(oracle::s3_alpha(eps, sgn), o, p.coords[0], p.coords[1]);
                EXPECT_LE(std::abs(sx(p) - want), 1e-12 * std::abs(want));
            }
        }
    }
}

TEST(PlaneWave, SchrodingerOnEveryKey) {
    for (const PlaneWaveKey& k : plane_wave_registry()) {
        const double eps = 2.5;
        const WaveFunction w = make_plane_wave(k.family, k.orientation, eps, k.branch);
        const ResidualReport r =
            schrodinger_residual(w.chart, w, eps, default_grid(w.chart, 5), default_hamiltonian_step, 1e-6);
        EXPECT_TRUE(r.pass) << to_string(k.family) << " " << k.orientation << " " << r.relative_residual;
    }
}

TEST(PlaneWave, FlippedSignHorosphericalRootFails) {
    // alpha = 1 -+ i sqrt(2 eps - 1) does not solve the horospherical equation.
    const double eps = 1.0;
    for (int o : {-1, 1}) {
        const WaveFunction w = make_plane_wave_with_alpha(Family::h3_horo_plane, o, complex(1.0, -1.0), eps);
        const ResidualReport r =
            schrodinger_residual(w.chart, w, eps, default_grid(w.chart, 5), default_hamiltonian_step, 1e-6);
        EXPECT_FALSE(r.pass);
        EXPECT_GT(r.relative_residual, 0.1);
    }
}

TEST(PlaneWave, Validation) {
    EXPECT_THROW(make_plane_wave(Family::h3_cyl_plane, 0, 1.0, Branch::plus), DomainError);
    EXPECT_THROW(make_plane_wave(Family::s3_sov, 1, 1.0, Branch::plus), DomainError);
    const WaveFunction w = make_plane_wave(Family::s3_cyl_plane, 1, 1.5, Branch::plus);
    EXPECT_THROW(w(ChartPoint{ChartId::h3_cylindrical, {1.0, 0.0, 0.0}}), DomainError);
    EXPECT_THROW(w(ChartPoint{ChartId::s3_cylindrical, {2.0, 0.0, 0.0}}), DomainError);
}

TEST(PlaneWave, IntegerAlphaIsPeriodicInZ) {
    const WaveFunction w = make_plane_wave(Family::s3_cyl_plane, 1, 4.0, Branch::plus);
    for (const ChartPoint& p : sample(ChartId::s3_cylindrical, 10, 5)) {
        EXPECT_LE(std::abs(w.at(p.coords) - w.at({p.coords[0], p.coords[1], p.coords[2] + 2 * pi})), 1e-12);
    }
    const WaveFunction half = make_plane_wave(Family::s3_cyl_plane, 1, 1.0, Branch::plus);
    EXPECT_GT(std::abs(half.at({0.5, 0.0, 0.1}) - half.at({0.5, 0.0, 0.1 + 2 * pi})), 1e-3);
}

TEST(QPlaneWave, EigenvalueConvention) {
    const QPlaneWave h = make_q_plane_wave(Space::hyperbolic, {0.0, 0.0, 1.0}, 1.0, Branch::plus);
    EXPECT_EQ(h.momentum_eigenvalue, complex(0.0, -1.0) * h.alpha);
    const QPlaneWave s = make_q_plane_wave(Space::spherical, {0.0, 0.0, 1.0}, 4.0, Branch::plus);
    EXPECT_EQ(s.momentum_eigenvalue, complex(2.0));
    EXPECT_THROW(make_q_plane_wave(Space::spherical, {1.0, 1.0, 0.0}, 4.0, Branch::plus), DomainError);
}

TEST(QPlaneWave, MatchesCylindricalWaveThroughEmbedding) {
    // Along n = e3 the q-space wave equals (u0 + u3)^alpha.
    const QPlaneWave h = make_q_plane_wave(Space::hyperbolic, {0.0, 0.0, 1.0}, 1.0, Branch::plus);
    for (const ChartPoint& p : sample(ChartId::h3_cylindrical, 10, 6)) {
        const auto u = oracle::h3_cyl(p.coords[0], p.coords[1], p.coords[2]);
        const complex v = h.evaluator({u[1] / u[0], u[2] / u[0], u[3] / u[0]});
        const complex want = std::pow(complex(u[0] + u[3]), h.alpha);
        EXPECT_LE(std::abs(v - want), 1e-10 * std::abs(want));
    }
}

TEST(AlternateRepresentation, AgreesWithNative) {
    for (int o : {-1, 1}) {
        const WaveFunction w = make_plane_wave(Family::s3_complex_plane, o, 4.0, Branch::plus);
        for (VariableSet vs : {VariableSet::z_zstar, VariableSet::r_rstar}) {
            const WaveFunction alt = alternate_representation(w, vs);
            EXPECT_EQ(alt.representation, to_string(vs));
            for (const ChartPoint& p : sample(ChartId::s3_complex_horospherical, 20, 7)) {
                const complex want = w.at(p.coords);
                EXPECT_LE(std::abs(alt.at(p.coords) - want), 1e-10 * std::max(1.0, std::abs(want)))
                    << o << " " << to_string(vs);
            }
        }
    }
}

TEST(AlternateRepresentation, Errors) {
    const WaveFunction w = make_plane_wave(Family::s3_complex_plane, 1, 4.0, Branch::plus);
    const WaveFunction alt = alternate_representation(w, VariableSet::r_rstar);
    EXPECT_THROW(alt.at({0.0, 0.3, 0.0}), DomainError);
    EXPECT_THROW(alternate_representation(make_plane_wave(Family::s3_cyl_plane, 1, 4.0, Branch::plus),
                                          VariableSet::z_zstar),
                 DomainError);
}

TEST(Separated, SphericalParameters) {
    const SpectralSolution s = make_sov_solution(Space::spherical, 1, 2.0, 7.5, 1, 1);
    EXPECT_EQ(s.a, complex(1.0));
    EXPECT_EQ(s.b, complex(2.0));
    EXPECT_EQ(s.hyp.C, complex(3.0));
    EXPECT_LE(std::abs(s.hyp.A), 1e-15);
    EXPECT_LE(std::abs(s.hyp.B - complex(4.0)), 1e-15);
    EXPECT_FALSE(s.ode_verified_only);
    EXPECT_THROW(make_sov_solution(Space::spherical, 0, 1.5, 2.0, 1, 1), DomainError);
    EXPECT_THROW(make_sov_solution(Space::spherical, 0, 1.0, 2.0, 0, 1), DomainError);
}

TEST(Separated, HyperbolicParameters) {
    const complex alpha(0.5, -0.3);
    const double eps = 2.0;
    const SpectralSolution s = make_sov_solution(Space::hyperbolic, 2, alpha, eps, 1, -1);
    EXPECT_EQ(s.a, complex(1.0));
    EXPECT_EQ(s.b, -alpha / 2.0);
    EXPECT_EQ(s.hyp.C, 2.0 * s.b + 1.0);
    EXPECT_LE(std::abs(s.hyp.A + s.hyp.B - (2.0 * (s.a + s.b) + 1.0)), 1e-15);
    EXPECT_LE(std::abs(s.hyp.A - s.hyp.B - complex(0.0, std::sqrt(3.0))), 1e-15);
    EXPECT_TRUE(s.ode_verified_only);
    EXPECT_THROW(s.radial(0.5), DomainError);
}

TEST(Separated, SphericalRadialOde) {
    for (int m : {0, 1, 2}) {
        for (int alpha : {0, 1, 3}) {
            for (int n : {0, 1, 2}) {
                const int N = m + alpha + 1 + 2 * n;
                const double eps = (N * N - 1) / 2.0;
                const SpectralSolution s = make_sov_solution(Space::spherical, m, alpha, eps, 1, 1);
                for (double rho : {0.2, 0.7, 1.2}) {
                    const double res =
                        std::abs(radial_ode_residual(Space::spherical, m, alpha, eps,
                                                     [&](double x) { return s.radial(x); }, rho));
                    EXPECT_LE(res, 1e-6 * std::max(1.0, std::abs(s.radial(rho)) * (1.0 + eps)))
                        << m << " " << alpha << " " << n;
                }
            }
        }
    }
}

TEST(Separated, TerminatingHyperbolicSolution) {
    const double eps = 3.0;
    const int m = 1, n = 1;
    const complex b(-n - 0.5 * m - 0.5, -std::sqrt(2 * eps - 1) / 2);
    const SpectralSolution s = make_sov_solution(Space::hyperbolic, m, 2.0 * b, eps, 1, 1);
    ASSERT_FALSE(s.ode_verified_only);
    for (double r : {0.3, 1.0, 2.0}) {
        const complex g = s.radial(r);
        EXPECT_LE(std::abs(radial_ode_residual(Space::hyperbolic, m, 2.0 * b, eps,
                                               [&](double x) { return s.radial(x); }, r)),
                  1e-6 * std::max(1.0, std::abs(g)));
    }
}

TEST(Separated, NonTerminatingHyperbolicThroughSecondSolution) {
    // Same hypergeometric equation, expanded about y = 1 where |1 - y| < 1.
    const double eps = 2.0;
    const int m = 2;
    const complex alpha(0.4, 0.7);
    const SpectralSolution s = make_sov_solution(Space::hyperbolic, m, alpha, eps, 1, 1);
    ASSERT_TRUE(s.ode_verified_only);
    const Hyp2F1Params second{s.hyp.A, s.hyp.B, s.hyp.A + s.hyp.B - s.hyp.C + 1.0};
    const RadialFunction g = [&](double r) {
        const double sh = std::sinh(r), ch = std::cosh(r);
        return principal_power(sh * sh, s.a) * principal_power(ch * ch, s.b) *
               hyp2f1(second, complex(-sh * sh));
    };
    for (double r : {0.2, 0.5, 0.8}) {
        EXPECT_LE(std::abs(radial_ode_residual(Space::hyperbolic, m, alpha, eps, g, r)),
                  1e-6 * std::max(1.0, std::abs(g(r))))
            << r;
    }
    // A wrong separation constant is detected.
    EXPECT_GT(std::abs(radial_ode_residual(Space::hyperbolic, m, alpha, eps + 0.1, g, 0.5)), 1e-3);
}

TEST(Separated, ReductionToPlaneWave) {
    for (int n : {1, 2, 3}) {
        const double eps = (n * n - 1) / 2.0;
        const SpectralSolution s = make_sov_solution(Space::spherical, 0, n - 1, eps, 1, 1);
        const auto w = reduce_to_plane_wave(s);
        ASSERT_TRUE(w.has_value()) << n;
        EXPECT_EQ(w->family, Family::s3_cyl_plane);
        for (const ChartPoint& p : sample(ChartId::s3_cylindrical, 10, 8)) {
            EXPECT_LE(std::abs(w->at(p.coords) - s.evaluate(p.coords)), 1e-10);
        }
    }
    EXPECT_FALSE(reduce_to_plane_wave(make_sov_solution(Space::spherical, 1, 1.0, 3.5, 1, 1)).has_value());
    EXPECT_FALSE(reduce_to_plane_wave(make_sov_solution(Space::spherical, 0, 1.0, 7.5, 1, 1)).has_value());

    const double eps = 1.0;
    const complex alpha = oracle::h3_alpha(eps, 1);
    const SpectralSolution h = make_sov_solution(Space::hyperbolic, 0, alpha, eps, 1, 1);
    const auto hw = reduce_to_plane_wave(h);
    ASSERT_TRUE(hw.has_value());
    EXPECT_EQ(hw->family, Family::h3_cyl_plane);
    for (const ChartPoint& p : sample(ChartId::h3_cylindrical, 10, 9)) {
        EXPECT_LE(std::abs(hw->at(p.coords) - h.evaluate(p.coords)), 1e-10 * std::abs(hw->at(p.coords)));
    }
}

TEST(Quantization, PlaneLevels) {
    const auto levels = quantize_s3(Family::s3_cyl_plane, 3);
    ASSERT_EQ(levels.size(), 3u);
    const double eps[] = {0.0, 1.5, 4.0};
    const int plus[] = {0, 1, 2}, minus[] = {-2, -3, -4};
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(levels[i].n, static_cast<int>(i) + 1);
        EXPECT_EQ(levels[i].epsilon, eps[i]);
        EXPECT_EQ(levels[i].twice_epsilon, static_cast<std::int64_t>(2 * eps[i]));
        EXPECT_EQ(levels[i].alpha_plus, plus[i]);
        EXPECT_EQ(levels[i].alpha_minus, minus[i]);
    }
    EXPECT_THROW(quantize_s3(Family::h3_cyl_plane, 3), DomainError);
}

TEST(Quantization, SeparatedLevels) {
    const auto levels = quantize_s3(Family::s3_sov, 2);
    EXPECT_EQ(levels.size(), 4u * 4u * 3u);
    for (const QuantizedLevel& l : levels) {
        EXPECT_EQ(l.big_n, l.m + l.alpha_abs + 1 + 2 * l.n);
        EXPECT_EQ(l.twice_epsilon, static_cast<std::int64_t>(l.big_n) * l.big_n - 1);
    }
}

TEST(Classification, SphericalPlaneWaves) {
    const Classification ok = classify_physical(make_plane_wave(Family::s3_cyl_plane, 1, 4.0, Branch::plus));
    EXPECT_EQ(ok.verdict, Verdict::physical);
    const Classification div = classify_physical(make_plane_wave(Family::s3_cyl_plane, 1, 4.0, Branch::minus));
    EXPECT_EQ(div.verdict, Verdict::rejected);
    EXPECT_EQ(div.reason, RejectReason::diverges_at_rho_pi_2);
    const Classification np = classify_physical(make_plane_wave(Family::s3_cyl_plane, -1, 1.0, Branch::plus));
    EXPECT_EQ(np.reason, RejectReason::nonperiodic_z);
    const Classification grow =
        classify_physical(make_plane_wave(Family::s3_complex_plane, 1, 4.0, Branch::minus));
    EXPECT_EQ(grow.reason, RejectReason::growth_at_a_infinity);
    const Classification nb = classify_physical(make_plane_wave(Family::s3_complex_plane, 1, 1.0, Branch::plus));
    EXPECT_EQ(nb.reason, RejectReason::nonperiodic_b);
    EXPECT_EQ(classify_physical(make_plane_wave(Family::s3_complex_plane, -1, 4.0, Branch::plus)).verdict,
              Verdict::physical);
}

TEST(Classification, HyperbolicAlwaysPhysical) {
    for (double eps : {0.5, 1.0, 20.0}) {
        EXPECT_EQ(classify_physical(make_plane_wave(Family::h3_horo_plane, 1, eps, Branch::minus)).verdict,
                  Verdict::physical);
    }
}

TEST(Classification, SeparatedSolutions) {
    EXPECT_EQ(classify_physical(make_sov_solution(Space::spherical, 1, 2.0, 7.5, 1, 1)).verdict,
              Verdict::physical);
    // With a terminating series the negative sin exponent is cancelled:
    // (1 - x)^{|m|} factors out of F and the solution equals the regular one.
    const SpectralSolution neg = make_sov_solution(Space::spherical, 1, 2.0, 7.5, -1, 1);
    const SpectralSolution pos = make_sov_solution(Space::spherical, 1, 2.0, 7.5, 1, 1);
    EXPECT_EQ(classify_physical(neg).verdict, Verdict::physical);
    for (double rho : {0.1, 0.8, 1.4}) EXPECT_LE(std::abs(neg.radial(rho) - pos.radial(rho)), 1e-12);
    // A negative cos exponent makes C a non-positive integer the series reaches.
    EXPECT_THROW(make_sov_solution(Space::spherical, 1, 2.0, 7.5, 1, -1), DomainError);
    EXPECT_EQ(classify_physical(make_sov_solution(Space::spherical, 1, 2.0, 7.0, 1, 1)).reason,
              RejectReason::diverges_at_rho_0);
}

TEST(FlatLimit, ApproachesFlatMomentum) {
    const double e = 2.0, mass = 1.5, k = std::sqrt(2 * e * mass);
    double prev = 1e300;
    for (double rho : {1e2, 1e3, 1e4, 1e5}) {
        const double err_s = std::abs(flat_limit_eigenvalue(Family::s3_cyl_plane, e, mass, rho) - k);
        const double err_h = std::abs(flat_limit_eigenvalue(Family::h3_cyl_plane, e, mass, rho) - k);
        EXPECT_LE(err_s, 2.0 / rho);
        EXPECT_LE(err_h, 2.0 / rho);
        EXPECT_LT(err_s, prev);
        prev = err_s;
    }
    EXPECT_NEAR(std::abs(flat_limit_eigenvalue(Family::s3_cyl_plane, e, mass, 1e6, Branch::minus) + k), 0.0, 1e-5);
    EXPECT_THROW(flat_limit_eigenvalue(Family::h3_cyl_plane, 0.1, 1.0, 1.0), DomainError);
    EXPECT_THROW(flat_limit_eigenvalue(Family::s3_cyl_plane, 1.0, 1.0, 0.0), DomainError);
}

TEST(Registry, CoversFamiliesOrientationsBranches) {
    EXPECT_EQ(plane_wave_registry().size(), 16u);
}

TEST(Names, RoundTrip) {
    for (Family f : {Family::h3_cyl_plane, Family::s3_cyl_plane, Family::h3_horo_plane, Family::s3_complex_plane,
                     Family::h3_sov, Family::s3_sov}) {
        EXPECT_EQ(parse_family(to_string(f)), f);
    }
    EXPECT_FALSE(parse_family("nope").has_value());
}

TEST(Catalog, PlaneTableClassification) {
    const auto entries = solution_catalog(Family::s3_cyl_plane, 10);
    EXPECT_EQ(entries.size(), 40u);
    for (const CatalogEntry& e : entries) {
        const bool plus = e.branch == Branch::plus;
        EXPECT_EQ(e.classification.verdict, plus ? Verdict::physical : Verdict::rejected) << e.level.n;
        EXPECT_EQ(e.alpha.real(), plus ? e.level.alpha_plus : e.level.alpha_minus);
    }
}

TEST(Catalog, SeparatedEntriesArePhysical) {
    for (const CatalogEntry& e : solution_catalog(Family::s3_sov, 3)) {
        EXPECT_EQ(e.classification.verdict, Verdict::physical) << e.level.m << " " << e.level.alpha_abs;
        EXPECT_EQ(e.orientation, 0);
    }
}
