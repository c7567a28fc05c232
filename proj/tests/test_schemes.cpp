#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kdv/errors.hpp"
#include "kdv/oracles.hpp"
#include "kdv/schemes.hpp"
#include "kdv/spectral_ops.hpp"

#include "test_support.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace kdv;
using namespace kdvtest;

namespace {
constexpr double pi = std::numbers::pi;

SchemeConfig config(SchemeKind kind, double tau) {
    SchemeConfig cfg;
    cfg.kind = kind;
    cfg.tau = tau;
    return cfg;
}

/**
 * Brute-force Burgers reference: RK4 on the pseudo-spectral right-hand side
 * (1/2)(u^2)_x with dealiased products, at a step far below the horizon.
 */
Field burgers_rk4(Field u, double T, double dt) {
    auto rhs = [](const Field& w) { return 0.5 * derivative(multiply(w, w, true)); };
    long long steps = std::llround(T / dt);
    for (long long i = 0; i < steps; ++i) {
        Field k1 = rhs(u);
        Field k2 = rhs(u + (dt / 2) * k1);
        Field k3 = rhs(u + (dt / 2) * k2);
        Field k4 = rhs(u + dt * k3);
        u = u + (dt / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return u;
}
} // namespace

TEST_CASE("mean reduction and reconstruction") {
    auto g = SpectralGrid::create(32);
    Field s = sampled(g, [](double x) { return std::sin(x); });

    SUBCASE("trivial splits") {
        auto [f0, c0] = reduce_mean(s);
        CHECK(c0 == doctest::Approx(0.0).epsilon(1e-15));
        CHECK(max_sample_diff(f0, s) < 1e-14);

        auto [f1, c1] = reduce_mean(sampled(g, [](double x) { return 2 + std::sin(x); }));
        CHECK(c1 == doctest::Approx(2.0).epsilon(1e-14));
        CHECK(max_err_vs(f1, [](double x) { return std::sin(x); }) < 1e-13);
    }

    SUBCASE("reduced mean is exactly zero") {
        Field f = reduce_mean(random_field(g, 3)).first;
        CHECK(f.coeffs()[0] == std::complex<double>(0.0, 0.0));
    }

    SUBCASE("reconstruction inverts at t and restores the mass") {
        Field f = random_active(g, 4);
        CHECK(max_sample_diff(reconstruct_mean(f, 0.0, 1.7), f) < 1e-13);

        Field z = sampled(g, [](double) { return 0.0; });
        Field three = reconstruct_mean(z, 3.0, 0.5);
        CHECK(max_err_vs(three, [](double) { return 3.0; }) < 1e-14);

        Field r = reconstruct_mean(f, 1.25, 0.8);
        CHECK(mass(r) == doctest::Approx(mass(f) + 2 * pi * 1.25).epsilon(1e-13));
    }

    SUBCASE("the reconstruction shift direction is the Galilean boost") {
        // Evolve data with mean c two ways: through the reduce/evolve/
        // reconstruct wrapper, and by splitting steps applied directly to the
        // unreduced field (the Burgers and Airy substeps never need the
        // reduction).  Both approximate the same solution to O(tau^2); a wrong
        // shift sign would displace the two by 2cT = O(1).
        Field u0 = sampled(g, [](double x) { return 0.5 + 0.2 * std::sin(x); });
        const double T = 0.5, tau = 1.0 / 512;
        SchemeConfig cfg = config(SchemeKind::strang, tau);

        SolverState viaWrapper = evolve(u0, T, cfg);

        Field direct = u0;
        for (int i = 0; i < 256; ++i) direct = strang_step(direct, i * tau, cfg);

        CHECK(max_sample_diff(viaWrapper.u, direct) < 1e-4);
        CHECK(viaWrapper.mean_offset == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("integrator steps") {
    auto g = SpectralGrid::create(64);
    Field zero = sampled(g, [](double) { return 0.0; });
    Field c = sampled(g, [](double x) { return std::cos(x); });

    SUBCASE("zero is a fixed point of every scheme") {
        for (auto kind : {SchemeKind::lri2, SchemeKind::lri1, SchemeKind::strang})
            CHECK(scheme_step(zero, 0.0, config(kind, 0.1)).max_abs() == 0.0);
    }

    SUBCASE("nonzero mean is refused with advice") {
        Field off = sampled(g, [](double x) { return 0.1 + std::cos(x); });
        CHECK_THROWS_AS(lri2_step(off, 0.0, config(SchemeKind::lri2, 0.1)),
                        NonZeroMeanError);
        CHECK_THROWS_AS(lri1_step(off, 0.0, config(SchemeKind::lri1, 0.1)),
                        NonZeroMeanError);
        CHECK_THROWS_WITH_AS(lri2_step(off, 0.0, config(SchemeKind::lri2, 0.1)),
                             doctest::Contains("reduce_mean"), NonZeroMeanError);
    }

    SUBCASE("lri2 agrees with the pairwise oracle") {
        Field a = lri2_step(c, 0.0, config(SchemeKind::lri2, 0.1));
        Field b = duhamel_oracle_step(c, 0.0, 0.1, OracleOrder::second);
        CHECK(rel_coeff_diff(a, b) < 1e-12);
    }

    SUBCASE("the correction term lri2 - lri1 shrinks at second order") {
        Field u = sampled(g, [](double x) { return std::cos(x) + 0.5 * std::cos(2 * x); });
        auto correction = [&](double tau) {
            Field d = lri2_step(u, 0.0, config(SchemeKind::lri2, tau)) -
                      lri1_step(u, 0.0, config(SchemeKind::lri1, tau));
            return sobolev_norm(d, 0.0);
        };
        double ratio = correction(0.02) / correction(0.01);
        CHECK(ratio > 3.4);
        CHECK(ratio < 4.6);
    }

    SUBCASE("every scheme conserves the mean step by step") {
        Field u = random_zero_mean(g, 17);
        for (auto kind : {SchemeKind::lri2, SchemeKind::lri1}) {
            Field next = scheme_step(u, 0.0, config(kind, 0.01));
            CHECK(std::abs(next.mean() - u.mean()) <= 1e-13 * (1 + u.max_abs()));
            CHECK(next.imag_residue() <= 1e-12 * std::max(1.0, next.max_abs()));
        }
        // the characteristic solve resamples, so strang conserves the mean
        // only to interpolation accuracy on smooth fields
        Field smooth = sampled(g, [](double x) { return 0.3 * std::sin(x); });
        Field next = scheme_step(smooth, 0.0, config(SchemeKind::strang, 0.01));
        CHECK(std::abs(next.mean() - smooth.mean()) <= 1e-10);
        CHECK(next.imag_residue() <= 1e-12);
    }
}

TEST_CASE("burgers characteristics") {
    auto g = SpectralGrid::create(64);

    SUBCASE("zero and constants are exact") {
        Field zero = sampled(g, [](double) { return 0.0; });
        CHECK(burgers_exact_step(zero, 0.1, config(SchemeKind::strang, 0.1)).max_abs() ==
              0.0);

        // constant data rides its own characteristic: value unchanged
        Field c = sampled(g, [](double) { return 0.8; });
        Field out = burgers_exact_step(c, 0.3, config(SchemeKind::strang, 0.3));
        CHECK(max_err_vs(out, [](double) { return 0.8; }) < 1e-13);
    }

    SUBCASE("matches a brute-force time integration") {
        Field u = sampled(g, [](double x) { return 0.1 * std::sin(x); });
        BurgersStats stats;
        Field fast = burgers_exact_step(u, 0.01, config(SchemeKind::strang, 0.01), &stats);
        Field slow = burgers_rk4(u, 0.01, 1e-5);
        CHECK(max_sample_diff(fast, slow) < 1e-9);
        CHECK(stats.max_residual <= 1e-13);
        CHECK(stats.max_iterations >= 1);
    }

    SUBCASE("mass is conserved through the characteristic solve") {
        Field u = sampled(g, [](double x) { return 0.3 * std::sin(x) + 0.1 * std::cos(2 * x); });
        Field out = burgers_exact_step(u, 0.05, config(SchemeKind::strang, 0.05));
        CHECK(std::abs(mass(out) - mass(u)) < 1e-10);
    }

    SUBCASE("crossing characteristics are an error, not an answer") {
        Field s = sampled(g, [](double x) { return std::sin(x); });
        CHECK_THROWS_AS(burgers_exact_step(s, 1.5, config(SchemeKind::strang, 1.5)),
                        CharacteristicCrossingError);
    }

    SUBCASE("an exhausted iteration budget reports the residual") {
        Field s = sampled(g, [](double x) { return std::sin(x); });
        SchemeConfig cfg = config(SchemeKind::strang, 0.5);
        cfg.newton_max_iter = 1;
        try {
            burgers_exact_step(s, 0.5, cfg);
            FAIL("expected NewtonDivergedError");
        } catch (const NewtonDivergedError& e) {
            CHECK(e.residual() > cfg.newton_tol);
            CHECK(e.grid_index() < g->size());
        }
    }
}

TEST_CASE("strang composition") {
    auto g = SpectralGrid::create(64);
    Field u = sampled(g, [](double x) { return 0.5 * std::sin(x) + 0.2 * std::cos(3 * x); });

    SUBCASE("continuity at vanishing step") {
        Field out = strang_step(u, 0.0, config(SchemeKind::strang, 1e-8));
        CHECK(sobolev_norm(out - u, 0.0) <= 1e-6 * sobolev_norm(u, 0.0));
    }

    SUBCASE("second-order self convergence") {
        // the asymptotic regime for this data starts near tau = 2^-7
        const double T = 0.25;
        auto at = [&](double tau) {
            return evolve(u, T, config(SchemeKind::strang, tau)).u;
        };
        Field ref = at(1.0 / 2048);
        double e1 = sobolev_norm(at(1.0 / 128) - ref, 0.0);
        double e2 = sobolev_norm(at(1.0 / 256) - ref, 0.0);
        CHECK(e1 / e2 > 3.0);
        CHECK(e1 / e2 < 5.5);
    }
}

TEST_CASE("evolve drives the step loop") {
    auto g = SpectralGrid::create(64);

    SUBCASE("zero data stays zero, constants stay constant") {
        Field zero = sampled(g, [](double) { return 0.0; });
        for (auto kind : {SchemeKind::lri2, SchemeKind::lri1, SchemeKind::strang})
            CHECK(evolve(zero, 0.5, config(kind, 0.1)).u.max_abs() == 0.0);

        Field c = sampled(g, [](double) { return 1.3; });
        SolverState done = evolve(c, 0.5, config(SchemeKind::lri2, 0.1));
        CHECK(max_err_vs(done.u, [](double) { return 1.3; }) < 1e-14);
    }

    SUBCASE("self convergence at second order") {
        Field c = sampled(g, [](double x) { return std::cos(x); });
        Field coarse = evolve(c, 1.0, config(SchemeKind::lri2, 1e-3)).u;
        Field fine = evolve(c, 1.0, config(SchemeKind::lri2, 1e-4)).u;
        CHECK(sobolev_norm(coarse - fine, 0.0) <= 1e-4);
    }

    SUBCASE("callback sees every reduced in-flight state") {
        Field u0 = sampled(g, [](double x) { return 0.4 + 0.3 * std::sin(x); });
        const double tau = 0.05, T = 0.5;
        long long calls = 0;
        double worst_mean = 0.0, worst_time = 0.0;
        SolverState final = evolve(u0, T, config(SchemeKind::lri2, tau),
                                   [&](const SolverState& s) {
                                       ++calls;
                                       worst_mean = std::max(worst_mean, std::abs(s.u.mean()));
                                       worst_time = std::max(worst_time,
                                                             std::abs(s.t - static_cast<double>(s.step_count) * tau));
                                       CHECK(s.step_count == calls);
                                       CHECK(s.mean_offset == doctest::Approx(0.4).epsilon(1e-13));
                                   });
        CHECK(calls == 10);
        CHECK(worst_mean <= 1e-13);
        CHECK(worst_time == 0.0);
        CHECK(final.t == doctest::Approx(T).epsilon(1e-15));
        CHECK(final.step_count == 10);
        CHECK(final.mean_offset == doctest::Approx(0.4).epsilon(1e-13));
    }

    SUBCASE("step count must come out even") {
        Field c = sampled(g, [](double x) { return std::cos(x); });
        CHECK_THROWS_AS(evolve(c, 1.0, config(SchemeKind::lri2, 0.0003)),
                        NonIntegerStepCountError);
        CHECK_THROWS_WITH_AS(evolve(c, 1.0, config(SchemeKind::lri2, 0.0003)),
                             doctest::Contains("integer"), NonIntegerStepCountError);
        // decimal steps that do divide pass the half-ulp test
        CHECK_NOTHROW(evolve(c, 1.0, config(SchemeKind::lri2, 1e-3)));
        CHECK_NOTHROW(evolve(c, 0.7, config(SchemeKind::lri2, 0.7 / 16)));
    }
}
