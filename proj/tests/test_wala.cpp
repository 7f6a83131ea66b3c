#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lgt/wala.hpp"

using namespace lgt;

TEST_CASE("energy formula") {
    HamiltonianParams p{1.0, 1.0, 0.0, 0.0, {}};
    // theta = pi/2 on 3x4: cosine terms vanish, E = -12 - 6 sin(pi/2).
    CHECK(energy_theta(M_PI / 2, 3, 4, p) == doctest::Approx(-18.0));
    CHECK(energy_theta(M_PI / 2, 2, 2, p) == doctest::Approx(-5.0));

    // theta = 0, h_E = 1 on 3x4: 7 bulk and 10 boundary links at cos = 1.
    HamiltonianParams ph{1.0, 1.0, 1.0, 0.0, {}};
    CHECK(energy_theta(0.0, 3, 4, ph) == doctest::Approx(-29.0));

    // lambda never enters.
    HamiltonianParams pl = ph;
    pl.lam = 5.0;
    CHECK(energy_theta(0.73, 3, 4, ph) == energy_theta(0.73, 3, 4, pl));
}

TEST_CASE("optimizer") {
    SUBCASE("h = 0 puts the optimum at pi/2") {
        HamiltonianParams p{1.0, 1.0, 0.0, 0.0, {}};
        WalaSolution sol = optimize_theta(3, 4, p);
        CHECK(sol.theta == doctest::Approx(M_PI / 2).epsilon(1e-12));
        CHECK(sol.energy == doctest::Approx(-18.0));
    }

    SUBCASE("matches a fine grid scan") {
        for (double h : {0.3, 0.6, 1.0, 2.0}) {
            HamiltonianParams p{1.0, 1.0, h, 0.0, {}};
            WalaSolution sol = optimize_theta(3, 4, p);

            // Oracle: 10^6-point scan of the energy polynomial.
            double best = M_PI / 2, best_val = energy_theta(M_PI / 2, 3, 4, p);
            const int grid = 1000000;
            for (int i = 0; i <= grid; ++i) {
                double th = M_PI / 2 * i / grid;
                double v = energy_theta(th, 3, 4, p);
                if (v < best_val) {
                    best_val = v;
                    best = th;
                }
            }
            CHECK(std::abs(sol.theta - best) < 1e-6);
            CHECK(sol.energy <= best_val + 1e-12);
        }
    }

    SUBCASE("beats both fixed ansatzes everywhere") {
        for (double h = 0.0; h <= 2.01; h += 0.1) {
            HamiltonianParams p{1.0, 1.0, h, 0.0, {}};
            WalaSolution sol = optimize_theta(3, 4, p);
            CHECK(sol.energy <= energy_theta(M_PI / 2, 3, 4, p) + 1e-12);
            CHECK(sol.energy <= energy_theta(0.0, 3, 4, p) + 1e-12);
        }
    }

    SUBCASE("large h pushes theta toward zero, energy toward the polarized value") {
        HamiltonianParams p{1.0, 1.0, 50.0, 0.0, {}};
        WalaSolution sol = optimize_theta(3, 4, p);
        CHECK(sol.theta < 0.05);
        CHECK(sol.energy == doctest::Approx(energy_theta(0.0, 3, 4, p)).epsilon(1e-3));
    }

    CHECK_THROWS_AS(optimize_theta(3, 4, HamiltonianParams{1.0, 0.0, 0.5, 0.0, {}}),
                    std::invalid_argument);
}

TEST_CASE("thermodynamic optimum") {
    CHECK(theta_thermo(0.25, 1.0) == doctest::Approx(M_PI / 2));
    CHECK(theta_thermo(0.5, 1.0) == doctest::Approx(M_PI / 6).epsilon(1e-12));
    CHECK(theta_thermo(0.1, 1.0) == doctest::Approx(M_PI / 2));

    SUBCASE("continuity at the crossover") {
        double below = theta_thermo(0.25 - 1e-9, 1.0);
        double above = theta_thermo(0.25 + 1e-9, 1.0);
        CHECK(std::abs(below - above) < 1e-3);
    }

    SUBCASE("matches grid minimization of the energy density") {
        for (double h = 0.0; h <= 2.001; h += 0.05) {
            HamiltonianParams p{1.0, 1.0, h, 0.0, {}};
            double best = M_PI / 2, best_val = energy_density_thermo(M_PI / 2, p);
            const int grid = 2000000;
            for (int i = 0; i <= grid; ++i) {
                double th = M_PI / 2 * i / grid;
                double v = energy_density_thermo(th, p);
                if (v < best_val) {
                    best_val = v;
                    best = th;
                }
            }
            CHECK(std::abs(theta_thermo(h, 1.0) - best) < 1e-6);
        }
    }

    SUBCASE("finite grid deviates below the thermodynamic curve") {
        // The boundary cos(theta) term tilts the finite-size optimum away
        // from pi/2 at any h > 0, so the 3x4 curve sits under the
        // thermodynamic one and the gap shrinks as h grows.
        double prev_gap = 2.0;
        for (double h = 0.25; h <= 1.001; h += 0.05) {
            HamiltonianParams p{1.0, 1.0, h, 0.0, {}};
            double gap = theta_thermo(h, 1.0) - optimize_theta(3, 4, p).theta;
            CHECK(gap >= -1e-9);
            CHECK(gap <= prev_gap + 1e-9);
            prev_gap = gap;
        }
    }
}

TEST_CASE("analytic expectation record") {
    AnalyticExpectations at_half_pi = analytic_expectations(M_PI / 2);
    CHECK(at_half_pi.a_v == 1.0);
    CHECK(at_half_pi.b_p == doctest::Approx(1.0));
    CHECK(at_half_pi.z_bulk == doctest::Approx(0.0));
    CHECK(at_half_pi.z_boundary == doctest::Approx(0.0));
    CHECK(at_half_pi.x_link == 0.0);

    AnalyticExpectations at_zero = analytic_expectations(0.0);
    CHECK(at_zero.b_p == doctest::Approx(0.0));
    CHECK(at_zero.z_bulk == doctest::Approx(1.0));
    CHECK(at_zero.z_boundary == doctest::Approx(1.0));

    AnalyticExpectations at_pi6 = analytic_expectations(M_PI / 6);
    CHECK(at_pi6.b_p == doctest::Approx(0.5));
    CHECK(at_pi6.z_bulk == doctest::Approx(0.75));
    CHECK(at_pi6.z_boundary == doctest::Approx(std::sqrt(3.0) / 2));

    CHECK_THROWS_AS(analytic_expectations(-0.1), std::invalid_argument);
}
