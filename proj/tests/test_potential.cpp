#include <catch_amalgamated.hpp>
#include <cmath>

#include "pdekit/potential.hpp"

using namespace pdekit;

namespace {

Vec point3(double a, double b, double c) {
    Vec v(3);
    v << a, b, c;
    return v;
}

}  // namespace

TEST_CASE("newtonian_potential of a uniform ball") {
    auto rho = [](const Vec&) { return 1.0; };
    const double R = 1.0;
    SECTION("center value 2 pi R^2") {
        CHECK(newtonian_potential(rho, R, point3(0, 0, 0))
              == Catch::Approx(2 * M_PI * R * R).margin(1e-10));
    }
    SECTION("interior value 2 pi (R^2 - |P|^2/3)") {
        Vec P = point3(0.5, 0.0, 0.0);
        const double exact = 2 * M_PI * (R * R - P.squaredNorm() / 3);
        CHECK(newtonian_potential(rho, R, P, 64, 48, 96)
              == Catch::Approx(exact).epsilon(5e-3));
    }
    SECTION("exterior value matches the point mass") {
        Vec P = point3(0.0, 0.0, 2.0);
        const double exact = (4 * M_PI / 3) / 2.0;
        CHECK(newtonian_potential(rho, R, P, 64, 48, 96)
              == Catch::Approx(exact).epsilon(5e-3));
    }
}

TEST_CASE("newtonian_potential_residual satisfies the Poisson equation") {
    auto rho = [](const Vec& x) { return std::exp(-x.squaredNorm()); };
    std::vector<Vec> probes = {point3(0, 0, 0), point3(0.4, 0.2, -0.1),
                               point3(2.95, 0, 0)};
    auto reports = newtonian_potential_residual(rho, 3.0, probes);
    REQUIRE(reports.size() == 3);
    CHECK_FALSE(reports[0].skipped);
    CHECK(reports[0].rel_error < 2e-3);
    CHECK_FALSE(reports[1].skipped);
    CHECK(reports[1].rel_error < 2e-3);
    CHECK(reports[2].skipped);  // too close to the support boundary
}

TEST_CASE("ball_dirichlet_solve") {
    SECTION("kernel mass is one") {
        for (const Vec& y : {point3(0, 0, 0), point3(0.3, -0.2, 0.5), point3(0.8, 0, 0)})
            CHECK(poisson_kernel_mass(1.0, y) == Catch::Approx(1.0).margin(1e-8));
    }
    SECTION("harmonic boundary data is reproduced inside") {
        BallProblem p;
        p.radius = 1.0;
        p.data = [](const Vec& x) { return x[0] * x[1]; };
        Vec y = point3(0.4, -0.3, 0.2);
        CHECK(ball_dirichlet_solve(p, y) == Catch::Approx(0.4 * -0.3).margin(1e-8));

        p.data = [](const Vec& x) { return 2 * x[2] + 1; };
        CHECK(ball_dirichlet_solve(p, y) == Catch::Approx(2 * 0.2 + 1).margin(1e-8));
    }
    SECTION("off-center ball") {
        BallProblem p;
        p.radius = 0.5;
        p.center = point3(1.0, 2.0, -1.0);
        p.data = [&p](const Vec& x) { return x[0] - p.center[0]; };
        Vec y = p.center + point3(0.2, 0.1, 0.0);
        CHECK(ball_dirichlet_solve(p, y) == Catch::Approx(0.2).margin(1e-8));
    }
    SECTION("mean value property at the center") {
        BallProblem p;
        p.radius = 1.0;
        p.data = [](const Vec& x) { return std::exp(x[0]) * std::cos(x[1]); };
        CHECK(ball_dirichlet_solve(p, point3(0, 0, 0))
              == Catch::Approx(sphere_average(p)).margin(1e-10));
    }
    SECTION("exterior points are rejected") {
        BallProblem p;
        p.radius = 1.0;
        p.data = [](const Vec&) { return 1.0; };
        CHECK_THROWS_AS(ball_dirichlet_solve(p, point3(1.5, 0, 0)), std::domain_error);
    }
}

TEST_CASE("ball_neumann_recover") {
    BallProblem p;
    p.radius = 1.0;
    SECTION("degree-two harmonic pair") {
        // h = x0 x1 has radial derivative 2 x0 x1 on the unit sphere
        p.data = [](const Vec& x) { return 2 * x[0] * x[1]; };
        Vec y = point3(0.5, 0.4, -0.2);
        CHECK(ball_neumann_recover(p, y) == Catch::Approx(0.5 * 0.4).margin(1e-7));
        CHECK(ball_neumann_recover(p, point3(0, 0, 0)) == 0.0);
    }
    SECTION("nonzero-mean data is rejected") {
        p.data = [](const Vec&) { return 1.0; };
        CHECK_THROWS_AS(ball_neumann_recover(p, point3(0.1, 0, 0)), std::domain_error);
    }
}

TEST_CASE("nonlinear_elliptic_picard") {
    SECTION("constant right-hand side gives the uniform-ball potential") {
        auto f = [](const Vec&, double) { return 3.0; };
        auto res = nonlinear_elliptic_picard(f, 1.0, 0.0, 9, 2);
        // u = -f0 (b^2/2 - |x|^2/6)
        CHECK(res.eval(point3(0, 0, 0)) == Catch::Approx(-1.5).margin(1e-6));
        CHECK(res.eval(point3(0.5, 0, 0))
              == Catch::Approx(-3.0 * (0.5 - 0.25 / 6)).epsilon(0.02));
        CHECK(res.gaps.size() == 2);
        CHECK(res.gaps[1] < 1e-10);  // f does not depend on u
    }
    SECTION("mild nonlinearity contracts geometrically") {
        auto f = [](const Vec&, double u) { return 1.0 + 0.3 * u; };
        auto res = nonlinear_elliptic_picard(f, 1.0, 0.3, 9, 4);
        REQUIRE(res.gaps.size() == 4);
        CHECK(res.contracted);
        CHECK(res.gaps[1] < 0.5 * res.gaps[0]);
        CHECK(res.gaps[2] < 0.5 * res.gaps[1]);
    }
    SECTION("large Lipschitz constant violates the hypothesis") {
        auto f = [](const Vec&, double u) { return u; };
        CHECK_THROWS_AS(nonlinear_elliptic_picard(f, 1.0, 2.0, 5, 2), HypothesisError);
    }
}
