#include <catch_amalgamated.hpp>
#include <cmath>

#include "pdekit/fourier.hpp"

using namespace pdekit;

TEST_CASE("fourier_parabolic_solve") {
    SECTION("single sine mode decays at the separated rate") {
        MixedBVP spec;
        spec.type = MixedBVP::Type::parabolic_dirichlet;
        spec.phi0 = [](double x) { return std::sqrt(2.0) * std::sin(M_PI * x); };
        auto sol = fourier_parabolic_solve(spec);
        CHECK(sol.alpha[0] == Catch::Approx(1.0).margin(1e-12));
        for (int j = 2; j <= spec.J; ++j) CHECK(std::abs(sol.alpha[j - 1]) < 1e-12);
        CHECK_FALSE(sol.compatibility_notice);
        for (double t : {0.0, 0.1, 0.5})
            for (double x : {0.2, 0.5, 0.9}) {
                const double exact = std::sqrt(2.0) * std::sin(M_PI * x)
                                     * std::exp(-M_PI * M_PI * t);
                CHECK(sol.eval(t, x) == Catch::Approx(exact).margin(1e-12));
            }
    }
    SECTION("affine data is the steady state") {
        MixedBVP spec;
        spec.uA = 2.0;
        spec.uB = -1.0;
        spec.phi0 = [&spec](double x) { return spec.uA + (spec.uB - spec.uA) * x; };
        auto sol = fourier_parabolic_solve(spec);
        for (double a : sol.alpha) CHECK(std::abs(a) < 1e-12);
        CHECK(sol.eval(3.0, 0.25) == Catch::Approx(2.0 - 3.0 * 0.25).margin(1e-12));
        CHECK_FALSE(sol.compatibility_notice);
    }
    SECTION("scaled interval and diffusivity") {
        MixedBVP spec;
        spec.A = 1.0;
        spec.B = 3.0;
        spec.a = 2.0;
        spec.phi0 = [](double x) { return std::sqrt(2.0) * std::sin(M_PI * (x - 1) / 2); };
        auto sol = fourier_parabolic_solve(spec);
        const double t = 0.07, x = 1.8;
        const double exact = std::sqrt(2.0) * std::sin(M_PI * (x - 1) / 2)
                             * std::exp(-M_PI * M_PI * t);
        CHECK(sol.eval(t, x) == Catch::Approx(exact).margin(1e-12));
    }
    SECTION("incompatible corner data raises the notice") {
        MixedBVP spec;
        spec.phi0 = [](double) { return 1.0; };
        CHECK(fourier_parabolic_solve(spec).compatibility_notice);
    }
    SECTION("wrong type is rejected") {
        MixedBVP spec;
        spec.type = MixedBVP::Type::hyperbolic_neumann;
        spec.phi0 = [](double) { return 0.0; };
        CHECK_THROWS_AS(fourier_parabolic_solve(spec), std::domain_error);
    }
}

TEST_CASE("fourier_hyperbolic_solve") {
    SECTION("single cosine displacement mode oscillates") {
        MixedBVP spec;
        spec.type = MixedBVP::Type::hyperbolic_neumann;
        spec.phi0 = [](double x) { return std::sqrt(2.0) * std::cos(M_PI * x); };
        auto sol = fourier_hyperbolic_solve(spec);
        CHECK(sol.alpha[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(std::abs(sol.a0) < 1e-12);
        for (double t : {0.0, 0.3, 1.2})
            for (double x : {0.0, 0.4, 1.0}) {
                const double exact = std::sqrt(2.0) * std::cos(M_PI * x)
                                     * std::cos(M_PI * t);
                CHECK(sol.eval(t, x) == Catch::Approx(exact).margin(1e-12));
            }
    }
    SECTION("single cosine velocity mode") {
        MixedBVP spec;
        spec.type = MixedBVP::Type::hyperbolic_neumann;
        spec.phi0 = [](double) { return 0.0; };
        spec.phi1 = [](double x) { return std::sqrt(2.0) * std::cos(M_PI * x); };
        auto sol = fourier_hyperbolic_solve(spec);
        const double t = 0.45, x = 0.3;
        const double exact = std::sqrt(2.0) * std::cos(M_PI * x) * std::sin(M_PI * t) / M_PI;
        CHECK(sol.eval(t, x) == Catch::Approx(exact).margin(1e-12));
    }
    SECTION("mean modes drift linearly") {
        MixedBVP spec;
        spec.type = MixedBVP::Type::hyperbolic_neumann;
        spec.phi0 = [](double) { return 0.7; };
        spec.phi1 = [](double) { return 2.0; };
        auto sol = fourier_hyperbolic_solve(spec);
        CHECK(sol.a0 == Catch::Approx(0.7).margin(1e-12));
        CHECK(sol.b0 == Catch::Approx(2.0).margin(1e-12));
        CHECK(sol.eval(1.3, 0.8) == Catch::Approx(0.7 + 2.6).margin(1e-11));
    }
    SECTION("speed scaling on a shifted interval") {
        MixedBVP spec;
        spec.type = MixedBVP::Type::hyperbolic_neumann;
        spec.A = -1.0;
        spec.B = 1.0;
        spec.a = 3.0;
        spec.phi0 = [](double x) { return std::sqrt(2.0) * std::cos(M_PI * (x + 1) / 2); };
        auto sol = fourier_hyperbolic_solve(spec);
        const double om = M_PI * 3.0 / 2.0;
        const double t = 0.21, x = 0.1;
        const double exact = std::sqrt(2.0) * std::cos(M_PI * (x + 1) / 2) * std::cos(om * t);
        CHECK(sol.eval(t, x) == Catch::Approx(exact).margin(1e-12));
    }
    SECTION("mode residual vanishes and wrong type is rejected") {
        MixedBVP spec;
        spec.type = MixedBVP::Type::hyperbolic_neumann;
        spec.phi0 = [](double x) { return std::cos(M_PI * x); };
        spec.phi1 = [](double x) { return std::cos(2 * M_PI * x); };
        auto sol = fourier_hyperbolic_solve(spec);
        for (int j = 1; j <= 3; ++j)
            CHECK(fourier_mode_ode_residual(sol, j, 0.37) < 1e-14);

        spec.type = MixedBVP::Type::parabolic_dirichlet;
        CHECK_THROWS_AS(fourier_hyperbolic_solve(spec), std::domain_error);
    }
}

TEST_CASE("FourierSolution::table matches eval") {
    MixedBVP spec;
    spec.phi0 = [](double x) { return std::sin(M_PI * x) + 0.3 * std::sin(3 * M_PI * x); };
    auto sol = fourier_parabolic_solve(spec);
    auto tab = sol.table(TimeGrid(0.0, 0.2, 4), SpaceGrid(0.0, 1.0, 8));
    CHECK(tab.at(2, 3) == Catch::Approx(sol.eval(0.1, 3.0 / 8)).margin(1e-15));
    CHECK(tab.axes[0].size() == 5);
    CHECK(tab.axes[1].size() == 9);
}
