#include <catch_amalgamated.hpp>
#include <cmath>

#include "pdekit/maxprinciple.hpp"

using namespace pdekit;

namespace {

Vec pt(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

// samples of a function on a regular lattice over [0,1]^2
void sample_square(const std::function<double(double, double)>& f, int n,
                   std::vector<Vec>& points, std::vector<double>& values,
                   std::vector<bool>& boundary) {
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j) {
            const double x = double(i) / n, y = double(j) / n;
            points.push_back(pt(x, y));
            values.push_back(f(x, y));
            boundary.push_back(i == 0 || j == 0 || i == n || j == n);
        }
}

}  // namespace

TEST_CASE("spd_sqrt") {
    SECTION("square of the root recovers the matrix") {
        Mat A(2, 2);
        A << 4, 1, 1, 3;
        Mat S = spd_sqrt(A);
        CHECK((S * S - A).lpNorm<Eigen::Infinity>() < 1e-12);
        CHECK((S - S.transpose()).lpNorm<Eigen::Infinity>() < 1e-12);
    }
    SECTION("identity root") {
        CHECK((spd_sqrt(Mat::Identity(3, 3)) - Mat::Identity(3, 3)).norm() < 1e-14);
    }
    SECTION("asymmetric and indefinite inputs are rejected") {
        Mat B(2, 2);
        B << 1, 2, 0, 1;
        CHECK_THROWS_AS(spd_sqrt(B), std::domain_error);
        Mat C(2, 2);
        C << 1, 0, 0, -2;
        CHECK_THROWS_AS(spd_sqrt(C), std::domain_error);
    }
}

TEST_CASE("max_principle_check on point samples") {
    SECTION("harmonic function passes") {
        std::vector<Vec> points;
        std::vector<double> values;
        std::vector<bool> boundary;
        sample_square([](double x, double y) { return x * x - y * y; }, 12, points,
                      values, boundary);
        auto rep = max_principle_check(points, values, boundary);
        CHECK(rep.pass);
        CHECK(rep.max_value == Catch::Approx(1.0));
        CHECK(rep.min_value == Catch::Approx(-1.0));
    }
    SECTION("interior bump is flagged with a witness") {
        std::vector<Vec> points;
        std::vector<double> values;
        std::vector<bool> boundary;
        auto bump = [](double x, double y) {
            const double r2 = (x - 0.5) * (x - 0.5) + (y - 0.5) * (y - 0.5);
            return std::exp(-20 * r2);
        };
        sample_square(bump, 12, points, values, boundary);
        auto rep = max_principle_check(points, values, boundary);
        CHECK_FALSE(rep.pass);
        CHECK_FALSE(rep.max_on_boundary);
        CHECK(rep.max_witness[0] == Catch::Approx(0.5));
        CHECK(rep.max_witness[1] == Catch::Approx(0.5));
        CHECK(rep.min_on_boundary);
    }
    SECTION("constants pass by the tie rule") {
        std::vector<Vec> points = {pt(0, 0), pt(0.5, 0.5), pt(1, 1)};
        std::vector<double> values = {2.0, 2.0, 2.0};
        std::vector<bool> boundary = {true, false, true};
        CHECK(max_principle_check(points, values, boundary).pass);
    }
    SECTION("anisotropic kinds validate the coefficient matrix") {
        std::vector<Vec> points = {pt(0, 0), pt(1, 1)};
        std::vector<double> values = {0.0, 1.0};
        std::vector<bool> boundary = {true, true};
        Mat good(2, 2);
        good << 2, 0.5, 0.5, 1;
        CHECK(max_principle_check(points, values, boundary,
                                  MaxPrincipleKind::elliptic_A, &good)
                  .pass);
        Mat bad(2, 2);
        bad << 1, 0, 0, -1;
        CHECK_THROWS_AS(max_principle_check(points, values, boundary,
                                            MaxPrincipleKind::elliptic_A, &bad),
                        std::domain_error);
        CHECK_THROWS_AS(max_principle_check(points, values, boundary,
                                            MaxPrincipleKind::parabolic_A, nullptr),
                        std::domain_error);
    }
    SECTION("size mismatch is rejected") {
        std::vector<Vec> points = {pt(0, 0)};
        std::vector<double> values = {0.0, 1.0};
        std::vector<bool> boundary = {true};
        CHECK_THROWS_AS(max_principle_check(points, values, boundary),
                        std::domain_error);
    }
}

TEST_CASE("max_principle_check on a solution table") {
    SECTION("decaying heat mode respects the parabolic boundary") {
        // u = e^{-t} sin(pi x) on [0, 0.5] x [0, 1]
        SolutionTable tab;
        const int nt = 10, nx = 20;
        std::vector<double> ts, xs;
        for (int i = 0; i <= nt; ++i) ts.push_back(0.05 * i);
        for (int j = 0; j <= nx; ++j) xs.push_back(double(j) / nx);
        tab.axes = {ts, xs};
        tab.values.resize(ts.size() * xs.size());
        for (size_t i = 0; i < ts.size(); ++i)
            for (size_t j = 0; j < xs.size(); ++j)
                tab.values[i * xs.size() + j] =
                    std::exp(-ts[i]) * std::sin(M_PI * xs[j]);
        auto rep = max_principle_check(tab, MaxPrincipleKind::heat);
        CHECK(rep.pass);
        CHECK(rep.max_value == Catch::Approx(std::sin(M_PI * 0.5)).margin(1e-12));
    }
    SECTION("growing mode violates it at the final time") {
        SolutionTable tab;
        std::vector<double> ts = {0.0, 0.5, 1.0};
        std::vector<double> xs = {0.0, 0.25, 0.5, 0.75, 1.0};
        tab.axes = {ts, xs};
        tab.values.resize(15);
        for (size_t i = 0; i < 3; ++i)
            for (size_t j = 0; j < 5; ++j)
                tab.values[i * 5 + j] = std::exp(ts[i]) * std::sin(M_PI * xs[j]);
        auto rep = max_principle_check(tab, MaxPrincipleKind::heat);
        CHECK_FALSE(rep.pass);
        CHECK(rep.max_witness[0] == Catch::Approx(1.0));
        CHECK(rep.max_witness[1] == Catch::Approx(0.5));
    }
    SECTION("harmonic kind treats all edges as boundary") {
        SolutionTable tab;
        std::vector<double> xs = {0.0, 0.5, 1.0};
        tab.axes = {xs, xs};
        // u = x + y, extremes at opposite corners
        tab.values = {0.0, 0.5, 1.0, 0.5, 1.0, 1.5, 1.0, 1.5, 2.0};
        CHECK(max_principle_check(tab, MaxPrincipleKind::harmonic).pass);
    }
}
