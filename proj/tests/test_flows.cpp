#include <catch_amalgamated.hpp>
#include <cmath>
#include <random>

#include "pdekit/flows.hpp"

using namespace pdekit;

namespace {

Vec vec2(double a, double b) {
    Vec v(2);
    v << a, b;
    return v;
}

}  // namespace

TEST_CASE("flow basics") {
    SECTION("constant field translates") {
        FieldSpec c([](double, const Vec& x) {
            Vec v(2);
            v << 2.0, -1.0;
            return v;
        });
        Vec out = flow(c, 0.5, vec2(0.0, 0.0));
        CHECK(out[0] == Catch::Approx(1.0).margin(1e-12));
        CHECK(out[1] == Catch::Approx(-0.5).margin(1e-12));
    }
    SECTION("linear field grows exponentially") {
        FieldSpec lin([](double, const Vec& x) { return x; });
        Vec x(1);
        x[0] = 1.0;
        CHECK(flow(lin, 1.0, x)[0] == Catch::Approx(std::exp(1.0)).margin(1e-9));
    }
    SECTION("group inverse") {
        FieldSpec f([](double, const Vec& x) {
            Vec v(2);
            v << std::sin(x[1]), x[0] * x[0];
            return v;
        });
        Vec x0 = vec2(0.4, -0.3);
        Vec back = flow(f, -0.7, flow(f, 0.7, x0));
        CHECK(sup_gap(back, x0) < 1e-8);
    }
    SECTION("group law on a smooth field") {
        FieldSpec f([](double, const Vec& x) {
            Vec v(2);
            v << x[1], -std::sin(x[0]);
            return v;
        });
        Vec x0 = vec2(1.0, 0.2);
        for (double s : {-0.8, 0.3}) {
            for (double t : {0.5, -0.4}) {
                Vec a = flow(f, s + t, x0);
                Vec b = flow(f, s, flow(f, t, x0));
                CHECK(sup_gap(a, b) < 1e-7);
            }
        }
    }
}

TEST_CASE("flow_jacobian") {
    SECTION("constant field gives the identity") {
        FieldSpec c([](double, const Vec&) { return Vec(Vec::Ones(2)); });
        CHECK((flow_jacobian(c, 0.8, vec2(0.1, 0.2)) - Mat::Identity(2, 2)).norm()
              < 1e-10);
    }
    SECTION("linear field gives the matrix exponential") {
        Mat A(2, 2);
        A << 0.2, -0.9, 0.5, 0.1;
        FieldSpec lin([A](double, const Vec& x) { return Vec(A * x); },
                      [A](double, const Vec&) { return A; });
        Mat Z = flow_jacobian(lin, 1.3, vec2(1.0, -1.0));
        CHECK((Z - matrix_exp(A, 1.3)).lpNorm<Eigen::Infinity>() < 1e-8);
    }
    SECTION("adjoint variational matrix inverts Z") {
        Mat A(2, 2);
        A << 0.2, -0.9, 0.5, 0.1;
        FieldSpec lin([A](double, const Vec& x) { return Vec(A * x); });
        FieldSpec adj([A](double, const Vec& x) { return Vec(-A.transpose() * x); });
        Mat Z = flow_jacobian(lin, 0.9, vec2(0.3, 0.4));
        Mat H = flow_jacobian(adj, 0.9, vec2(0.3, 0.4)).transpose();
        CHECK((H * Z - Mat::Identity(2, 2)).lpNorm<Eigen::Infinity>() < 1e-8);
    }
    SECTION("matches central differences of the flow map") {
        FieldSpec f([](double, const Vec& x) {
            Vec v(2);
            v << x[1] * x[1], -x[0];
            return v;
        });
        Vec x0 = vec2(0.5, 0.7);
        const double t = 0.6;
        Mat Z = flow_jacobian(f, t, x0);
        const double h = 1e-5;
        for (int j = 0; j < 2; ++j) {
            Vec xp = x0, xm = x0;
            xp[j] += h;
            xm[j] -= h;
            Vec col = (flow(f, t, xp) - flow(f, t, xm)) / (2 * h);
            CHECK((Z.col(j) - col).lpNorm<Eigen::Infinity>() < 1e-5);
        }
    }
    SECTION("determinant matches the integrated divergence") {
        // div Y = 3 x0^2 + cos(x1) along the orbit
        FieldSpec f([](double, const Vec& x) {
            Vec v(2);
            v << x[0] * x[0] * x[0], std::sin(x[1]);
            return v;
        });
        Vec x0 = vec2(0.3, 0.5);
        const double t = 0.4;
        Mat Z = flow_jacobian(f, t, x0);
        // integrate div along the trajectory
        auto traj = solve_ivp(f, 0.0, x0, TimeGrid(0.0, t, 2000));
        std::vector<double> div(traj.grid.size());
        for (int i = 0; i < traj.grid.size(); ++i) {
            const Vec& z = traj.states[i];
            div[i] = 3 * z[0] * z[0] + std::cos(z[1]);
        }
        const double expected = std::exp(cumulative_trapezoid(div, traj.grid.h()).back());
        CHECK(Z.determinant() == Catch::Approx(expected).epsilon(1e-6));
    }
}

TEST_CASE("lie_bracket") {
    SECTION("bracket of a field with itself vanishes") {
        FieldSpec f([](double, const Vec& x) {
            Vec v(2);
            v << x[1], x[0] * x[0];
            return v;
        });
        CHECK(lie_bracket(f, f, vec2(0.3, 0.7)).lpNorm<Eigen::Infinity>() < 1e-9);
    }
    SECTION("linear fields give the matrix commutator") {
        Mat A1(2, 2), A2(2, 2);
        A1 << 1, 2, 0, -1;
        A2 << 0, 1, 1, 0;
        FieldSpec f1([A1](double, const Vec& x) { return Vec(A1 * x); },
                     [A1](double, const Vec&) { return A1; });
        FieldSpec f2([A2](double, const Vec& x) { return Vec(A2 * x); },
                     [A2](double, const Vec&) { return A2; });
        Vec x = vec2(0.4, -0.9);
        Vec expected = (A1 * A2 - A2 * A1) * x;
        CHECK(sup_gap(lie_bracket(f1, f2, x), expected) < 1e-10);
    }
    SECTION("hand-computed noncommuting pair") {
        FieldSpec f1([](double, const Vec&) {
            Vec v(2);
            v << 1.0, 0.0;
            return v;
        });
        FieldSpec f2([](double, const Vec& x) {
            Vec v(2);
            v << 0.0, x[0];
            return v;
        });
        // convention [Y1,Y2] = dY1 Y2 - dY2 Y1, so this pair gives -e2
        Vec b = lie_bracket(f1, f2, vec2(0.2, 0.5));
        CHECK(b[0] == Catch::Approx(0.0).margin(1e-9));
        CHECK(b[1] == Catch::Approx(-1.0).margin(1e-7));
    }
    SECTION("antisymmetry") {
        FieldSpec f1([](double, const Vec& x) {
            Vec v(2);
            v << std::sin(x[1]), x[0];
            return v;
        });
        FieldSpec f2([](double, const Vec& x) {
            Vec v(2);
            v << x[0] * x[1], std::cos(x[0]);
            return v;
        });
        Vec x = vec2(0.8, -0.2);
        CHECK(sup_gap(lie_bracket(f1, f2, x), Vec(-lie_bracket(f2, f1, x))) < 1e-12);
    }
}

TEST_CASE("commutation_test and orbit") {
    auto samples = box_samples(vec2(0.0, 0.0), vec2(1.0, 1.0), 3);
    SECTION("constant fields commute") {
        FieldSpec c1([](double, const Vec&) { return Vec(vec2(1.0, 0.0)); });
        FieldSpec c2([](double, const Vec&) { return Vec(vec2(0.0, 1.0)); });
        CHECK(commutation_test({c1, c2}, samples, 1e-8).commute);
    }
    SECTION("commuting linear fields") {
        Mat A1 = Mat::Identity(2, 2);
        Mat A2 = Mat::Zero(2, 2);
        A2(0, 0) = 1.0;
        A2(1, 1) = 2.0;
        FieldSpec f1([A1](double, const Vec& x) { return Vec(A1 * x); });
        FieldSpec f2([A2](double, const Vec& x) { return Vec(A2 * x); });
        CHECK(commutation_test({f1, f2}, samples, 1e-6).commute);

        OrbitSpec spec;
        spec.fields = {f1, f2};
        spec.box_half_widths = vec2(1.0, 1.0);
        spec.x0 = vec2(1.0, -1.0);
        Vec p = vec2(0.3, 0.5);
        Vec got = orbit(spec, p);
        Vec expected = matrix_exp(A1, 0.3) * matrix_exp(A2, 0.5) * spec.x0;
        CHECK(sup_gap(got, expected) < 1e-8);

        // order swap for commuting fields
        OrbitSpec swapped = spec;
        std::swap(swapped.fields[0], swapped.fields[1]);
        Vec q = vec2(0.5, 0.3);
        CHECK(sup_gap(orbit(swapped, q), got) < 1e-8);
    }
    SECTION("noncommuting pair is rejected with a witness") {
        FieldSpec f1([](double, const Vec&) { return Vec(vec2(1.0, 0.0)); });
        FieldSpec f2([](double, const Vec& x) { return Vec(vec2(0.0, x[0])); });
        auto rep = commutation_test({f1, f2}, samples, 1e-8);
        CHECK_FALSE(rep.commute);
        CHECK(rep.worst == Catch::Approx(1.0).margin(1e-6));
    }
    SECTION("orbit at zero parameters returns the base point") {
        FieldSpec f([](double, const Vec& x) { return x; });
        OrbitSpec spec;
        spec.fields = {f};
        spec.box_half_widths = Vec(Vec::Ones(1));
        spec.x0 = vec2(2.0, 3.0);
        CHECK(sup_gap(orbit(spec, Vec(Vec::Zero(1))), spec.x0) == 0.0);
    }
    SECTION("permutation invariance over random parameters when brackets vanish") {
        Mat A1 = Mat::Identity(2, 2);
        Mat A2 = Mat::Zero(2, 2);
        A2(0, 0) = 1.0;
        A2(1, 1) = 2.0;
        FieldSpec f1([A1](double, const Vec& x) { return Vec(A1 * x); });
        FieldSpec f2([A2](double, const Vec& x) { return Vec(A2 * x); });
        OrbitSpec spec;
        spec.fields = {f1, f2};
        spec.box_half_widths = vec2(1.0, 1.0);
        spec.x0 = vec2(0.7, -0.4);
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> dist(-0.9, 0.9);
        for (int k = 0; k < 10; ++k) {
            Vec p = vec2(dist(rng), dist(rng));
            OrbitSpec swapped = spec;
            std::swap(swapped.fields[0], swapped.fields[1]);
            Vec q = vec2(p[1], p[0]);
            CHECK(sup_gap(orbit(spec, p), orbit(swapped, q)) < 1e-7);
        }
    }
}

TEST_CASE("volume_preservation_check") {
    auto samples = box_samples(vec2(0.0, 0.0), vec2(0.8, 0.8), 3);
    SECTION("rotation preserves area") {
        FieldSpec rot([](double, const Vec& x) { return Vec(vec2(-x[1], x[0])); });
        auto rep = volume_preservation_check(rot, 0.7, samples, 1e-6);
        CHECK(rep.pass);
    }
    SECTION("radial expansion fails with the Liouville determinant") {
        FieldSpec rad([](double, const Vec& x) { return x; });
        auto rep = volume_preservation_check(rad, 0.5, samples, 1e-6);
        CHECK_FALSE(rep.pass);
        CHECK(rep.max_det_defect
              == Catch::Approx(std::exp(2 * 0.5) - 1.0).margin(1e-5));
    }
    SECTION("translation preserves volume") {
        FieldSpec c([](double, const Vec&) { return Vec(vec2(0.3, 0.4)); });
        CHECK(volume_preservation_check(c, 1.0, samples, 1e-6).pass);
    }
}
