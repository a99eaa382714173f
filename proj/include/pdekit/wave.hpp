#pragma once

#include <cmath>

#include "pdekit/core.hpp"
#include "pdekit/quadrature.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Cauchy problems for the wave equation in dimensions 1, 2, 3.
// ---------------------------------------------------------------------------
struct WaveProblem {
    int dim = 1;
    double c0 = 1.0;
    std::function<double(const Vec&)> u0;   // initial displacement
    std::function<double(const Vec&)> u1;   // initial velocity
    std::function<double(double, const Vec&)> f;  // optional source f(t, x)

    WaveProblem() = default;
    WaveProblem(int d, double c) : dim(d), c0(c) {
        if (c0 <= 0) throw std::domain_error("WaveProblem: wave speed must be positive");
    }
};

inline Vec vec1(double x) {
    Vec v(1);
    v[0] = x;
    return v;
}
inline Vec vec2(double x, double y) {
    Vec v(2);
    v[0] = x;
    v[1] = y;
    return v;
}
inline Vec vec3(double x, double y, double z) {
    Vec v(3);
    v[0] = x;
    v[1] = y;
    v[2] = z;
    return v;
}

// ---------------------------------------------------------------------------
// d'Alembert: u = [u0(x+ct) + u0(x-ct)]/2 + (1/2c) int u1 over the cone base.
// ---------------------------------------------------------------------------
inline double dalembert_solve(const WaveProblem& p, double t, double x, int quad_nodes = 64) {
    const double c = p.c0;
    double u = 0.0;
    if (p.u0) u = 0.5 * (p.u0(vec1(x + c * t)) + p.u0(vec1(x - c * t)));
    if (p.u1) {
        QuadRule gl = gauss_legendre(quad_nodes, x - c * t, x + c * t);
        u += gl.integrate([&](double s) { return p.u1(vec1(s)); }) / (2 * c);
    }
    return u;
}

namespace detail {

// Disk mean int_{rho<ct} g / sqrt(c^2 t^2 - rho^2), substitution rho = ct sin(theta).
inline double wave2d_disk_integral(const std::function<double(const Vec&)>& g, double c,
                                   double t, double x, double y, int n_theta, int n_phi) {
    if (!g) return 0.0;
    QuadRule th = gauss_legendre(n_theta, 0.0, M_PI / 2);
    const double dphi = 2 * M_PI / n_phi;
    double s = 0.0;
    for (int i = 0; i < n_theta; ++i) {
        const double rho = c * t * std::sin(th.nodes[i]);
        double ring = 0.0;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            ring += g(vec2(x + rho * std::cos(phi), y + rho * std::sin(phi)));
        }
        s += th.weights[i] * std::sin(th.nodes[i]) * ring * dphi;
    }
    return c * t * s;
}

template <class G>
double dt_central4(const G& g, double t, double step) {
    return (-g(t + 2 * step) + 8 * g(t + step) - 8 * g(t - step) + g(t - 2 * step))
           / (12 * step);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Poisson formula in the plane (descent from 3D).
// ---------------------------------------------------------------------------
inline double wave2d_poisson_solve(const WaveProblem& p, double t, double x, double y,
                                   int n_theta = 32, int n_phi = 64) {
    if (t <= 0) throw std::domain_error("wave2d_poisson_solve: t must be positive");
    const double c = p.c0;
    double u = 0.0;
    if (p.u0) {
        auto I0 = [&](double s) {
            return detail::wave2d_disk_integral(p.u0, c, s, x, y, n_theta, n_phi);
        };
        u += detail::dt_central4(I0, t, t / 100) / (2 * M_PI * c);
    }
    if (p.u1)
        u += detail::wave2d_disk_integral(p.u1, c, t, x, y, n_theta, n_phi) / (2 * M_PI * c);
    return u;
}

// ---------------------------------------------------------------------------
// Kirchhoff: u = (1/4pi) d/dt [ t S(u0; ct) ] + (t/4pi) S(u1; ct),
// S(g; r) the integral of g over the unit-direction sphere scaled by r.
// ---------------------------------------------------------------------------
inline double kirchhoff_solve(const WaveProblem& p, double t, const Vec& P,
                              int n_theta = 24, int n_phi = 48) {
    if (t <= 0) throw std::domain_error("kirchhoff_solve: t must be positive");
    const double c = p.c0;
    SphereRule sph = sphere_rule(n_theta, n_phi);
    auto sphere_sum = [&](const std::function<double(const Vec&)>& g, double s) {
        double acc = 0.0;
        for (size_t i = 0; i < sph.points.size(); ++i) {
            Vec q = P;
            q[0] += c * s * sph.points[i][0];
            q[1] += c * s * sph.points[i][1];
            q[2] += c * s * sph.points[i][2];
            acc += sph.weights[i] * g(q);
        }
        return acc;
    };
    double u = 0.0;
    if (p.u0) {
        auto g = [&](double s) { return s * sphere_sum(p.u0, s); };
        u += detail::dt_central4(g, t, t / 100) / (4 * M_PI);
    }
    if (p.u1) u += t * sphere_sum(p.u1, t) / (4 * M_PI);
    return u;
}

// ---------------------------------------------------------------------------
// Duhamel: retarded potential for zero initial data,
//   u(t,P) = (1/4pi) int_0^t (t - s) S1[f(P + c(t-s) w; s)] ds.
// ---------------------------------------------------------------------------
inline double duhamel_solve(const WaveProblem& p, double t, const Vec& P,
                            int n_time = 64, int n_theta = 24, int n_phi = 48) {
    if (t <= 0) throw std::domain_error("duhamel_solve: t must be positive");
    if (!p.f) return 0.0;
    const double c = p.c0;
    SphereRule sph = sphere_rule(n_theta, n_phi);
    QuadRule gl = gauss_legendre(n_time, 0.0, t);
    double u = 0.0;
    for (int k = 0; k < n_time; ++k) {
        const double s = gl.nodes[k];
        const double r = c * (t - s);
        double shell = 0.0;
        for (size_t i = 0; i < sph.points.size(); ++i) {
            Vec q = P;
            q[0] += r * sph.points[i][0];
            q[1] += r * sph.points[i][1];
            q[2] += r * sph.points[i][2];
            shell += sph.weights[i] * p.f(s, q);
        }
        u += gl.weights[k] * (t - s) * shell;
    }
    return u / (4 * M_PI);
}

}  // namespace pdekit
