#pragma once

#include <cmath>

#include "pdekit/core.hpp"
#include "pdekit/quadrature.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Heat (Poisson) formula: u(t,x) = (4 pi t)^{-n/2} int phi(xi) e^{-|x-xi|^2/4t},
// computed by tensor Gauss-Hermite after xi = x + 2 sqrt(t) z.
// ---------------------------------------------------------------------------
inline double heat_solve(const std::function<double(const Vec&)>& phi, double t,
                         const Vec& x, int nodes_per_axis = 64) {
    if (t < 0) throw std::domain_error("heat_solve: t must be nonnegative");
    if (t == 0) return phi(x);
    const int n = static_cast<int>(x.size());
    QuadRule gh = gauss_hermite(nodes_per_axis);
    const double scale = 2 * std::sqrt(t);
    const double norm = std::pow(M_PI, -0.5 * n);

    std::vector<int> idx(n, 0);
    double acc = 0.0;
    while (true) {
        Vec xi = x;
        double w = 1.0;
        for (int k = 0; k < n; ++k) {
            xi[k] += scale * gh.nodes[idx[k]];
            w *= gh.weights[idx[k]];
        }
        acc += w * phi(xi);
        int k = 0;
        for (; k < n; ++k) {
            if (++idx[k] < nodes_per_axis) break;
            idx[k] = 0;
        }
        if (k == n) break;
    }
    return norm * acc;
}

inline double heat_solve1d(const std::function<double(double)>& phi, double t, double x,
                           int nodes = 64) {
    Vec v(1);
    v[0] = x;
    return heat_solve([&phi](const Vec& y) { return phi(y[0]); }, t, v, nodes);
}

/// Scaled equation d_t u = a^2 d_x^2 u reduces to the unit equation in tau = a^2 t.
inline double heat_solve1d_scaled(const std::function<double(double)>& phi, double a,
                                  double t, double x, int nodes = 64) {
    return heat_solve1d(phi, a * a * t, x, nodes);
}

/// Quadrature mass of the heat kernel: should equal 1 for any t > 0.
inline double heat_kernel_mass(double t, int nodes = 64) {
    return heat_solve1d([](double) { return 1.0; }, t, 0.0, nodes);
}

}  // namespace pdekit
