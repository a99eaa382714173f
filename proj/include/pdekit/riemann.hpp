#pragma once

#include <cmath>

#include "pdekit/core.hpp"
#include "pdekit/quadrature.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Hyperbolic operator in characteristic coordinates,
//   L u = u_xy + a(x,y) u_x + b(x,y) u_y + c(x,y) u = F(x,y).
// ---------------------------------------------------------------------------
struct RiemannProblem {
    using Coef = std::function<double(double, double)>;
    Coef a, b, c, F;

    // cauchy kind: data on the curve y = mu(x), mu' < 0
    std::function<double(double)> mu;     // curve
    std::function<double(double)> phi0;   // u on the curve
    std::function<double(double)> phi1;   // d_y u on the curve

    // goursat kind: data on x = x1 and y = y1
    double x1 = 0.0, y1 = 0.0;
    std::function<double(double)> g1;     // u(x1, y) = g1(y)
    std::function<double(double)> g2;     // u(x, y1) = g2(x)

    double x0 = 0.0, y0 = 0.0;            // target point

    double ca(double x, double y) const { return a ? a(x, y) : 0.0; }
    double cb(double x, double y) const { return b ? b(x, y) : 0.0; }
    double cc(double x, double y) const { return c ? c(x, y) : 0.0; }
    double cF(double x, double y) const { return F ? F(x, y) : 0.0; }
};

// ---------------------------------------------------------------------------
// Riemann function nu(x, y; x0, y0) on a rectangle with (x0, y0) a grid node.
// Traces: nu(x, y0) = exp int_{x0}^{x} b(s, y0) ds,
//         nu(x0, y) = exp int_{y0}^{y} a(x0, s) ds,  nu(x0, y0) = 1.
// Computed by Picard iteration on the equivalent Volterra system for
// (nu, lambda = nu_x, w = nu_y) with nu_xy = a lambda + b w + (a_x + b_y - c) nu.
// ---------------------------------------------------------------------------
struct RiemannKernel {
    SpaceGrid xg, yg;
    int i0 = 0, j0 = 0;   // indices of (x0, y0)
    std::vector<double> nu, lam, w;   // row-major (i over x, j over y)
    int iterations = 0;
    double last_gap = 0.0;

    size_t flat(int i, int j) const { return static_cast<size_t>(i) * yg.size() + j; }

    double interp(const std::vector<double>& tab, double x, double y) const {
        double fi = (x - xg.t0) / xg.h(), fj = (y - yg.t0) / yg.h();
        fi = std::min(std::max(fi, 0.0), xg.n - 1e-9);
        fj = std::min(std::max(fj, 0.0), yg.n - 1e-9);
        const int i = static_cast<int>(fi), j = static_cast<int>(fj);
        const double u = fi - i, v = fj - j;
        return (1 - u) * ((1 - v) * tab[flat(i, j)] + v * tab[flat(i, j + 1)])
               + u * ((1 - v) * tab[flat(i + 1, j)] + v * tab[flat(i + 1, j + 1)]);
    }

    double value(double x, double y) const { return interp(nu, x, y); }
    double dx(double x, double y) const { return interp(lam, x, y); }
    double dy(double x, double y) const { return interp(w, x, y); }
};

inline RiemannKernel riemann_function(const RiemannProblem& p, const SpaceGrid& xg,
                                      const SpaceGrid& yg, double tol = 1e-12,
                                      int max_iter = 200) {
    RiemannKernel K;
    K.xg = xg;
    K.yg = yg;
    const int nx = xg.size(), ny = yg.size();
    auto node_index = [](const SpaceGrid& g, double v) {
        for (int i = 0; i < g.size(); ++i)
            if (std::abs(g.node(i) - v) < 1e-9 * (1 + std::abs(v))) return i;
        throw std::domain_error("riemann_function: base point must be a grid node");
    };
    K.i0 = node_index(xg, p.x0);
    K.j0 = node_index(yg, p.y0);

    // C tilde = a_x + b_y - c by central differences
    auto ctilde = [&](double x, double y) {
        const double sx = 1e-6 * (1 + std::abs(x)), sy = 1e-6 * (1 + std::abs(y));
        const double ax = (p.ca(x + sx, y) - p.ca(x - sx, y)) / (2 * sx);
        const double by = (p.cb(x, y + sy) - p.cb(x, y - sy)) / (2 * sy);
        return ax + by - p.cc(x, y);
    };

    // boundary traces
    std::vector<double> nu_x_line(nx), nu_y_line(ny);
    {
        std::vector<double> bb(nx), aa(ny);
        for (int i = 0; i < nx; ++i) bb[i] = p.cb(xg.node(i), p.y0);
        for (int j = 0; j < ny; ++j) aa[j] = p.ca(p.x0, yg.node(j));
        auto cb_cum = cumulative_trapezoid(bb, xg.h());
        auto ca_cum = cumulative_trapezoid(aa, yg.h());
        for (int i = 0; i < nx; ++i) nu_x_line[i] = std::exp(cb_cum[i] - cb_cum[K.i0]);
        for (int j = 0; j < ny; ++j) nu_y_line[j] = std::exp(ca_cum[j] - ca_cum[K.j0]);
    }

    const size_t sz = static_cast<size_t>(nx) * ny;
    K.nu.assign(sz, 1.0);
    K.lam.assign(sz, 0.0);
    K.w.assign(sz, 0.0);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) K.nu[K.flat(i, j)] = nu_x_line[i] * nu_y_line[j];

    std::vector<double> r(sz), nu2(sz), lam2(sz), w2(sz);
    const double hx = xg.h(), hy = yg.h();
    for (int iter = 1; iter <= max_iter; ++iter) {
        for (int i = 0; i < nx; ++i)
            for (int j = 0; j < ny; ++j) {
                const double x = xg.node(i), y = yg.node(j);
                r[K.flat(i, j)] = p.ca(x, y) * K.lam[K.flat(i, j)]
                                  + p.cb(x, y) * K.w[K.flat(i, j)]
                                  + ctilde(x, y) * K.nu[K.flat(i, j)];
            }
        // lambda(x, y) = b(x, y0) nu(x, y0) + int_{y0}^{y} r(x, eta) d eta
        for (int i = 0; i < nx; ++i) {
            std::vector<double> col(ny);
            for (int j = 0; j < ny; ++j) col[j] = r[K.flat(i, j)];
            auto cum = cumulative_trapezoid(col, hy);
            const double base = p.cb(xg.node(i), p.y0) * nu_x_line[i];
            for (int j = 0; j < ny; ++j)
                lam2[K.flat(i, j)] = base + cum[j] - cum[K.j0];
        }
        // w(x, y) = a(x0, y) nu(x0, y) + int_{x0}^{x} r(xi, y) d xi
        for (int j = 0; j < ny; ++j) {
            std::vector<double> row(nx);
            for (int i = 0; i < nx; ++i) row[i] = r[K.flat(i, j)];
            auto cum = cumulative_trapezoid(row, hx);
            const double base = p.ca(p.x0, yg.node(j)) * nu_y_line[j];
            for (int i = 0; i < nx; ++i)
                w2[K.flat(i, j)] = base + cum[i] - cum[K.i0];
        }
        // nu(x, y) = nu(x, y0) + int_{y0}^{y} w(x, eta) d eta
        for (int i = 0; i < nx; ++i) {
            std::vector<double> col(ny);
            for (int j = 0; j < ny; ++j) col[j] = w2[K.flat(i, j)];
            auto cum = cumulative_trapezoid(col, hy);
            for (int j = 0; j < ny; ++j)
                nu2[K.flat(i, j)] = nu_x_line[i] + cum[j] - cum[K.j0];
        }
        double gap = 0.0;
        for (size_t s = 0; s < sz; ++s) {
            gap = std::max(gap, std::abs(nu2[s] - K.nu[s]));
            gap = std::max(gap, std::abs(lam2[s] - K.lam[s]));
            gap = std::max(gap, std::abs(w2[s] - K.w[s]));
        }
        K.nu.swap(nu2);
        K.lam.swap(lam2);
        K.w.swap(w2);
        K.iterations = iter;
        K.last_gap = gap;
        if (gap < tol) return K;
    }
    throw NonConvergenceError("riemann_function: Volterra iteration stalled", K.last_gap);
}

namespace detail {

inline double fd1(const std::function<double(double)>& f, double x) {
    const double s = 1e-6 * (1 + std::abs(x));
    return (f(x + s) - f(x - s)) / (2 * s);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Cauchy problem: data u = phi0, d_y u = phi1 on the monotone curve y = mu(x).
// Substituting u = v + w0 with w0 = phi0(x) + (y - mu(x)) phi1(x) leaves v with
// vanishing Cauchy data, so v(P) is the kernel-weighted integral of
// F1 = F - L w0 over the curvilinear triangle.
// ---------------------------------------------------------------------------
inline double riemann_cauchy_solve(const RiemannProblem& p, int kernel_n = 128,
                                   int quad_n = 64) {
    // sanity: mu decreasing near the triangle
    {
        const double span = std::abs(p.x0) + std::abs(p.y0) + 1.0;
        for (int s = 0; s <= 16; ++s) {
            const double x = p.x0 - span + 2 * span * s / 16.0;
            if (detail::fd1(p.mu, x) >= 0)
                throw std::domain_error("riemann_cauchy_solve: mu must be decreasing");
        }
    }
    // foot of the y = y0 characteristic: solve mu(x) = y0 by bisection
    double lo = p.x0, hi = p.x0;
    while (p.mu(lo) < p.y0) lo -= 1.0;
    if (p.mu(p.x0) > p.y0)
        throw std::domain_error("riemann_cauchy_solve: target below the data curve");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (p.mu(mid) > p.y0 ? lo : hi) = mid;
    }
    const double xB = 0.5 * (lo + hi);
    const double yA = p.mu(p.x0);

    auto w0 = [&](double x, double y) {
        return p.phi0(x) + (y - p.mu(x)) * p.phi1(x);
    };
    auto Lw0 = [&](double x, double y) {
        // w0_xy = phi1'(x); w0_x = phi0' - mu' phi1 + (y - mu) phi1'; w0_y = phi1
        const double d_phi1 = detail::fd1(p.phi1, x);
        const double w0x = detail::fd1(p.phi0, x) - detail::fd1(p.mu, x) * p.phi1(x)
                           + (y - p.mu(x)) * d_phi1;
        return d_phi1 + p.ca(x, y) * w0x + p.cb(x, y) * p.phi1(x) + p.cc(x, y) * w0(x, y);
    };

    RiemannProblem kp = p;
    RiemannKernel K = riemann_function(kp, SpaceGrid(xB, p.x0, kernel_n),
                                       SpaceGrid(yA, p.y0, kernel_n));

    // v(P) = int_{xB}^{x0} int_{mu(x)}^{y0} nu (F - L w0) dy dx
    QuadRule gx = gauss_legendre(quad_n, xB, p.x0);
    double v = 0.0;
    for (int i = 0; i < quad_n; ++i) {
        const double x = gx.nodes[i];
        QuadRule gy = gauss_legendre(quad_n, p.mu(x), p.y0);
        double inner = 0.0;
        for (int j = 0; j < quad_n; ++j) {
            const double y = gy.nodes[j];
            inner += gy.weights[j] * K.value(x, y) * (p.cF(x, y) - Lw0(x, y));
        }
        v += gx.weights[i] * inner;
    }
    return v + w0(p.x0, p.y0);
}

// ---------------------------------------------------------------------------
// Goursat problem: data on the characteristics x = x1 and y = y1,
//   u(P) = g2(x0) nu(x0, y1)
//        + int_{y1}^{y0} nu (g1' + a g1) |_{x = x1} dy
//        - int_{x1}^{x0} g2 (nu_x - b nu) |_{y = y1} dx
//        + double integral of nu F over the rectangle.
// ---------------------------------------------------------------------------
inline double riemann_goursat_solve(const RiemannProblem& p, int kernel_n = 128,
                                    int quad_n = 64) {
    if (std::abs(p.g1(p.y1) - p.g2(p.x1)) > 1e-8)
        throw std::domain_error("riemann_goursat_solve: corner data mismatch");
    RiemannKernel K = riemann_function(p, SpaceGrid(p.x1, p.x0, kernel_n),
                                       SpaceGrid(p.y1, p.y0, kernel_n));
    double u = p.g2(p.x0) * K.value(p.x0, p.y1);

    QuadRule gy = gauss_legendre(quad_n, p.y1, p.y0);
    for (int j = 0; j < quad_n; ++j) {
        const double y = gy.nodes[j];
        u += gy.weights[j] * K.value(p.x1, y)
             * (detail::fd1(p.g1, y) + p.ca(p.x1, y) * p.g1(y));
    }
    QuadRule gx = gauss_legendre(quad_n, p.x1, p.x0);
    for (int i = 0; i < quad_n; ++i) {
        const double x = gx.nodes[i];
        u -= gx.weights[i] * p.g2(x)
             * (K.dx(x, p.y1) - p.cb(x, p.y1) * K.value(x, p.y1));
    }
    if (p.F) {
        for (int i = 0; i < quad_n; ++i)
            for (int j = 0; j < quad_n; ++j) {
                const double x = gx.nodes[i], y = gy.nodes[j];
                u += gx.weights[i] * gy.weights[j] * K.value(x, y) * p.cF(x, y);
            }
    }
    return u;
}

}  // namespace pdekit
