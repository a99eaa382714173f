#pragma once

#include <cmath>

#include "pdekit/core.hpp"
#include "pdekit/quadrature.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Nonlinear parabolic fixed point (1-D space, zero initial data):
//   u_{k+1}(t,x) = int_0^t int P(t-s, x, xi) F(xi, u_k, p_k) dxi ds,
//   p_{k+1}(t,x) = int_0^t int d_x P(t-s, x, xi) F(xi, u_k, p_k) dxi ds,
// with the heat kernel handled by Gauss-Hermite after xi = x + 2 sqrt(t-s) z
// and the 1/sqrt(t-s) factor of the p-kernel removed by s = t - q^2.
// ---------------------------------------------------------------------------
struct ParabolicPicardParams {
    double horizon = 0.25;      // a
    double C = 1.0;             // bound of |F|
    double L = 1.0;             // Lipschitz constant of F in (u, p)
    double delta = 1.0;         // smallness threshold of the contraction lemma
    int nt = 32, nx = 41;       // table resolution
    double x_lo = -4.0, x_hi = 4.0;
    int gh_nodes = 32;          // Gauss-Hermite nodes
    int time_panels = 32;       // quadrature panels for the time integral
};

struct ParabolicPicardResult {
    TimeGrid tg{0.0, 1.0, 1};
    SpaceGrid xg{0.0, 1.0, 1};
    std::vector<double> u, p;   // row-major (time, space)
    std::vector<double> gaps;   // sup gap per iteration

    size_t flat(int i, int j) const { return static_cast<size_t>(i) * xg.size() + j; }

    double interp(const std::vector<double>& tab, double t, double x) const {
        double ft = (t - tg.t0) / tg.h();
        double fx = (x - xg.t0) / xg.h();
        ft = std::min(std::max(ft, 0.0), tg.n - 1e-12);
        fx = std::min(std::max(fx, 0.0), xg.n - 1e-12);
        const int i = static_cast<int>(ft), j = static_cast<int>(fx);
        const double a = ft - i, b = fx - j;
        return (1 - a) * ((1 - b) * tab[flat(i, j)] + b * tab[flat(i, j + 1)])
               + a * ((1 - b) * tab[flat(i + 1, j)] + b * tab[flat(i + 1, j + 1)]);
    }

    double u_at(double t, double x) const { return interp(u, t, x); }
    double p_at(double t, double x) const { return interp(p, t, x); }
};

inline ParabolicPicardResult nonlinear_parabolic_picard(
    const std::function<double(double, double, double)>& F,  // F(x, u, p)
    const ParabolicPicardParams& prm, int iterations) {
    const double a = prm.horizon;
    if (a * prm.C > prm.delta || 2 * std::sqrt(a) * prm.C * prm.L > prm.delta)
        throw std::domain_error("nonlinear_parabolic_picard: horizon condition violated");

    ParabolicPicardResult res;
    res.tg = TimeGrid(0.0, a, prm.nt);
    res.xg = SpaceGrid(prm.x_lo, prm.x_hi, prm.nx - 1);
    const size_t sz = static_cast<size_t>(res.tg.size()) * res.xg.size();
    res.u.assign(sz, 0.0);
    res.p.assign(sz, 0.0);

    QuadRule gh = gauss_hermite(prm.gh_nodes);
    const double inv_sqrt_pi = 1.0 / std::sqrt(M_PI);

    for (int it = 0; it < iterations; ++it) {
        std::vector<double> un(sz, 0.0), pn(sz, 0.0);
        double gap = 0.0;
        for (int i = 1; i < res.tg.size(); ++i) {
            const double t = res.tg.node(i);
            for (int j = 0; j < res.xg.size(); ++j) {
                const double x = res.xg.node(j);
                // u: trapezoid in s over [0, t]
                {
                    QuadRule tr = trapezoid_rule(0.0, t, prm.time_panels);
                    double acc = 0.0;
                    for (size_t q = 0; q < tr.nodes.size(); ++q) {
                        const double s = tr.nodes[q];
                        const double sig = t - s;
                        double layer = 0.0;
                        if (sig <= 0) {
                            layer = F(x, res.interp(res.u, s, x), res.interp(res.p, s, x));
                        } else {
                            const double sc = 2 * std::sqrt(sig);
                            for (size_t z = 0; z < gh.nodes.size(); ++z) {
                                const double xi = x + sc * gh.nodes[z];
                                layer += gh.weights[z]
                                         * F(xi, res.interp(res.u, s, xi),
                                             res.interp(res.p, s, xi));
                            }
                            layer *= inv_sqrt_pi;
                        }
                        acc += tr.weights[q] * layer;
                    }
                    un[res.flat(i, j)] = acc;
                }
                // p: substitute s = t - q^2, ds = -2 q dq; the z/sqrt(sig)
                // kernel factor becomes z * 2 dq
                {
                    QuadRule tr = trapezoid_rule(0.0, std::sqrt(t), prm.time_panels);
                    double acc = 0.0;
                    for (size_t qn = 0; qn < tr.nodes.size(); ++qn) {
                        const double q = tr.nodes[qn];
                        const double s = t - q * q;
                        const double sc = 2 * q;  // 2 sqrt(sig)
                        double layer = 0.0;
                        for (size_t z = 0; z < gh.nodes.size(); ++z) {
                            const double xi = x + sc * gh.nodes[z];
                            layer += gh.weights[z] * gh.nodes[z]
                                     * F(xi, res.interp(res.u, s, xi),
                                         res.interp(res.p, s, xi));
                        }
                        acc += tr.weights[qn] * 2.0 * layer;
                    }
                    pn[res.flat(i, j)] = inv_sqrt_pi * acc;
                }
            }
        }
        for (size_t s = 0; s < sz; ++s) {
            gap = std::max(gap, std::abs(un[s] - res.u[s]));
            gap = std::max(gap, std::abs(pn[s] - res.p[s]));
        }
        res.u.swap(un);
        res.p.swap(pn);
        res.gaps.push_back(gap);
        if (it >= 2 && res.gaps[it] > res.gaps[it - 1] + 1e-12
            && res.gaps[it - 1] > res.gaps[it - 2] + 1e-12)
            throw NonConvergenceError("nonlinear_parabolic_picard: gaps growing",
                                      res.gaps[it]);
    }
    return res;
}

}  // namespace pdekit
