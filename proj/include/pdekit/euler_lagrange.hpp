#pragma once

#include <cmath>

#include "pdekit/core.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Lagrangian density L(x, z, u) with u = grad z; partials optional, central
// differences otherwise.
// ---------------------------------------------------------------------------
struct Lagrangian {
    std::function<double(const Vec&, double, const Vec&)> L;
    std::function<double(const Vec&, double, const Vec&)> dL_dz;          // optional
    std::function<double(const Vec&, double, const Vec&, int)> dL_du;     // optional

    double lz(const Vec& x, double z, const Vec& u) const {
        if (dL_dz) return dL_dz(x, z, u);
        const double s = 1e-6 * (1 + std::abs(z));
        return (L(x, z + s, u) - L(x, z - s, u)) / (2 * s);
    }
    double lu(const Vec& x, double z, const Vec& u, int i) const {
        if (dL_du) return dL_du(x, z, u, i);
        const double s = 1e-6 * (1 + std::abs(u[i]));
        Vec up = u, um = u;
        up[i] += s;
        um[i] -= s;
        return (L(x, z, up) - L(x, z, um)) / (2 * s);
    }
};

// ---------------------------------------------------------------------------
// Pointwise Euler-Lagrange residual dL/dz - sum_i d/dx_i [dL/du_i] on the
// interior of a 2-D product grid, all derivatives by centered differences.
// ---------------------------------------------------------------------------
inline SolutionTable euler_lagrange_residual(const Lagrangian& lag,
                                             const std::function<double(const Vec&)>& z,
                                             const SpaceGrid& gx, const SpaceGrid& gy) {
    const double hx = gx.h(), hy = gy.h();
    auto grad_z = [&](const Vec& x) {
        Vec g(2);
        Vec xp = x, xm = x;
        xp[0] += hx;
        xm[0] -= hx;
        g[0] = (z(xp) - z(xm)) / (2 * hx);
        xp = x;
        xm = x;
        xp[1] += hy;
        xm[1] -= hy;
        g[1] = (z(xp) - z(xm)) / (2 * hy);
        return g;
    };
    auto momentum = [&](const Vec& x, int i) {
        return lag.lu(x, z(x), grad_z(x), i);
    };

    SolutionTable out;
    out.method = "euler-lagrange-residual";
    std::vector<double> xs, ys;
    for (int i = 1; i < gx.size() - 1; ++i) xs.push_back(gx.node(i));
    for (int j = 1; j < gy.size() - 1; ++j) ys.push_back(gy.node(j));
    out.axes = {xs, ys};
    out.values.resize(xs.size() * ys.size());
    for (size_t i = 0; i < xs.size(); ++i)
        for (size_t j = 0; j < ys.size(); ++j) {
            Vec x(2);
            x[0] = xs[i];
            x[1] = ys[j];
            double div = 0.0;
            {
                Vec xp = x, xm = x;
                xp[0] += hx;
                xm[0] -= hx;
                div += (momentum(xp, 0) - momentum(xm, 0)) / (2 * hx);
                xp = x;
                xm = x;
                xp[1] += hy;
                xm[1] -= hy;
                div += (momentum(xp, 1) - momentum(xm, 1)) / (2 * hy);
            }
            const double r = lag.lz(x, z(x), grad_z(x)) - div;
            out.values[i * ys.size() + j] = r;
            out.residual_norm = std::max(out.residual_norm, std::abs(r));
        }
    return out;
}

}  // namespace pdekit
