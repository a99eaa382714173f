#pragma once

#include <cmath>
#include <optional>

#include "pdekit/ode.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// First integrals: u is constant along trajectories of f iff <grad u, f> = 0.
// ---------------------------------------------------------------------------
struct FirstIntegralReport {
    double max_gradient_residual = 0.0;  // max |<grad u(y), f(y)>| over samples
    double max_drift = 0.0;              // max |u(y(t)) - u(y(0))| on one orbit
    bool constant_function = false;      // gradient vanished at every sample
    bool pass = false;
};

inline FirstIntegralReport verify_first_integral(
    const std::function<double(const Vec&)>& u,
    const std::function<Vec(const Vec&)>& grad_u, const FieldSpec& f,
    const std::vector<Vec>& samples, double tol) {
    FirstIntegralReport rep;
    double max_grad_norm = 0.0;
    for (const Vec& y : samples) {
        Vec g = grad_u(y);
        max_grad_norm = std::max(max_grad_norm, g.lpNorm<Eigen::Infinity>());
        rep.max_gradient_residual = std::max(rep.max_gradient_residual,
                                             std::abs(g.dot(f.rhs(0.0, y))));
    }
    rep.constant_function = max_grad_norm < 1e-14;
    if (!samples.empty()) {
        auto traj = solve_ivp(f, 0.0, samples.front(), TimeGrid(0.0, 1.0, 400));
        const double u0 = u(traj.states.front());
        for (const Vec& y : traj.states)
            rep.max_drift = std::max(rep.max_drift, std::abs(u(y) - u0));
    }
    rep.pass = !rep.constant_function && rep.max_gradient_residual <= tol
               && rep.max_drift <= tol;
    return rep;
}

/// Central-difference gradient fallback.
inline std::function<Vec(const Vec&)> fd_gradient(std::function<double(const Vec&)> u) {
    return [u = std::move(u)](const Vec& x) {
        Vec g(x.size());
        for (int j = 0; j < x.size(); ++j) {
            const double s = 1e-6 * (1.0 + std::abs(x[j]));
            Vec xp = x, xm = x;
            xp[j] += s;
            xm[j] -= s;
            g[j] = (u(xp) - u(xm)) / (2 * s);
        }
        return g;
    };
}

// ---------------------------------------------------------------------------
// Hamilton-Jacobi problems on a 1-D spatial domain.
// ---------------------------------------------------------------------------
struct Hamiltonian {
    // H(t, x, u, p)
    std::function<double(double, double, double, double)> H;
    std::function<double(double, double, double, double)> Hx, Hu, Hp;  // optional

    double hx(double t, double x, double u, double p) const {
        if (Hx) return Hx(t, x, u, p);
        const double s = 1e-6 * (1 + std::abs(x));
        return (H(t, x + s, u, p) - H(t, x - s, u, p)) / (2 * s);
    }
    double hu(double t, double x, double u, double p) const {
        if (Hu) return Hu(t, x, u, p);
        const double s = 1e-6 * (1 + std::abs(u));
        return (H(t, x, u + s, p) - H(t, x, u - s, p)) / (2 * s);
    }
    double hp(double t, double x, double u, double p) const {
        if (Hp) return Hp(t, x, u, p);
        const double s = 1e-6 * (1 + std::abs(p));
        return (H(t, x, u, p + s) - H(t, x, u, p - s)) / (2 * s);
    }
};

struct HJProblem {
    enum class Kind { linear, quasilinear, nonlinear };
    Kind kind = Kind::quasilinear;

    // quasilinear: d_t S + g(t,x,S) d_x S = L(t,x,S)  (characteristics dx/dt = g,
    // dS/dt = L)
    std::function<double(double, double, double)> g, L;

    // nonlinear: d_t u + H(t, x, u, d_x u) = 0
    Hamiltonian H;

    double t0 = 0.0;
    std::function<double(double)> u0;
    std::function<double(double)> du0;  // optional, finite differences otherwise
    SpaceGrid xgrid;
    TimeGrid tgrid;
    int lattice_factor = 4;  // characteristic seeds per output cell

    double d_u0(double x) const {
        if (du0) return du0(x);
        const double s = 1e-6 * (1 + std::abs(x));
        return (u0(x + s) - u0(x - s)) / (2 * s);
    }
};

namespace detail {

// One quasilinear characteristic strip (x(t), S(t)) launched from lambda at t0.
inline void quasilinear_strip(const HJProblem& prob, double lambda, const TimeGrid& tg,
                              int upto, std::vector<double>& xs, std::vector<double>& us) {
    xs.assign(upto + 1, lambda);
    us.assign(upto + 1, prob.u0(lambda));
    FieldSpec fs([&prob](double t, const Vec& st) {
        Vec d(2);
        d[0] = prob.g(t, st[0], st[1]);
        d[1] = prob.L(t, st[0], st[1]);
        return d;
    });
    Vec st(2);
    st[0] = xs[0];
    st[1] = us[0];
    for (int j = 0; j < upto; ++j) {
        st = rk4_step(fs, tg.node(j), st, tg.h());
        if (!st.allFinite()) throw DivergenceError("quasilinear strip blow-up", tg.node(j));
        xs[j + 1] = st[0];
        us[j + 1] = st[1];
    }
}

// Full nonlinear strip (x, p, u) per the characteristic system of the
// Hamilton-Jacobi equation d_t u + H(t,x,u,p) = 0.
inline void nonlinear_strip(const HJProblem& prob, double lambda, const TimeGrid& tg,
                            int upto, std::vector<double>& xs, std::vector<double>& ps,
                            std::vector<double>& us) {
    xs.assign(upto + 1, lambda);
    ps.assign(upto + 1, prob.d_u0(lambda));
    us.assign(upto + 1, prob.u0(lambda));
    FieldSpec fs([&prob](double t, const Vec& st) {
        const double x = st[0], p = st[1], u = st[2];
        const double hp = prob.H.hp(t, x, u, p);
        Vec d(3);
        d[0] = hp;
        d[1] = -(prob.H.hx(t, x, u, p) + p * prob.H.hu(t, x, u, p));
        d[2] = -prob.H.H(t, x, u, p) + p * hp;
        return d;
    });
    Vec st(3);
    st[0] = xs[0];
    st[1] = ps[0];
    st[2] = us[0];
    for (int j = 0; j < upto; ++j) {
        st = rk4_step(fs, tg.node(j), st, tg.h());
        if (!st.allFinite()) throw DivergenceError("nonlinear strip blow-up", tg.node(j));
        xs[j + 1] = st[0];
        ps[j + 1] = st[1];
        us[j + 1] = st[2];
    }
}

// Damped Newton on lambda -> x_of_lambda(lambda) - x_target = 0.
// Throws CausticError past the nonsingularity horizon.
template <class XOfLambda>
double invert_characteristic(const XOfLambda& x_of, double seed, double x_target,
                             double scale, double t, double newton_tol = 1e-10) {
    double lam = seed;
    double r = x_of(lam) - x_target;
    for (int it = 0; it < 50; ++it) {
        if (std::abs(r) < newton_tol) return lam;
        const double s = 1e-6 * (1 + std::abs(lam));
        const double d = (x_of(lam + s) - x_of(lam - s)) / (2 * s);
        if (std::abs(d) < 1e-13 * (1 + scale))
            throw CausticError("characteristic map fold", t, x_target);
        double step = r / d;
        double lam_new = lam - step;
        double r_new = x_of(lam_new) - x_target;
        for (int halve = 0; halve < 8 && std::abs(r_new) > std::abs(r); ++halve) {
            step /= 2;
            lam_new = lam - step;
            r_new = x_of(lam_new) - x_target;
        }
        lam = lam_new;
        r = r_new;
    }
    if (std::abs(r) < newton_tol) return lam;
    throw CausticError("characteristic inversion stalled", t, x_target);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Quasilinear solver: strips from a lambda lattice, per-slice Newton inversion.
// ---------------------------------------------------------------------------
inline SolutionTable solve_quasilinear_hj(const HJProblem& prob) {
    if (prob.kind == HJProblem::Kind::nonlinear)
        throw std::domain_error("solve_quasilinear_hj: nonlinear kind not accepted");
    const auto& xg = prob.xgrid;
    const auto& tg = prob.tgrid;
    const int nt = tg.size(), nx = xg.size();

    SolutionTable table;
    table.method = "characteristics-quasilinear";
    table.axes = {tg.nodes(), xg.nodes()};
    table.values.assign(static_cast<size_t>(nt) * nx, 0.0);

    const double scale = std::abs(xg.t1 - xg.t0);
    std::vector<double> psi(nx);
    for (int i = 0; i < nx; ++i) psi[i] = xg.node(i);

    for (int i = 0; i < nx; ++i) table.at(0, i) = prob.u0(xg.node(i));
    for (int j = 1; j < nt; ++j) {
        std::vector<double> xs, us;
        auto x_of = [&](double lam) {
            detail::quasilinear_strip(prob, lam, tg, j, xs, us);
            return xs[j];
        };
        for (int i = 0; i < nx; ++i) {
            const double lam = detail::invert_characteristic(x_of, psi[i], xg.node(i),
                                                             scale, tg.node(j));
            psi[i] = lam;
            detail::quasilinear_strip(prob, lam, tg, j, xs, us);
            table.at(j, i) = us[j];
            table.residual_norm = std::max(table.residual_norm,
                                           std::abs(xs[j] - xg.node(i)));
        }
    }
    return table;
}

// ---------------------------------------------------------------------------
// Fully nonlinear solver returning u, p and the strip-compatibility report.
// ---------------------------------------------------------------------------
struct NonlinearHJSolution {
    SolutionTable u;
    SolutionTable p;
    double compatibility_max = 0.0;  // max |d_xi u_hat - p_hat d_xi x_hat|
};

inline NonlinearHJSolution solve_nonlinear_hj(const HJProblem& prob) {
    if (prob.kind != HJProblem::Kind::nonlinear)
        throw std::domain_error("solve_nonlinear_hj: kind must be nonlinear");
    const auto& xg = prob.xgrid;
    const auto& tg = prob.tgrid;
    const int nt = tg.size(), nx = xg.size();

    NonlinearHJSolution sol;
    sol.u.method = sol.p.method = "characteristics-nonlinear";
    sol.u.axes = sol.p.axes = {tg.nodes(), xg.nodes()};
    sol.u.values.assign(static_cast<size_t>(nt) * nx, 0.0);
    sol.p.values.assign(static_cast<size_t>(nt) * nx, 0.0);

    // xi-lattice strips for the compatibility report
    const int nl = prob.lattice_factor * xg.n + 1;
    const double dl = (xg.t1 - xg.t0) / (nl - 1);
    std::vector<std::vector<double>> lat_x(nl), lat_p(nl), lat_u(nl);
    for (int k = 0; k < nl; ++k)
        detail::nonlinear_strip(prob, xg.t0 + k * dl, tg, tg.n, lat_x[k], lat_p[k],
                                lat_u[k]);
    auto d5 = [dl](const std::vector<std::vector<double>>& f, int k, int j) {
        return (-f[k + 2][j] + 8 * f[k + 1][j] - 8 * f[k - 1][j] + f[k - 2][j])
               / (12 * dl);
    };
    for (int j = 0; j < nt; ++j)
        for (int k = 2; k + 2 < nl; ++k) {
            const double du = d5(lat_u, k, j);
            const double dx = d5(lat_x, k, j);
            sol.compatibility_max = std::max(sol.compatibility_max,
                                             std::abs(du - lat_p[k][j] * dx));
        }

    const double scale = std::abs(xg.t1 - xg.t0);
    std::vector<double> psi(nx);
    for (int i = 0; i < nx; ++i) psi[i] = xg.node(i);
    for (int i = 0; i < nx; ++i) {
        sol.u.at(0, i) = prob.u0(xg.node(i));
        sol.p.at(0, i) = prob.d_u0(xg.node(i));
    }
    for (int j = 1; j < nt; ++j) {
        std::vector<double> xs, ps, us;
        auto x_of = [&](double lam) {
            detail::nonlinear_strip(prob, lam, tg, j, xs, ps, us);
            return xs[j];
        };
        for (int i = 0; i < nx; ++i) {
            const double lam = detail::invert_characteristic(x_of, psi[i], xg.node(i),
                                                             scale, tg.node(j));
            psi[i] = lam;
            detail::nonlinear_strip(prob, lam, tg, j, xs, ps, us);
            sol.u.at(j, i) = us[j];
            sol.p.at(j, i) = ps[j];
            sol.u.residual_norm = std::max(sol.u.residual_norm,
                                           std::abs(xs[j] - xg.node(i)));
        }
    }
    return sol;
}

// ---------------------------------------------------------------------------
// Clairaut / Lagrange implicit ODE y = x a(y') + b(y') by characteristics:
//   dx/dt = x a'(z) + b'(z),  dz/dt = -a(z) + z,  dy/dt = z (x a'(z) + b'(z)).
// ---------------------------------------------------------------------------
struct ClairautCurve {
    std::vector<double> t, x, y, z;
    double max_implicit_residual = 0.0;  // max |y - x a(z) - b(z)|
    double max_slope_residual = 0.0;     // max |dy/dx - z| where dx/dt != 0
    bool fold = false;                   // dx/dt vanished somewhere
    bool stationary_z = false;           // dz/dt = 0 at the initial point
};

struct ScalarFn {
    std::function<double(double)> f;
    std::function<double(double)> df;  // optional

    double operator()(double z) const { return f(z); }
    double d(double z) const {
        if (df) return df(z);
        const double s = 1e-6 * (1 + std::abs(z));
        return (f(z + s) - f(z - s)) / (2 * s);
    }
};

inline ClairautCurve solve_clairaut(const ScalarFn& a, const ScalarFn& b, double x0,
                                    double y0, double z0, const TimeGrid& grid) {
    if (std::abs(x0 * a.d(z0) + b.d(z0)) < 1e-12)
        throw std::domain_error("solve_clairaut: x0 a'(z0) + b'(z0) vanishes");
    if (std::abs(x0 * a(z0) + b(z0) - y0) > 1e-8)
        throw std::domain_error("solve_clairaut: initial point off the surface");

    FieldSpec fs([&a, &b](double, const Vec& st) {
        const double x = st[0], z = st[2];
        const double dx = x * a.d(z) + b.d(z);
        Vec out(3);
        out[0] = dx;
        out[1] = z * dx;
        out[2] = -a(z) + z;
        return out;
    });

    ClairautCurve curve;
    curve.stationary_z = std::abs(-a(z0) + z0) < 1e-12;
    Vec st(3);
    st[0] = x0;
    st[1] = y0;
    st[2] = z0;
    for (int i = 0; i <= grid.n; ++i) {
        curve.t.push_back(grid.node(i));
        curve.x.push_back(st[0]);
        curve.y.push_back(st[1]);
        curve.z.push_back(st[2]);
        curve.max_implicit_residual = std::max(
            curve.max_implicit_residual, std::abs(st[1] - st[0] * a(st[2]) - b(st[2])));
        if (std::abs(st[0] * a.d(st[2]) + b.d(st[2])) < 1e-10) curve.fold = true;
        if (i < grid.n) st = detail::rk4_step(fs, grid.node(i), st, grid.h());
    }
    for (size_t i = 1; i + 1 < curve.t.size(); ++i) {
        const double dx = curve.x[i + 1] - curve.x[i - 1];
        if (std::abs(dx) < 1e-12) continue;
        const double slope = (curve.y[i + 1] - curve.y[i - 1]) / dx;
        curve.max_slope_residual = std::max(curve.max_slope_residual,
                                            std::abs(slope - curve.z[i]));
    }
    return curve;
}

}  // namespace pdekit
