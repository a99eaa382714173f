#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "pdekit/flows.hpp"
#include "pdekit/ode.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Seeded Gaussian stream.  Explicit Box-Muller on mt19937_64 keeps paths
// bit-identical across standard libraries.
// ---------------------------------------------------------------------------
class GaussianStream {
public:
    explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2 * M_PI * u2);
    }

private:
    double uniform() {
        return (eng_() >> 11) * (1.0 / 9007199254740992.0);  // 53-bit in [0,1)
    }
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

/// Splittable per-path seed derivation (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// ---------------------------------------------------------------------------
// Discrete Wiener path with independent N(0, h) increments.
// ---------------------------------------------------------------------------
struct WienerPath {
    TimeGrid grid;
    int m = 1;
    std::uint64_t seed = 0;
    std::vector<Vec> w;  // cumulative samples, w[0] = 0

    const Vec& at(int i) const { return w[static_cast<size_t>(i)]; }

    Vec interpolate(double t) const {
        const double h = grid.h();
        if (t <= grid.t0) return w.front();
        if (t >= grid.t1) return w.back();
        const int i = std::min(static_cast<int>((t - grid.t0) / h), grid.n - 1);
        const double s = (t - grid.node(i)) / h;
        return (1.0 - s) * w[i] + s * w[i + 1];
    }
};

inline WienerPath sample_wiener(const TimeGrid& grid, int m, std::uint64_t seed) {
    if (m < 1) throw std::domain_error("sample_wiener: m >= 1 required");
    WienerPath path;
    path.grid = grid;
    path.m = m;
    path.seed = seed;
    GaussianStream gauss(seed);
    const double sqh = std::sqrt(grid.h());
    path.w.assign(grid.size(), Vec(Vec::Zero(m)));
    for (int i = 1; i < grid.size(); ++i) {
        path.w[i] = path.w[i - 1];
        for (int j = 0; j < m; ++j) path.w[i][j] += sqh * gauss.next();
    }
    return path;
}

// ---------------------------------------------------------------------------
// OU smoothing dv/dt = beta (w(t) - v), beta = 1/eps, with w piecewise linear;
// the per-node update is exact for that interpolation.
// ---------------------------------------------------------------------------
struct SmoothedPath {
    WienerPath source;
    double eps = 0.0;
    std::vector<Vec> v, eta;  // eta = w - v

    Vec v_interp(double t) const;
    Vec dv_dt(double t) const;  // beta (w_lin(t) - v(t))
};

inline SmoothedPath smooth_path_ou(const WienerPath& path, double eps) {
    if (eps <= 0) throw std::domain_error("smooth_path_ou: eps must be positive");
    SmoothedPath out;
    out.source = path;
    out.eps = eps;
    const double beta = 1.0 / eps;
    const double h = path.grid.h();
    const double decay = std::exp(-beta * h);
    out.v.assign(path.w.size(), Vec(Vec::Zero(path.m)));
    out.eta.assign(path.w.size(), Vec(Vec::Zero(path.m)));
    for (size_t i = 0; i + 1 < path.w.size(); ++i) {
        const Vec dw = path.w[i + 1] - path.w[i];
        out.v[i + 1] = decay * out.v[i] + (1 - decay) * path.w[i]
                       + (dw / h) * (h - (1 - decay) / beta);
        out.eta[i + 1] = path.w[i + 1] - out.v[i + 1];
    }
    out.eta[0] = path.w[0] - out.v[0];
    return out;
}

inline Vec SmoothedPath::v_interp(double t) const {
    // exact continuation from the last stored node using the linear w segment
    const auto& g = source.grid;
    const double h = g.h();
    const double beta = 1.0 / eps;
    if (t <= g.t0) return v.front();
    const int i = std::min(static_cast<int>((t - g.t0) / h), g.n - 1);
    const double s = t - g.node(i);
    if (s <= 0) return v[i];
    const double decay = std::exp(-beta * s);
    const Vec dw = source.w[i + 1] - source.w[i];
    return decay * v[i] + (1 - decay) * source.w[i] + (dw / h) * (s - (1 - decay) / beta);
}

inline Vec SmoothedPath::dv_dt(double t) const {
    return (source.interpolate(t) - v_interp(t)) / eps;
}

// ---------------------------------------------------------------------------
// Stratonovich SDE dx = f dt + sum_j g_j o dw^j.
// ---------------------------------------------------------------------------
struct SDEProblem {
    FieldSpec f;                    // drift
    std::vector<FieldSpec> g;       // diffusion fields, one per noise channel
    Vec x0;
    double T = 1.0;
};

/// Euler-Maruyama on the Ito form, drift corrected by 1/2 sum_j (d_x g_j) g_j.
inline TrajectoryTable integrate_stratonovich(const SDEProblem& p, const WienerPath& path) {
    TrajectoryTable table;
    table.grid = path.grid;
    table.method = "euler-maruyama-stratonovich";
    table.states.reserve(path.grid.size());
    Vec x = p.x0;
    table.states.push_back(x);
    const double h = path.grid.h();
    for (int i = 0; i < path.grid.n; ++i) {
        const double t = path.grid.node(i);
        Vec drift = p.f.rhs ? p.f.rhs(t, x) : Vec(Vec::Zero(x.size()));
        for (size_t j = 0; j < p.g.size(); ++j)
            drift += 0.5 * (p.g[j].jacobian_at(t, x) * p.g[j].rhs(t, x));
        Vec next = x + h * drift;
        for (size_t j = 0; j < p.g.size(); ++j)
            next += p.g[j].rhs(t, x)
                    * (path.w[i + 1][static_cast<int>(j)] - path.w[i][static_cast<int>(j)]);
        if (!next.allFinite())
            throw DivergenceError("integrate_stratonovich: blow-up", t);
        x = next;
        table.states.push_back(x);
    }
    return table;
}

/// RK4 on the random ODE dx/dt = f + sum_j g_j dv^j/dt with substep <= eps/10.
inline TrajectoryTable integrate_approx_ode(const SDEProblem& p, const SmoothedPath& sm) {
    const auto& g = sm.source.grid;
    TrajectoryTable table;
    table.grid = g;
    table.method = "wong-zakai-rk4";
    table.states.reserve(g.size());
    Vec x = p.x0;
    table.states.push_back(x);

    FieldSpec fs([&p, &sm](double t, const Vec& y) {
        Vec d = p.f.rhs ? p.f.rhs(t, y) : Vec(Vec::Zero(y.size()));
        const Vec dv = sm.dv_dt(t);
        for (size_t j = 0; j < p.g.size(); ++j)
            d += p.g[j].rhs(t, y) * dv[static_cast<int>(j)];
        return d;
    });

    const double h = g.h();
    const int sub = std::max(1, static_cast<int>(std::ceil(h / (sm.eps / 10.0))));
    const double hs = h / sub;
    for (int i = 0; i < g.n; ++i) {
        for (int s = 0; s < sub; ++s) {
            x = detail::rk4_step(fs, g.node(i) + s * hs, x, hs);
            if (!x.allFinite())
                throw DivergenceError("integrate_approx_ode: blow-up", g.node(i));
        }
        table.states.push_back(x);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Wong-Zakai mean-square convergence study with paired paths.
// ---------------------------------------------------------------------------
struct WZRow {
    double eps = 0.0;
    double mse = 0.0;
    double ci_low = 0.0, ci_high = 0.0;
    int n_paths = 0;
    std::uint64_t seed = 0;
};

struct WZStudy {
    std::vector<WZRow> rows;
    double slope = 0.0;       // least-squares log(mse) vs log(eps)
    bool slope_tested = true; // false when the noise is absent
};

inline WZStudy wz_convergence_study(
    const SDEProblem& p, const std::vector<double>& eps_list, int n_paths,
    std::uint64_t seed, int path_steps = 2048,
    const std::function<Vec(const WienerPath&)>& reference = nullptr) {
    if (n_paths < 100) throw std::domain_error("wz_convergence_study: n_paths >= 100");
    for (size_t i = 1; i < eps_list.size(); ++i)
        if (eps_list[i] >= eps_list[i - 1])
            throw std::domain_error("wz_convergence_study: eps_list must decrease");

    WZStudy study;
    study.slope_tested = !p.g.empty();
    TimeGrid grid(0.0, p.T, path_steps);
    for (double eps : eps_list) {
        std::vector<double> errs;
        errs.reserve(n_paths);
        for (int k = 0; k < n_paths; ++k) {
            WienerPath path = sample_wiener(grid, std::max<int>(1, p.g.size()),
                                            derive_seed(seed, k));
            Vec ref = reference ? reference(path)
                                : integrate_stratonovich(p, path).states.back();
            SmoothedPath sm = smooth_path_ou(path, eps);
            Vec xe = integrate_approx_ode(p, sm).states.back();
            errs.push_back((xe - ref).squaredNorm());
        }
        WZRow row;
        row.eps = eps;
        row.n_paths = n_paths;
        row.seed = seed;
        double mean = 0.0;
        for (double e : errs) mean += e;
        mean /= n_paths;
        double var = 0.0;
        for (double e : errs) var += (e - mean) * (e - mean);
        var /= (n_paths - 1);
        const double half = 1.96 * std::sqrt(var / n_paths);
        row.mse = mean;
        row.ci_low = mean - half;
        row.ci_high = mean + half;
        study.rows.push_back(row);
    }
    if (study.slope_tested && study.rows.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const int n = static_cast<int>(study.rows.size());
        for (const auto& r : study.rows) {
            const double lx = std::log(r.eps), ly = std::log(std::max(r.mse, 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        study.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    }
    return study;
}

// ---------------------------------------------------------------------------
// Stochastic chain rule (Stratonovich): per-path comparison of phi(T, x(T))
// against phi(0, x0) + int [d_s phi + <d_x phi, f>] ds + midpoint-rule
// Stratonovich sums.
// ---------------------------------------------------------------------------
struct ItoCheckReport {
    double lhs = 0.0, rhs = 0.0;
    double gap = 0.0;
    bool pass = false;
};

struct ScalarObservable {
    std::function<double(double, const Vec&)> phi;
    std::function<double(double, const Vec&)> dphi_dt;  // optional (FD fallback)
    std::function<Vec(double, const Vec&)> grad;        // optional

    double dt(double t, const Vec& x) const {
        if (dphi_dt) return dphi_dt(t, x);
        const double s = 1e-6 * (1 + std::abs(t));
        return (phi(t + s, x) - phi(t - s, x)) / (2 * s);
    }
    Vec dx(double t, const Vec& x) const {
        if (grad) return grad(t, x);
        Vec g(x.size());
        for (int j = 0; j < x.size(); ++j) {
            const double s = 1e-6 * (1 + std::abs(x[j]));
            Vec xp = x, xm = x;
            xp[j] += s;
            xm[j] -= s;
            g[j] = (phi(t, xp) - phi(t, xm)) / (2 * s);
        }
        return g;
    }
};

inline ItoCheckReport ito_formula_check(const ScalarObservable& obs, const SDEProblem& p,
                                        const WienerPath& path, double tol) {
    TrajectoryTable traj = integrate_stratonovich(p, path);
    const auto& g = path.grid;
    const double h = g.h();
    ItoCheckReport rep;
    rep.lhs = obs.phi(g.t1, traj.states.back());
    double rhs = obs.phi(g.t0, traj.states.front());
    for (int i = 0; i < g.n; ++i) {
        const double tm = g.node(i) + h / 2;
        const Vec xm = 0.5 * (traj.states[i] + traj.states[i + 1]);
        double drift_part = obs.dt(tm, xm);
        if (p.f.rhs) drift_part += obs.dx(tm, xm).dot(p.f.rhs(tm, xm));
        rhs += h * drift_part;
        for (size_t j = 0; j < p.g.size(); ++j) {
            const double dw = path.w[i + 1][static_cast<int>(j)]
                              - path.w[i][static_cast<int>(j)];
            rhs += obs.dx(tm, xm).dot(p.g[j].rhs(tm, xm)) * dw;
        }
    }
    rep.rhs = rhs;
    rep.gap = std::abs(rep.lhs - rep.rhs);
    rep.pass = rep.gap <= tol * (1 + std::abs(rep.lhs));
    return rep;
}

// ---------------------------------------------------------------------------
// Commuting-flow factorization x(t) = G(w(t)) o F(t phi(lambda)) [lambda] and
// its deterministic fixed-point map psi.
// ---------------------------------------------------------------------------
struct FlowFactorization {
    FieldSpec f;   // drift field, flow F
    FieldSpec g;   // diffusion field, flow G
    std::function<double(const Vec&)> phi;  // scalar weight
    double T = 1.0;
    double V = 0.0;   // bound on |grad phi|
    double K = 0.0;   // bound on |f|
    int flow_steps = 400;

    double rho() const { return T * V * K; }
};

struct PsiResult {
    Vec lambda;
    std::vector<double> gaps;
    double residual = 0.0;  // |F(t phi(lambda))[lambda] - z|
    int iterations = 0;
};

inline PsiResult psi_fixed_point(const FlowFactorization& fac, double t, const Vec& z,
                                 double tol, int max_iter) {
    if (fac.rho() >= 1.0)
        throw HypothesisError("psi_fixed_point: contraction bound rho >= 1");
    if (t > fac.T) throw std::domain_error("psi_fixed_point: t exceeds the horizon");
    PsiResult res;
    Vec lam = z;
    for (int it = 1; it <= max_iter; ++it) {
        Vec next = flow(fac.f, -t * fac.phi(lam), z, fac.flow_steps);
        const double gap = sup_gap(next, lam);
        res.gaps.push_back(gap);
        lam = next;
        res.iterations = it;
        if (gap < tol) {
            res.lambda = lam;
            res.residual = (flow(fac.f, t * fac.phi(lam), lam, fac.flow_steps) - z).norm();
            return res;
        }
    }
    throw NonConvergenceError("psi_fixed_point: no convergence", res.gaps.back());
}

inline TrajectoryTable commuting_flow_solution(const FlowFactorization& fac,
                                               const WienerPath& path, const Vec& lambda,
                                               double commute_tol = 1e-6) {
    {
        Vec widths = Vec::Ones(lambda.size());
        auto rep = commutation_test({fac.f, fac.g}, box_samples(lambda, widths), commute_tol);
        if (!rep.commute)
            throw HypothesisError("commuting_flow_solution: [f, g] != 0 on the sample box");
    }
    TrajectoryTable table;
    table.grid = path.grid;
    table.method = "commuting-flow-factorization";
    const double weight = fac.phi(lambda);
    for (int i = 0; i < path.grid.size(); ++i) {
        Vec x = flow(fac.f, path.grid.node(i) * weight, lambda, fac.flow_steps);
        x = flow(fac.g, path.w[i][0], x, fac.flow_steps);
        table.states.push_back(x);
    }
    return table;
}

// ---------------------------------------------------------------------------
// Backward-Kolmogorov functional S(t,x): direct Monte Carlo vs the nested
// conditional estimate with the label lambda = psi(t, x) frozen per outer path.
// ---------------------------------------------------------------------------
struct FunctionalSEstimate {
    double direct = 0.0, direct_ci_half = 0.0;
    double nested = 0.0, nested_ci_half = 0.0;
    bool ci_overlap = false;
};

inline FunctionalSEstimate functional_S_check(const FlowFactorization& fac,
                                              const std::function<double(const Vec&)>& h,
                                              double t, const Vec& x, int n_paths,
                                              std::uint64_t seed, int path_steps = 256,
                                              int inner_paths = 64, double psi_tol = 1e-10) {
    if (t > fac.T) throw std::domain_error("functional_S_check: t exceeds the horizon");
    std::vector<double> direct, nested;
    direct.reserve(n_paths);
    nested.reserve(n_paths);
    const double tau = fac.T - t;
    for (int k = 0; k < n_paths; ++k) {
        WienerPath path = sample_wiener(TimeGrid(0.0, fac.T, path_steps), 1,
                                        derive_seed(seed, k));
        // z_hat(t, x) = G(-w(t))[x]; lambda = psi_hat(t, z_hat)
        const double wt = path.interpolate(t)[0];
        Vec zhat = flow(fac.g, -wt, x, fac.flow_steps);
        Vec lam = psi_fixed_point(fac, t, zhat, psi_tol, 200).lambda;

        // direct: continue along this path to the horizon
        const double wT = path.w.back()[0];
        Vec xd = flow(fac.f, tau * fac.phi(lam), x, fac.flow_steps);
        xd = flow(fac.g, wT - wt, xd, fac.flow_steps);
        direct.push_back(h(xd));

        // nested: freeze lambda, average over an independent Gaussian increment
        if (tau <= 0) {
            nested.push_back(h(x));
        } else {
            GaussianStream gauss(derive_seed(seed ^ 0x5bf03635ULL, k));
            double acc = 0.0;
            Vec base = flow(fac.f, tau * fac.phi(lam), x, fac.flow_steps);
            for (int i = 0; i < inner_paths; ++i) {
                const double xi = std::sqrt(tau) * gauss.next();
                acc += h(flow(fac.g, xi, base, fac.flow_steps));
            }
            nested.push_back(acc / inner_paths);
        }
    }
    auto stats = [](const std::vector<double>& v, double& mean, double& half) {
        mean = 0.0;
        for (double e : v) mean += e;
        mean /= v.size();
        double var = 0.0;
        for (double e : v) var += (e - mean) * (e - mean);
        var /= std::max<size_t>(1, v.size() - 1);
        half = 1.96 * std::sqrt(var / v.size());
    };
    FunctionalSEstimate est;
    stats(direct, est.direct, est.direct_ci_half);
    stats(nested, est.nested, est.nested_ci_half);
    est.ci_overlap = std::abs(est.direct - est.nested)
                     <= est.direct_ci_half + est.nested_ci_half + 1e-12;
    return est;
}

}  // namespace pdekit
