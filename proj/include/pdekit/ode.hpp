#pragma once

#include <algorithm>
#include <cmath>
#include <optional>

#include "pdekit/core.hpp"
#include "pdekit/quadrature.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Gronwall bound: x -> M * exp(int_a^x alpha), composite trapezoid on the grid.
// ---------------------------------------------------------------------------
inline std::function<double(double)>
gronwall_bound(double M, const std::function<double(double)>& alpha, const TimeGrid& grid) {
    if (M < 0) throw std::domain_error("gronwall_bound: M must be nonnegative");
    std::vector<double> a(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        a[i] = alpha(grid.node(i));
        if (a[i] < 0) throw std::domain_error("gronwall_bound: alpha must be nonnegative");
    }
    auto cum = cumulative_trapezoid(a, grid.h());
    auto g = grid;
    return [M, cum = std::move(cum), g](double x) {
        const double h = g.h();
        if (x <= g.t0) return M;
        if (x >= g.t1) return M * std::exp(cum.back());
        const int i = std::min(static_cast<int>((x - g.t0) / h), g.n - 1);
        const double w = (x - g.node(i)) / h;
        return M * std::exp((1.0 - w) * cum[i] + w * cum[i + 1]);
    };
}

namespace detail {

inline Vec rk4_step(const FieldSpec& f, double t, const Vec& y, double h) {
    const Vec k1 = f.rhs(t, y);
    const Vec k2 = f.rhs(t + h / 2, y + (h / 2) * k1);
    const Vec k3 = f.rhs(t + h / 2, y + (h / 2) * k2);
    const Vec k4 = f.rhs(t + h, y + h * k3);
    return y + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
}

/// Samples |f(y'') - f(y')| / |y'' - y'| on shrinking pairs around y0; a ratio
/// blowing past 1e6 marks a failed Lipschitz probe (possible non-uniqueness).
inline bool lipschitz_probe_fails(const FieldSpec& f, double t0, const Vec& y0) {
    const Vec f0 = f.rhs(t0, y0);
    double worst = 0.0;
    for (double eps = 1e-2; eps >= 1e-14; eps *= 1e-2) {
        for (int j = 0; j < y0.size(); ++j) {
            Vec yp = y0, ym = y0;
            yp[j] += eps;
            ym[j] -= eps;
            worst = std::max(worst, (f.rhs(t0, yp) - f0).norm() / eps);
            worst = std::max(worst, (f0 - f.rhs(t0, ym)).norm() / eps);
        }
    }
    return worst > 1e6;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Fixed-step classical RK4 initial-value solver.
// ---------------------------------------------------------------------------
inline TrajectoryTable solve_ivp(const FieldSpec& f, double x0, const Vec& y0,
                                 const TimeGrid& grid) {
    TrajectoryTable table;
    table.grid = grid;
    table.method = "rk4";
    table.states.reserve(grid.size());
    table.states.push_back(y0);
    table.nonuniqueness_flag = detail::lipschitz_probe_fails(f, x0, y0);
    const double h = grid.h();
    Vec y = y0;
    for (int i = 0; i < grid.n; ++i) {
        y = detail::rk4_step(f, grid.node(i), y, h);
        if (!y.allFinite())
            throw DivergenceError("solve_ivp: non-finite state", grid.node(i));
        table.states.push_back(y);
    }
    return table;
}

inline TrajectoryTable solve_ivp_scalar(const std::function<double(double, double)>& f,
                                        double x0, double y0, const TimeGrid& grid) {
    FieldSpec fs([f](double t, const Vec& y) {
        Vec out(1);
        out[0] = f(t, y[0]);
        return out;
    });
    Vec v(1);
    v[0] = y0;
    return solve_ivp(fs, x0, v, grid);
}

// ---------------------------------------------------------------------------
// Picard iteration on the integral equation z(x) = z0 + int_{x0}^x f(t, z(t)) dt,
// trapezoid quadrature on the solver grid.  Grid must start at x0.
// ---------------------------------------------------------------------------
inline TrajectoryTable picard_solve(const FieldSpec& f, double x0, const Vec& y0,
                                    const TimeGrid& grid, double tol, int max_iter) {
    if (tol <= 0) throw std::domain_error("picard_solve: tol must be positive");
    if (max_iter < 1) throw std::domain_error("picard_solve: max_iter >= 1 required");
    (void)x0;
    const double h = grid.h();
    const int m = grid.size();
    std::vector<Vec> z(m, y0), znew(m, y0);
    double gap = 0.0;
    for (int iter = 1; iter <= max_iter; ++iter) {
        std::vector<Vec> fz(m);
        for (int i = 0; i < m; ++i) fz[i] = f.rhs(grid.node(i), z[i]);
        znew[0] = y0;
        for (int i = 1; i < m; ++i)
            znew[i] = znew[i - 1] + 0.5 * h * (fz[i - 1] + fz[i]);
        gap = 0.0;
        for (int i = 0; i < m; ++i) gap = std::max(gap, sup_gap(znew[i], z[i]));
        z.swap(znew);
        if (gap < tol) {
            TrajectoryTable table;
            table.grid = grid;
            table.method = "picard";
            table.states = std::move(z);
            table.iterations = iter;
            table.last_gap = gap;
            return table;
        }
    }
    throw NonConvergenceError("picard_solve: max_iter reached", gap);
}

inline TrajectoryTable picard_solve(const LinearSystemSpec& spec, double x0, const Vec& z0,
                                    const TimeGrid& grid, double tol, int max_iter) {
    return picard_solve(spec.as_field(), x0, z0, grid, tol, max_iter);
}

// ---------------------------------------------------------------------------
// Matrix exponential: scaling and squaring on the truncated power series.
// ---------------------------------------------------------------------------
inline Mat matrix_exp(const Mat& A, double t = 1.0) {
    if (!A.allFinite()) throw std::domain_error("matrix_exp: non-finite entries");
    Mat B = t * A;
    const double nrm = B.lpNorm<Eigen::Infinity>();
    int squarings = 0;
    if (nrm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
        B /= std::pow(2.0, squarings);
    }
    const int n = static_cast<int>(A.rows());
    Mat result = Mat::Identity(n, n);
    Mat term = Mat::Identity(n, n);
    for (int k = 1; k <= 40; ++k) {
        term = term * B / static_cast<double>(k);
        result += term;
        if (term.lpNorm<Eigen::Infinity>() < 1e-18 * result.lpNorm<Eigen::Infinity>()) break;
    }
    for (int s = 0; s < squarings; ++s) result = result * result;
    return result;
}

// ---------------------------------------------------------------------------
// Fundamental matrix C(x; x0): columns are RK4 trajectories from the canonical
// basis.  C(x0;x0) = I, det C != 0 at every node.  Grid must contain x0 as a node.
// ---------------------------------------------------------------------------
inline FundamentalMatrixTable fundamental_matrix(const std::function<Mat(double)>& A,
                                                 double x0, const TimeGrid& grid,
                                                 double singular_tol = 1e-12) {
    const double h = grid.h();
    int i0 = -1;
    for (int i = 0; i < grid.size(); ++i)
        if (std::abs(grid.node(i) - x0) < 1e-9 * (1 + std::abs(x0))) { i0 = i; break; }
    if (i0 < 0) throw std::domain_error("fundamental_matrix: grid must contain x0 as a node");

    const int n = static_cast<int>(A(x0).rows());
    FieldSpec mf([A, n](double x, const Vec& flat) -> Vec {
        Eigen::Map<const Mat> C(flat.data(), n, n);
        Mat dC = A(x) * C;
        return Eigen::Map<Vec>(dC.data(), n * n);
    });

    FundamentalMatrixTable table;
    table.x0 = x0;
    table.grid = grid;
    table.matrices.assign(grid.size(), Mat::Identity(n, n));

    Vec flat = Eigen::Map<Vec>(Mat(Mat::Identity(n, n)).data(), n * n);
    // forward sweep
    Vec y = flat;
    for (int i = i0; i < grid.n; ++i) {
        y = detail::rk4_step(mf, grid.node(i), y, h);
        table.matrices[i + 1] = Eigen::Map<Mat>(y.data(), n, n);
    }
    // backward sweep
    y = flat;
    for (int i = i0; i > 0; --i) {
        y = detail::rk4_step(mf, grid.node(i), y, -h);
        table.matrices[i - 1] = Eigen::Map<Mat>(y.data(), n, n);
    }

    table.determinants.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        table.determinants[i] = table.matrices[i].determinant();
        if (std::abs(table.determinants[i]) < singular_tol)
            throw IntegrityError("fundamental_matrix: singular C at node " + std::to_string(i));
    }
    return table;
}

// ---------------------------------------------------------------------------
// Liouville residual: max over nodes of |det C(x;x0) - exp(int Tr A)|.
// ---------------------------------------------------------------------------
struct LiouvilleReport {
    double max_abs_residual = 0.0;
    double max_rel_residual = 0.0;
    bool pass = false;
};

inline LiouvilleReport liouville_check(const std::function<Mat(double)>& A,
                                       const FundamentalMatrixTable& table, double tol) {
    std::vector<double> tr(table.grid.size());
    for (int i = 0; i < table.grid.size(); ++i) tr[i] = A(table.grid.node(i)).trace();
    auto cum = cumulative_trapezoid(tr, table.grid.h());
    int i0 = 0;
    for (int i = 0; i < table.grid.size(); ++i)
        if (std::abs(table.grid.node(i) - table.x0) < 1e-9 * (1 + std::abs(table.x0))) i0 = i;
    LiouvilleReport rep;
    for (int i = 0; i < table.grid.size(); ++i) {
        const double expected = table.determinants[i0] * std::exp(cum[i] - cum[i0]);
        const double res = std::abs(table.determinants[i] - expected);
        rep.max_abs_residual = std::max(rep.max_abs_residual, res);
        rep.max_rel_residual = std::max(rep.max_rel_residual, res / std::abs(expected));
    }
    rep.pass = rep.max_rel_residual <= tol;
    return rep;
}

// ---------------------------------------------------------------------------
// Constant-variation formula: z(x) = C(x;x0)[z0 + int C^{-1}(t;x0) b(t) dt].
// ---------------------------------------------------------------------------
inline TrajectoryTable constant_variation_solution(const LinearSystemSpec& spec, double x0,
                                                   const Vec& z0, const TimeGrid& grid) {
    auto C = fundamental_matrix(spec.A, x0, grid);
    const int m = grid.size();
    std::vector<Vec> integrand(m);
    for (int i = 0; i < m; ++i) {
        Vec bi = spec.b ? spec.b(grid.node(i)) : Vec(Vec::Zero(z0.size()));
        integrand[i] = C.matrices[i].partialPivLu().solve(bi);
    }
    int i0 = 0;
    for (int i = 0; i < m; ++i)
        if (std::abs(grid.node(i) - x0) < 1e-9 * (1 + std::abs(x0))) i0 = i;
    // cumulative trapezoid of the vector integrand, anchored at x0
    std::vector<Vec> cum(m, Vec(Vec::Zero(z0.size())));
    for (int i = 1; i < m; ++i)
        cum[i] = cum[i - 1] + 0.5 * grid.h() * (integrand[i - 1] + integrand[i]);
    TrajectoryTable table;
    table.grid = grid;
    table.method = "constant-variation";
    table.states.resize(m);
    for (int i = 0; i < m; ++i)
        table.states[i] = C.matrices[i] * (z0 + cum[i] - cum[i0]);
    return table;
}

// ---------------------------------------------------------------------------
// Exponential stability via the symmetric part: 2w = max sigma(A + A^T).
// ---------------------------------------------------------------------------
inline StabilityReport exponential_stability_check(const Mat& A, const TimeGrid& grid,
                                                   const std::vector<Vec>& samples,
                                                   double tol = 1e-6) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A + A.transpose());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("exponential_stability_check: eigen-solver failure");
    StabilityReport rep;
    rep.w = es.eigenvalues().maxCoeff() / 2.0;
    rep.decay_rate = -rep.w;
    rep.verdict = rep.w < 0;

    Eigen::EigenSolver<Mat> full(A);
    const bool hurwitz = (full.eigenvalues().real().array() < 0).all();
    if (hurwitz && !rep.verdict) {
        rep.hurwitz_only = true;
        rep.note = "Hurwitz spectrum but A + A^T not negative definite";
    }

    FieldSpec lin([A](double, const Vec& z) -> Vec { return A * z; });
    for (const Vec& z0 : samples) {
        auto traj = solve_ivp(lin, grid.t0, z0, grid);
        for (int i = 0; i < grid.size(); ++i) {
            const double norm = traj.states[i].norm();
            rep.witness_norms.push_back(norm);
            const double bound = z0.norm() * std::exp(rep.w * (grid.node(i) - grid.t0)) * (1 + tol);
            if (rep.verdict && norm > bound + tol) rep.verdict = false;
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Lyapunov-exponent threshold ||B|| = max_i ||A_i + A_i^T|| (spectral norm).
// Every gamma < 0 with |gamma| > ||B|| is an accepted Lyapunov exponent.
// ---------------------------------------------------------------------------
inline double lyapunov_exponent_bound(const std::vector<Mat>& family) {
    if (family.empty()) throw std::domain_error("lyapunov_exponent_bound: empty family");
    double bound = 0.0;
    for (const Mat& A : family) {
        Eigen::SelfAdjointEigenSolver<Mat> es(A + A.transpose());
        bound = std::max(bound, es.eigenvalues().cwiseAbs().maxCoeff());
    }
    return bound;
}

// ---------------------------------------------------------------------------
// Delay ODE y'(t) = f(t, y(t), y(t - sigma)) by the method of steps.
// Grid starts at 0; internally refined so steps never straddle multiples of sigma.
// ---------------------------------------------------------------------------
inline TrajectoryTable solve_delay_ode(
    const std::function<Vec(double, const Vec&, const Vec&)>& f, double sigma,
    const std::function<Vec(double)>& history, const TimeGrid& grid) {
    if (sigma <= 0) throw std::domain_error("solve_delay_ode: sigma must be positive");
    if (std::abs(grid.t0) > 1e-14) throw std::domain_error("solve_delay_ode: grid must start at 0");
    // history must cover [-sigma, 0]
    Vec h0 = history(0.0);
    (void)history(-sigma);

    // refine so that h divides sigma: steps per sigma-segment
    const int per_seg = std::max(1, static_cast<int>(std::ceil(sigma / grid.h())));
    const double h = sigma / per_seg;
    const int total = static_cast<int>(std::ceil(grid.t1 / h - 1e-12));
    TimeGrid fine(0.0, total * h, total);

    std::vector<double> times(total + 1);
    std::vector<Vec> states(total + 1);
    times[0] = 0.0;
    states[0] = h0;
    auto delayed = [&](double t) -> Vec {
        if (t <= 0.0) return history(t);
        const int i = std::min(static_cast<int>(t / h), total - 1);
        const double w = (t - i * h) / h;
        if (static_cast<size_t>(i) + 1 >= states.size() || states[i + 1].size() == 0)
            return states[i];
        return (1.0 - w) * states[i] + w * states[i + 1];
    };
    for (int i = 0; i < total; ++i) {
        const double t = i * h;
        FieldSpec fs([&](double s, const Vec& y) { return f(s, y, delayed(s - sigma)); });
        Vec next = detail::rk4_step(fs, t, states[i], h);
        if (!next.allFinite()) throw DivergenceError("solve_delay_ode: divergence", t);
        states[i + 1] = next;
        times[i + 1] = t + h;
    }
    TrajectoryTable table;
    table.grid = fine;
    table.method = "method-of-steps";
    table.states = std::move(states);
    return table;
}

}  // namespace pdekit
