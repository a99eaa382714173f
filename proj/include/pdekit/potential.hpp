#pragma once

#include <cmath>

#include "pdekit/core.hpp"
#include "pdekit/quadrature.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Newtonian potential u(P) = int rho(Q)/|P-Q| dQ over a ball-supported density.
// Spherical substitution about P absorbs the 1/r singularity:
//   u(P) = int_0^L r dr  int_{S^2} rho(P + r w) dS1(w).
// ---------------------------------------------------------------------------
struct PotentialResidualProbe {
    Vec point;
    double laplacian = 0.0;
    double target = 0.0;      // -4 pi rho(point)
    double rel_error = 0.0;
    bool skipped = false;
};

inline double newtonian_potential(const std::function<double(const Vec&)>& rho,
                                  double support_radius, const Vec& P, int n_r = 48,
                                  int n_theta = 24, int n_phi = 48) {
    const double L = P.norm() + support_radius;
    QuadRule gl = gauss_legendre(n_r, 0.0, L);
    SphereRule sph = sphere_rule(n_theta, n_phi);
    double u = 0.0;
    for (int k = 0; k < n_r; ++k) {
        const double r = gl.nodes[k];
        double shell = 0.0;
        for (size_t i = 0; i < sph.points.size(); ++i) {
            Vec q = P;
            q[0] += r * sph.points[i][0];
            q[1] += r * sph.points[i][1];
            q[2] += r * sph.points[i][2];
            if (q.norm() <= support_radius) shell += sph.weights[i] * rho(q);
        }
        u += gl.weights[k] * r * shell;
    }
    return u;
}

/// Five-point Laplacian of the potential vs -4 pi rho at interior probes.
inline std::vector<PotentialResidualProbe> newtonian_potential_residual(
    const std::function<double(const Vec&)>& rho, double support_radius,
    const std::vector<Vec>& probes, double fd_step = 0.05, int n_r = 48, int n_theta = 24,
    int n_phi = 48) {
    std::vector<PotentialResidualProbe> out;
    auto u = [&](const Vec& P) {
        return newtonian_potential(rho, support_radius, P, n_r, n_theta, n_phi);
    };
    for (const Vec& P : probes) {
        PotentialResidualProbe probe;
        probe.point = P;
        probe.target = -4 * M_PI * rho(P);
        if (P.norm() > support_radius - 2 * fd_step) {
            probe.skipped = true;
            out.push_back(probe);
            continue;
        }
        double lap = 0.0;
        const double uc = u(P);
        for (int k = 0; k < 3; ++k) {
            Vec pp = P, pm = P;
            pp[k] += fd_step;
            pm[k] -= fd_step;
            lap += (u(pp) - 2 * uc + u(pm)) / (fd_step * fd_step);
        }
        probe.laplacian = lap;
        probe.rel_error = std::abs(lap - probe.target)
                          / std::max(1e-12, std::abs(probe.target));
        out.push_back(probe);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Dirichlet problem on a ball in R^3 by the Poisson kernel
//   P(x, y) = (r^2 - |y - c|^2) / (|S1| r |x - y|^n),  |S1| = 4 pi.
// ---------------------------------------------------------------------------
struct BallProblem {
    int n = 3;
    double radius = 1.0;
    Vec center = Vec::Zero(3);
    std::function<double(const Vec&)> data;  // boundary values on the sphere
};

inline double ball_dirichlet_solve(const BallProblem& p, const Vec& y, int n_theta = 32,
                                   int n_phi = 64) {
    if (p.n != 3) throw std::domain_error("ball_dirichlet_solve: only n = 3 supported");
    const double d = (y - p.center).norm();
    if (d >= p.radius) throw std::domain_error("ball_dirichlet_solve: y not interior");
    SphereRule sph = sphere_rule(n_theta, n_phi);
    const double r = p.radius;
    double acc = 0.0;
    for (size_t i = 0; i < sph.points.size(); ++i) {
        Vec x = p.center;
        x[0] += r * sph.points[i][0];
        x[1] += r * sph.points[i][1];
        x[2] += r * sph.points[i][2];
        const double dist = (x - y).norm();
        // dS = r^2 dS1
        acc += sph.weights[i] * r * r * p.data(x) / (dist * dist * dist);
    }
    return (r * r - d * d) / (4 * M_PI * r) * acc;
}

/// Sphere average of the boundary data (the value at the center).
inline double sphere_average(const BallProblem& p, int n_theta = 32, int n_phi = 64) {
    SphereRule sph = sphere_rule(n_theta, n_phi);
    double acc = 0.0;
    for (size_t i = 0; i < sph.points.size(); ++i) {
        Vec x = p.center;
        x[0] += p.radius * sph.points[i][0];
        x[1] += p.radius * sph.points[i][1];
        x[2] += p.radius * sph.points[i][2];
        acc += sph.weights[i] * p.data(x);
    }
    return acc / (4 * M_PI);
}

/// Poisson-kernel normalization: the solve with unit data must return 1.
inline double poisson_kernel_mass(double radius, const Vec& y, int n_theta = 32,
                                  int n_phi = 64) {
    BallProblem p;
    p.radius = radius;
    p.center = Vec::Zero(3);
    p.data = [](const Vec&) { return 1.0; };
    return ball_dirichlet_solve(p, y, n_theta, n_phi);
}

// ---------------------------------------------------------------------------
// Normal-derivative recovery: given lambda = dh/drho on the sphere with zero
// mean, h(y) = int_0^1 phi(c + s(y - c)) / s ds where phi is the harmonic
// extension of lambda; h(center) = 0 fixes the additive constant.
// ---------------------------------------------------------------------------
inline double ball_neumann_recover(const BallProblem& p, const Vec& y, int radial_nodes = 32,
                                   int n_theta = 32, int n_phi = 64, double mean_tol = 1e-6) {
    if (std::abs(sphere_average(p, n_theta, n_phi)) > mean_tol)
        throw std::domain_error("ball_neumann_recover: boundary data must have zero mean");
    if ((y - p.center).norm() < 1e-14) return 0.0;
    QuadRule gl = gauss_legendre(radial_nodes, 0.0, 1.0);
    double h = 0.0;
    for (int k = 0; k < radial_nodes; ++k) {
        const double s = gl.nodes[k];
        Vec ys = p.center + s * (y - p.center);
        h += gl.weights[k] * ball_dirichlet_solve(p, ys, n_theta, n_phi) / s;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Nonlinear elliptic fixed point on a ball (n = 3):
//   u_{k+1}(x) = C int_B f(y, u_k(y)) |y - x|^{2-n} dy,  C = 1/((2-n)|S1|).
// Iterates live on a Cartesian lattice over the ball, trilinear interpolation.
// ---------------------------------------------------------------------------
struct EllipticPicardResult {
    double radius = 0.0;
    int lattice_n = 0;          // nodes per axis
    std::vector<double> values; // row-major over (i, j, k)
    std::vector<double> gaps;   // sup gap per iteration
    double rho = 0.0;           // contraction ratio bound
    bool contracted = false;

    double spacing() const { return 2 * radius / (lattice_n - 1); }

    double eval(const Vec& x) const {
        const int n = lattice_n;
        const double h = spacing();
        double fi = (x[0] + radius) / h, fj = (x[1] + radius) / h, fk = (x[2] + radius) / h;
        auto clampf = [&](double v) { return std::min(std::max(v, 0.0), n - 1.000001); };
        fi = clampf(fi);
        fj = clampf(fj);
        fk = clampf(fk);
        const int i = static_cast<int>(fi), j = static_cast<int>(fj), k = static_cast<int>(fk);
        const double a = fi - i, b = fj - j, c = fk - k;
        auto V = [&](int ii, int jj, int kk) {
            return values[(static_cast<size_t>(ii) * n + jj) * n + kk];
        };
        return (1 - a) * ((1 - b) * ((1 - c) * V(i, j, k) + c * V(i, j, k + 1))
                          + b * ((1 - c) * V(i, j + 1, k) + c * V(i, j + 1, k + 1)))
               + a * ((1 - b) * ((1 - c) * V(i + 1, j, k) + c * V(i + 1, j, k + 1))
                      + b * ((1 - c) * V(i + 1, j + 1, k) + c * V(i + 1, j + 1, k + 1)));
    }
};

inline EllipticPicardResult nonlinear_elliptic_picard(
    const std::function<double(const Vec&, double)>& f, double b_radius, double lipschitz,
    int lattice_n, int iterations, int n_r = 16, int n_theta = 8, int n_phi = 16) {
    const int n = 3;
    const double Chat = 1.0 / ((2 - n) * 4 * M_PI);  // -1/(4 pi)
    // K0 = |C| sup_x int_B |y-x|^{-1} dy, maximized at the center: 2 pi b^2
    const double K0 = std::abs(Chat) * 2 * M_PI * b_radius * b_radius;
    EllipticPicardResult res;
    res.rho = lipschitz * K0;
    if (res.rho >= 0.5)
        throw HypothesisError("nonlinear_elliptic_picard: contraction bound rho >= 1/2");

    res.radius = b_radius;
    res.lattice_n = lattice_n;
    res.values.assign(static_cast<size_t>(lattice_n) * lattice_n * lattice_n, 0.0);

    SphereRule sph = sphere_rule(n_theta, n_phi);
    const double h = res.spacing();
    for (int it = 0; it < iterations; ++it) {
        std::vector<double> next(res.values.size(), 0.0);
        double gap = 0.0;
        for (int i = 0; i < lattice_n; ++i)
            for (int j = 0; j < lattice_n; ++j)
                for (int k = 0; k < lattice_n; ++k) {
                    Vec x(3);
                    x[0] = -b_radius + i * h;
                    x[1] = -b_radius + j * h;
                    x[2] = -b_radius + k * h;
                    if (x.norm() > b_radius) continue;
                    // int_B f/|y-x| = int_0^L r dr int_S f(x + r w) dS1
                    const double L = x.norm() + b_radius;
                    QuadRule gl = gauss_legendre(n_r, 0.0, L);
                    double acc = 0.0;
                    for (int q = 0; q < n_r; ++q) {
                        const double r = gl.nodes[q];
                        double shell = 0.0;
                        for (size_t s = 0; s < sph.points.size(); ++s) {
                            Vec yq = x;
                            yq[0] += r * sph.points[s][0];
                            yq[1] += r * sph.points[s][1];
                            yq[2] += r * sph.points[s][2];
                            if (yq.norm() <= b_radius)
                                shell += sph.weights[s] * f(yq, res.eval(yq));
                        }
                        acc += gl.weights[q] * r * shell;
                    }
                    const size_t flat = (static_cast<size_t>(i) * lattice_n + j) * lattice_n + k;
                    next[flat] = Chat * acc;
                    gap = std::max(gap, std::abs(next[flat] - res.values[flat]));
                }
        res.values.swap(next);
        res.gaps.push_back(gap);
        if (it >= 1 && res.gaps[it] > res.gaps[it - 1] * std::max(res.rho, 0.9) + 1e-14)
            throw NonConvergenceError("nonlinear_elliptic_picard: gaps not contracting",
                                      res.gaps[it]);
    }
    res.contracted = res.gaps.size() < 2
                     || res.gaps.back() <= res.gaps.front() * std::pow(std::max(res.rho, 1e-3),
                                                                       double(res.gaps.size() - 1))
                            + 1e-10;
    return res;
}

}  // namespace pdekit
