#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace pdekit {

struct QuadRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    double integrate(const std::function<double(double)>& f) const {
        double s = 0.0;
        for (size_t i = 0; i < nodes.size(); ++i) s += weights[i] * f(nodes[i]);
        return s;
    }
};

/// Composite trapezoid on [a, b] with n intervals.
inline QuadRule trapezoid_rule(double a, double b, int n) {
    if (n < 1) throw std::domain_error("trapezoid_rule: n >= 1 required");
    QuadRule r;
    const double h = (b - a) / n;
    r.nodes.resize(n + 1);
    r.weights.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        r.nodes[i] = a + i * h;
        r.weights[i] = (i == 0 || i == n) ? h / 2 : h;
    }
    return r;
}

/// Cumulative trapezoid of samples f_i on a uniform grid; out[0] = 0.
inline std::vector<double> cumulative_trapezoid(const std::vector<double>& f, double h) {
    std::vector<double> out(f.size(), 0.0);
    for (size_t i = 1; i < f.size(); ++i)
        out[i] = out[i - 1] + 0.5 * h * (f[i - 1] + f[i]);
    return out;
}

/// Gauss-Legendre nodes/weights on [-1, 1], by Newton on the Legendre polynomial.
inline QuadRule gauss_legendre(int n) {
    if (n < 1) throw std::domain_error("gauss_legendre: n >= 1 required");
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        // Chebyshev initial guess.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < n; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.nodes[i] = x;
        r.weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

/// Gauss-Legendre mapped to [a, b].
inline QuadRule gauss_legendre(int n, double a, double b) {
    QuadRule base = gauss_legendre(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < n; ++i) {
        base.nodes[i] = mid + half * base.nodes[i];
        base.weights[i] *= half;
    }
    return base;
}

/// Gauss-Hermite rule for \int f(z) exp(-z^2) dz, by Golub-Welsch.
inline QuadRule gauss_hermite(int n) {
    if (n < 1) throw std::domain_error("gauss_hermite: n >= 1 required");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n - 1; ++i) {
        const double off = std::sqrt((i + 1) / 2.0);
        J(i, i + 1) = off;
        J(i + 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    QuadRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double mu0 = std::sqrt(M_PI);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = es.eigenvalues()[i];
        const double v = es.eigenvectors()(0, i);
        r.weights[i] = mu0 * v * v;
    }
    return r;
}

/// Product rule on the unit sphere S^2: Gauss-Legendre in cos(theta) x uniform phi.
/// Weights sum to 4*pi.
struct SphereRule {
    std::vector<std::array<double, 3>> points;
    std::vector<double> weights;
};

inline SphereRule sphere_rule(int n_theta, int n_phi) {
    SphereRule r;
    QuadRule gl = gauss_legendre(n_theta, -1.0, 1.0);  // cos(theta)
    const double dphi = 2.0 * M_PI / n_phi;
    for (int i = 0; i < n_theta; ++i) {
        const double c = gl.nodes[i];
        const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            r.points.push_back({s * std::cos(phi), s * std::sin(phi), c});
            r.weights.push_back(gl.weights[i] * dphi);
        }
    }
    return r;
}

}  // namespace pdekit
