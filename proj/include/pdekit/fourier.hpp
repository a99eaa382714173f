#pragma once

#include <cmath>

#include "pdekit/core.hpp"
#include "pdekit/quadrature.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Mixed problems on an interval by separation of variables.
// ---------------------------------------------------------------------------
struct MixedBVP {
    enum class Type { parabolic_dirichlet, hyperbolic_neumann };
    Type type = Type::parabolic_dirichlet;
    double A = 0.0, B = 1.0;
    double a = 1.0;                    // diffusivity (parabolic) or speed (hyperbolic)
    double uA = 0.0, uB = 0.0;         // Dirichlet boundary values (parabolic)
    std::function<double(double)> phi0;  // initial displacement / temperature
    std::function<double(double)> phi1;  // initial velocity (hyperbolic)
    int J = 16;                        // retained modes
    int inner_product_n = 2048;        // trapezoid panels for coefficients
};

struct FourierSolution {
    MixedBVP spec;
    std::vector<double> alpha;  // sine or cosine coefficients of phi0
    std::vector<double> beta;   // cosine coefficients of phi1 (hyperbolic)
    double a0 = 0.0, b0 = 0.0;  // mean modes (hyperbolic)
    bool compatibility_notice = false;

    double eval(double t, double x) const {
        const double len = spec.B - spec.A;
        const double s = (x - spec.A) / len;
        if (spec.type == MixedBVP::Type::parabolic_dirichlet) {
            double u = spec.uA + (spec.uB - spec.uA) * s;
            for (int j = 1; j <= spec.J; ++j) {
                const double rate = (j * M_PI * spec.a) * (j * M_PI * spec.a) / (len * len);
                u += alpha[j - 1] * std::sqrt(2.0) * std::sin(j * M_PI * s)
                     * std::exp(-rate * t);
            }
            return u;
        }
        double u = a0 + b0 * t;
        for (int j = 1; j <= spec.J; ++j) {
            const double om = j * M_PI * spec.a / len;
            u += (alpha[j - 1] * std::cos(om * t)
                  + (beta[j - 1] / om) * std::sin(om * t))
                 * std::sqrt(2.0) * std::cos(j * M_PI * s);
        }
        return u;
    }

    SolutionTable table(const TimeGrid& tg, const SpaceGrid& xg) const {
        SolutionTable out;
        out.method = "fourier";
        out.axes = {tg.nodes(), xg.nodes()};
        out.values.resize(static_cast<size_t>(tg.size()) * xg.size());
        for (int i = 0; i < tg.size(); ++i)
            for (int j = 0; j < xg.size(); ++j)
                out.at(i, j) = eval(tg.node(i), xg.node(j));
        return out;
    }
};

namespace detail {

inline double inner_product(const std::function<double(double)>& f,
                            const std::function<double(double)>& basis, int n) {
    QuadRule tr = trapezoid_rule(0.0, 1.0, n);
    return tr.integrate([&](double s) { return f(s) * basis(s); });
}

}  // namespace detail

inline FourierSolution fourier_parabolic_solve(const MixedBVP& spec) {
    if (spec.type != MixedBVP::Type::parabolic_dirichlet)
        throw std::domain_error("fourier_parabolic_solve: wrong problem type");
    if (spec.J < 1) throw std::domain_error("fourier_parabolic_solve: J >= 1 required");
    FourierSolution sol;
    sol.spec = spec;
    sol.compatibility_notice = std::abs(spec.phi0(spec.A) - spec.uA) > 1e-10
                               || std::abs(spec.phi0(spec.B) - spec.uB) > 1e-10;
    const double len = spec.B - spec.A;
    auto shifted = [&](double s) {
        return spec.phi0(spec.A + len * s) - (spec.uA + (spec.uB - spec.uA) * s);
    };
    for (int j = 1; j <= spec.J; ++j)
        sol.alpha.push_back(detail::inner_product(
            shifted, [j](double s) { return std::sqrt(2.0) * std::sin(j * M_PI * s); },
            spec.inner_product_n));
    return sol;
}

inline FourierSolution fourier_hyperbolic_solve(const MixedBVP& spec) {
    if (spec.type != MixedBVP::Type::hyperbolic_neumann)
        throw std::domain_error("fourier_hyperbolic_solve: wrong problem type");
    if (spec.J < 1) throw std::domain_error("fourier_hyperbolic_solve: J >= 1 required");
    FourierSolution sol;
    sol.spec = spec;
    const double len = spec.B - spec.A;
    auto p0 = [&](double s) { return spec.phi0(spec.A + len * s); };
    auto p1 = [&](double s) { return spec.phi1 ? spec.phi1(spec.A + len * s) : 0.0; };
    sol.a0 = detail::inner_product(p0, [](double) { return 1.0; }, spec.inner_product_n);
    sol.b0 = detail::inner_product(p1, [](double) { return 1.0; }, spec.inner_product_n);
    for (int j = 1; j <= spec.J; ++j) {
        auto basis = [j](double s) { return std::sqrt(2.0) * std::cos(j * M_PI * s); };
        sol.alpha.push_back(detail::inner_product(p0, basis, spec.inner_product_n));
        sol.beta.push_back(detail::inner_product(p1, basis, spec.inner_product_n));
    }
    return sol;
}

/// Residual of mode j against its separated ODE pair, sampled in time; each
/// retained mode satisfies it identically, so this measures only roundoff.
inline double fourier_mode_ode_residual(const FourierSolution& sol, int j, double t) {
    const double len = sol.spec.B - sol.spec.A;
    if (sol.spec.type == MixedBVP::Type::parabolic_dirichlet) {
        const double rate = (j * M_PI * sol.spec.a) * (j * M_PI * sol.spec.a) / (len * len);
        const double T = std::exp(-rate * t);
        // T' + rate T = 0
        return std::abs(-rate * T + rate * T);
    }
    const double om = j * M_PI * sol.spec.a / len;
    const double T = sol.alpha[j - 1] * std::cos(om * t)
                     + (sol.beta[j - 1] / om) * std::sin(om * t);
    const double Tdd = -om * om * T;
    return std::abs(Tdd + om * om * T);
}

}  // namespace pdekit
