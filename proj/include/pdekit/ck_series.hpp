#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdekit {

using Rational = boost::multiprecision::cpp_rational;

// ---------------------------------------------------------------------------
// Dense bivariate polynomial over the rationals, truncated at total degree
// bound N in each variable: p = sum_{l,k <= N} c[l][k] t^l y^k.
// ---------------------------------------------------------------------------
class RatPoly2 {
public:
    RatPoly2() = default;
    explicit RatPoly2(int order) : order_(order), c_(order + 1, std::vector<Rational>(order + 1)) {}

    static RatPoly2 monomial(int order, int l, int k, const Rational& value = 1) {
        RatPoly2 p(order);
        if (l <= order && k <= order) p.c_[l][k] = value;
        return p;
    }

    int order() const { return order_; }
    const Rational& coeff(int l, int k) const { return c_[l][k]; }
    Rational& coeff(int l, int k) { return c_[l][k]; }

    RatPoly2& operator+=(const RatPoly2& o) {
        for (int l = 0; l <= order_; ++l)
            for (int k = 0; k <= order_; ++k) c_[l][k] += o.c_[l][k];
        return *this;
    }

    RatPoly2 operator*(const RatPoly2& o) const {
        RatPoly2 out(order_);
        for (int l = 0; l <= order_; ++l)
            for (int k = 0; k <= order_; ++k) {
                if (c_[l][k] == 0) continue;
                for (int l2 = 0; l + l2 <= order_; ++l2)
                    for (int k2 = 0; k + k2 <= order_; ++k2) {
                        if (o.c_[l2][k2] == 0) continue;
                        out.c_[l + l2][k + k2] += c_[l][k] * o.c_[l2][k2];
                    }
            }
        return out;
    }

    RatPoly2 dy() const {
        RatPoly2 out(order_);
        for (int l = 0; l <= order_; ++l)
            for (int k = 1; k <= order_; ++k) out.c_[l][k - 1] = Rational(k) * c_[l][k];
        return out;
    }

    RatPoly2 dt() const {
        RatPoly2 out(order_);
        for (int l = 1; l <= order_; ++l)
            for (int k = 0; k <= order_; ++k) out.c_[l - 1][k] = Rational(l) * c_[l][k];
        return out;
    }

    bool is_zero() const {
        for (const auto& row : c_)
            for (const auto& v : row)
                if (v != 0) return false;
        return true;
    }

    /// Zero through combined order n (all c_{lk} with l + k <= n vanish)?
    bool is_zero_through(int n) const {
        for (int l = 0; l <= order_; ++l)
            for (int k = 0; k <= order_; ++k)
                if (l + k <= n && c_[l][k] != 0) return false;
        return true;
    }

    double eval(double t, double y) const {
        double s = 0.0;
        for (int l = order_; l >= 0; --l) {
            double row = 0.0;
            for (int k = order_; k >= 0; --k)
                row = row * y + static_cast<double>(c_[l][k]);
            s = s * t + row;
        }
        return s;
    }

private:
    int order_ = 0;
    std::vector<std::vector<Rational>> c_;
};

// ---------------------------------------------------------------------------
// First-order evolution system with polynomial coefficients,
//   d_t u_i = sum_j A_ij(t,y) d_y u_j + sum_j B_ij(t,y) u_j + R_i(t,y),
// zero Cauchy data u_i(0,y) = 0.
// ---------------------------------------------------------------------------
struct CKSystem {
    int size = 0;
    std::vector<std::vector<RatPoly2>> A;  // size x size, empty polys allowed
    std::vector<std::vector<RatPoly2>> B;
    std::vector<RatPoly2> R;
};

struct SeriesSolution2D {
    int order = 0;
    std::vector<RatPoly2> components;

    double eval(int i, double t, double y) const { return components[i].eval(t, y); }
};

/// Computes the coefficient recursion (l+1) c_{l+1,k} = [t^l y^k] RHS exactly.
inline SeriesSolution2D ck_series_solve(const CKSystem& sys, int order) {
    if (order < 1) throw std::domain_error("ck_series_solve: order >= 1 required");
    if (sys.size < 1) throw std::domain_error("ck_series_solve: empty system");
    SeriesSolution2D sol;
    sol.order = order;
    sol.components.assign(sys.size, RatPoly2(order));

    auto rhs_component = [&](int i) {
        RatPoly2 out(order);
        for (int j = 0; j < sys.size; ++j) {
            if (!sys.A.empty() && !sys.A[i][j].is_zero())
                out += sys.A[i][j] * sol.components[j].dy();
            if (!sys.B.empty() && !sys.B[i][j].is_zero())
                out += sys.B[i][j] * sol.components[j];
        }
        if (!sys.R.empty()) out += sys.R[i];
        return out;
    };

    for (int l = 0; l < order; ++l) {
        for (int i = 0; i < sys.size; ++i) {
            RatPoly2 rhs = rhs_component(i);
            for (int k = 0; k <= order; ++k)
                sol.components[i].coeff(l + 1, k) = rhs.coeff(l, k) / Rational(l + 1);
        }
    }
    return sol;
}

/// Residual d_t u - RHS of the system; must vanish through combined order
/// order - 2 by construction.
inline bool ck_residual_vanishes(const CKSystem& sys, const SeriesSolution2D& sol,
                                 int through_order) {
    for (int i = 0; i < sys.size; ++i) {
        RatPoly2 res = sol.components[i].dt();
        RatPoly2 rhs(sol.order);
        for (int j = 0; j < sys.size; ++j) {
            if (!sys.A.empty() && !sys.A[i][j].is_zero())
                rhs += sys.A[i][j] * sol.components[j].dy();
            if (!sys.B.empty() && !sys.B[i][j].is_zero())
                rhs += sys.B[i][j] * sol.components[j];
        }
        if (!sys.R.empty()) rhs += sys.R[i];
        for (int l = 0; l <= sol.order; ++l)
            for (int k = 0; k <= sol.order; ++k)
                if (l + k <= through_order && res.coeff(l, k) != rhs.coeff(l, k))
                    return false;
    }
    return true;
}

// ---------------------------------------------------------------------------
// Majorant estimate: analytic-continuation radius T = rho / (16 M N) and the
// majorant surface W(t,x) = (1/2N)[rho - x - sqrt((rho-x)^2 - 4 M N rho t)].
// ---------------------------------------------------------------------------
struct MajorantEstimate {
    double M = 0, N = 0, rho = 0, T = 0;

    double W(double t, double x) const {
        if (!(std::abs(x) < std::sqrt(rho)) || !(t < T) || t < 0)
            throw std::domain_error("MajorantEstimate::W: outside declared domain");
        const double disc = (rho - x) * (rho - x) - 4 * M * N * rho * t;
        if (disc < 0) throw std::domain_error("MajorantEstimate::W: negative discriminant");
        return (rho - x - std::sqrt(disc)) / (2 * N);
    }
};

inline MajorantEstimate ck_majorant_radius(double M, double N, double rho) {
    if (M <= 0 || N <= 0 || rho <= 0)
        throw std::domain_error("ck_majorant_radius: M, N, rho must be positive");
    MajorantEstimate est;
    est.M = M;
    est.N = N;
    est.rho = rho;
    est.T = rho / (16 * M * N);
    return est;
}

}  // namespace pdekit
