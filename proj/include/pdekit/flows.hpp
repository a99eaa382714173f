#pragma once

#include <cmath>

#include "pdekit/ode.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Local flow of an autonomous field: integrate dz/ds = Y(z) from x over [0, t].
// Negative t integrates the reversed field.
// ---------------------------------------------------------------------------
struct FlowMap {
    FieldSpec field;
    double tol = 1e-10;
    double max_time = 100.0;
    int steps_per_unit = 400;
};

inline Vec flow(const FieldSpec& Y, double t, const Vec& x, int steps_per_unit = 400) {
    if (t == 0.0) return x;
    const double T = std::abs(t);
    const int n = std::max(8, static_cast<int>(std::ceil(T * steps_per_unit)));
    const double h = t / n;
    Vec z = x;
    FieldSpec f = Y;
    for (int i = 0; i < n; ++i) {
        z = detail::rk4_step(f, i * h, z, h);
        if (!z.allFinite()) throw DivergenceError("flow: trajectory blow-up", i * h);
    }
    return z;
}

inline Vec flow(const FlowMap& F, double t, const Vec& x) {
    if (std::abs(t) > F.max_time) throw std::domain_error("flow: |t| exceeds max flow time");
    return flow(F.field, t, x, F.steps_per_unit);
}

// ---------------------------------------------------------------------------
// Variational equation: dZ/ds = dY(z(s)) Z, Z(0) = I, alongside the base orbit.
// ---------------------------------------------------------------------------
inline Mat flow_jacobian(const FieldSpec& Y, double t, const Vec& lambda,
                         int steps_per_unit = 400, double singular_tol = 1e-12) {
    const int d = static_cast<int>(lambda.size());
    FieldSpec aug([&Y, d](double, const Vec& state) -> Vec {
        Vec z = state.head(d);
        Eigen::Map<const Mat> Z(state.data() + d, d, d);
        Vec out(d + d * d);
        out.head(d) = Y.rhs(0.0, z);
        Mat dZ = Y.jacobian_at(0.0, z) * Z;
        out.tail(d * d) = Eigen::Map<Vec>(dZ.data(), d * d);
        return out;
    });
    Vec state(d + d * d);
    state.head(d) = lambda;
    Mat I = Mat::Identity(d, d);
    state.tail(d * d) = Eigen::Map<Vec>(I.data(), d * d);

    if (t != 0.0) {
        const int n = std::max(8, static_cast<int>(std::ceil(std::abs(t) * steps_per_unit)));
        const double h = t / n;
        for (int i = 0; i < n; ++i) {
            state = detail::rk4_step(aug, i * h, state, h);
            if (!state.allFinite()) throw DivergenceError("flow_jacobian: blow-up", i * h);
        }
    }
    Mat Z = Eigen::Map<Mat>(state.data() + d, d, d);
    if (std::abs(Z.determinant()) < singular_tol)
        throw IntegrityError("flow_jacobian: singular variational matrix");
    return Z;
}

// ---------------------------------------------------------------------------
// Lie bracket [Y1, Y2](x) = dY1(x) Y2(x) - dY2(x) Y1(x).
// ---------------------------------------------------------------------------
inline Vec lie_bracket(const FieldSpec& Y1, const FieldSpec& Y2, const Vec& x) {
    return Y1.jacobian_at(0.0, x) * Y2.rhs(0.0, x) - Y2.jacobian_at(0.0, x) * Y1.rhs(0.0, x);
}

// ---------------------------------------------------------------------------
// Pairwise bracket test over a sampled box; true iff all brackets vanish to tol.
// ---------------------------------------------------------------------------
struct CommutationReport {
    bool commute = false;
    double worst = 0.0;
    int worst_i = -1, worst_j = -1;
    Vec worst_point;
};

inline CommutationReport commutation_test(const std::vector<FieldSpec>& fields,
                                          const std::vector<Vec>& sample_points, double tol) {
    if (fields.size() < 2) throw std::domain_error("commutation_test: need at least two fields");
    CommutationReport rep;
    for (size_t i = 0; i < fields.size(); ++i)
        for (size_t j = i + 1; j < fields.size(); ++j)
            for (const Vec& x : sample_points) {
                const double mag = lie_bracket(fields[i], fields[j], x)
                                       .lpNorm<Eigen::Infinity>();
                if (mag > rep.worst) {
                    rep.worst = mag;
                    rep.worst_i = static_cast<int>(i);
                    rep.worst_j = static_cast<int>(j);
                    rep.worst_point = x;
                }
            }
    rep.commute = rep.worst <= tol;
    return rep;
}

/// Samples a centered box [-a_i, a_i]^d around x0 on a small lattice.
inline std::vector<Vec> box_samples(const Vec& x0, const Vec& half_widths, int per_axis = 3) {
    std::vector<Vec> out;
    const int d = static_cast<int>(x0.size());
    std::vector<int> idx(d, 0);
    while (true) {
        Vec x = x0;
        for (int k = 0; k < d; ++k)
            x[k] += half_widths[k] * (per_axis == 1 ? 0.0 : -1.0 + 2.0 * idx[k] / (per_axis - 1));
        out.push_back(x);
        int k = 0;
        for (; k < d; ++k) {
            if (++idx[k] < per_axis) break;
            idx[k] = 0;
        }
        if (k == d) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Orbit of an ordered family: G(p; x) = G_1(t_1) o ... o G_m(t_m) applied to x0,
// composed right to left.
// ---------------------------------------------------------------------------
struct OrbitSpec {
    std::vector<FieldSpec> fields;
    Vec box_half_widths;   // parameter box (-a_i, a_i)
    Vec x0;
};

inline Vec orbit(const OrbitSpec& spec, const Vec& p) {
    if (spec.fields.empty()) throw std::domain_error("orbit: empty field list");
    if (p.size() != static_cast<Eigen::Index>(spec.fields.size()))
        throw std::domain_error("orbit: parameter arity mismatch");
    for (int i = 0; i < p.size(); ++i)
        if (spec.box_half_widths.size() == p.size() && std::abs(p[i]) > spec.box_half_widths[i])
            throw std::domain_error("orbit: parameter outside box");
    Vec x = spec.x0;
    for (int i = static_cast<int>(spec.fields.size()) - 1; i >= 0; --i)
        x = flow(spec.fields[i], p[i], x);
    return x;
}

// ---------------------------------------------------------------------------
// Volume preservation: max |det flow_jacobian - 1| over samples, plus the
// measured divergence.  Pass requires both below tol.
// ---------------------------------------------------------------------------
struct VolumeReport {
    double max_det_defect = 0.0;
    double max_divergence = 0.0;
    bool pass = false;
};

inline VolumeReport volume_preservation_check(const FieldSpec& Y, double t,
                                              const std::vector<Vec>& sample_points,
                                              double tol) {
    VolumeReport rep;
    for (const Vec& x : sample_points) {
        rep.max_divergence = std::max(rep.max_divergence,
                                      std::abs(Y.jacobian_at(0.0, x).trace()));
        const double det = flow_jacobian(Y, t, x).determinant();
        rep.max_det_defect = std::max(rep.max_det_defect, std::abs(det - 1.0));
    }
    rep.pass = rep.max_det_defect <= tol && rep.max_divergence <= tol;
    return rep;
}

}  // namespace pdekit
