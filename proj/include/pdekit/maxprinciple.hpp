#pragma once

#include <cmath>

#include "pdekit/core.hpp"

namespace pdekit {

// ---------------------------------------------------------------------------
// Symmetric positive-definite square root via orthogonal eigendecomposition.
// ---------------------------------------------------------------------------
inline Mat spd_sqrt(const Mat& A) {
    if ((A - A.transpose()).lpNorm<Eigen::Infinity>() > 1e-12)
        throw std::domain_error("spd_sqrt: matrix not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    if (es.eigenvalues().minCoeff() <= 0)
        throw std::domain_error("spd_sqrt: matrix not positive definite");
    return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal()
           * es.eigenvectors().transpose();
}

// ---------------------------------------------------------------------------
// Maximum-principle verdict on a sampled candidate.  The caller supplies the
// sample points, values, and which samples lie on the relevant boundary
// (spatial boundary for harmonic/elliptic, parabolic boundary for heat).
// ---------------------------------------------------------------------------
enum class MaxPrincipleKind { harmonic, heat, elliptic_A, parabolic_A };

struct MaxPrincipleReport {
    double max_value = 0.0, min_value = 0.0;
    bool max_on_boundary = false, min_on_boundary = false;
    bool pass = false;
    Vec max_witness, min_witness;  // offending interior point when a check fails
};

inline MaxPrincipleReport max_principle_check(const std::vector<Vec>& points,
                                              const std::vector<double>& values,
                                              const std::vector<bool>& on_boundary,
                                              MaxPrincipleKind kind = MaxPrincipleKind::harmonic,
                                              const Mat* A = nullptr,
                                              double tie_tol = 1e-12) {
    if (points.size() != values.size() || points.size() != on_boundary.size())
        throw std::domain_error("max_principle_check: size mismatch");
    if ((kind == MaxPrincipleKind::elliptic_A || kind == MaxPrincipleKind::parabolic_A)) {
        if (!A) throw std::domain_error("max_principle_check: kind requires A");
        spd_sqrt(*A);  // validates SPD; the change of coordinates x -> A^{1/2} x
                       // relabels points without moving extremes
    }
    MaxPrincipleReport rep;
    size_t imax = 0, imin = 0;
    for (size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[imax]) imax = i;
        if (values[i] < values[imin]) imin = i;
    }
    rep.max_value = values[imax];
    rep.min_value = values[imin];
    for (size_t i = 0; i < values.size(); ++i) {
        if (!on_boundary[i]) continue;
        if (values[i] >= rep.max_value - tie_tol) rep.max_on_boundary = true;
        if (values[i] <= rep.min_value + tie_tol) rep.min_on_boundary = true;
    }
    if (!rep.max_on_boundary) rep.max_witness = points[imax];
    if (!rep.min_on_boundary) rep.min_witness = points[imin];
    rep.pass = rep.max_on_boundary && rep.min_on_boundary;
    return rep;
}

/// Convenience wrapper for a (t, x) product table: the parabolic boundary is
/// t = 0 together with the spatial endpoints; for the harmonic kinds every
/// axis endpoint is boundary.
inline MaxPrincipleReport max_principle_check(const SolutionTable& table,
                                              MaxPrincipleKind kind,
                                              const Mat* A = nullptr) {
    const auto& ax0 = table.axes.at(0);
    const auto& ax1 = table.axes.at(1);
    std::vector<Vec> points;
    std::vector<double> values;
    std::vector<bool> boundary;
    const bool parabolic =
        kind == MaxPrincipleKind::heat || kind == MaxPrincipleKind::parabolic_A;
    for (size_t i = 0; i < ax0.size(); ++i)
        for (size_t j = 0; j < ax1.size(); ++j) {
            Vec p(2);
            p[0] = ax0[i];
            p[1] = ax1[j];
            points.push_back(p);
            values.push_back(table.values[i * ax1.size() + j]);
            const bool space_edge = j == 0 || j + 1 == ax1.size();
            const bool first_edge = i == 0;
            const bool last_edge = i + 1 == ax0.size();
            boundary.push_back(parabolic ? (first_edge || space_edge)
                                         : (first_edge || last_edge || space_edge));
        }
    return max_principle_check(points, values, boundary, kind, A);
}

}  // namespace pdekit
