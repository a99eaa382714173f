#pragma once

#include <Eigen/Dense>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdekit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// ---------------------------------------------------------------------------
// Error taxonomy.  domain_error covers precondition violations; the rest
// signal runtime breakdowns of a solver.
// ---------------------------------------------------------------------------

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string msg, double last_t)
        : std::runtime_error(std::move(msg)), last_valid_time(last_t) {}
    double last_valid_time;
};

class NonConvergenceError : public std::runtime_error {
public:
    NonConvergenceError(std::string msg, double gap)
        : std::runtime_error(std::move(msg)), last_gap(gap) {}
    double last_gap;
};

class IntegrityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

class CausticError : public std::runtime_error {
public:
    CausticError(std::string msg, double t_, double x_)
        : std::runtime_error(std::move(msg)), t(t_), x(x_) {}
    double t, x;
};

class HypothesisError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Uniform grid over [t0, t1] with n intervals.
// ---------------------------------------------------------------------------
struct TimeGrid {
    double t0 = 0.0;
    double t1 = 1.0;
    int n = 1;

    TimeGrid() = default;
    TimeGrid(double a, double b, int intervals) : t0(a), t1(b), n(intervals) {
        if (!(t1 > t0)) throw std::domain_error("TimeGrid: t1 must exceed t0");
        if (n < 1) throw std::domain_error("TimeGrid: need at least one interval");
    }

    double h() const { return (t1 - t0) / n; }
    int size() const { return n + 1; }
    double node(int i) const { return t0 + i * h(); }

    std::vector<double> nodes() const {
        std::vector<double> out(size());
        for (int i = 0; i < size(); ++i) out[i] = node(i);
        return out;
    }
};

using SpaceGrid = TimeGrid;

// ---------------------------------------------------------------------------
// A vector field / right-hand side with optional analytic Jacobian.
// ---------------------------------------------------------------------------
struct FieldSpec {
    using Rhs = std::function<Vec(double, const Vec&)>;
    using Jac = std::function<Mat(double, const Vec&)>;

    Rhs rhs;
    Jac jacobian;   // optional; finite differences used when absent
    std::string name;

    FieldSpec() = default;
    FieldSpec(Rhs f, std::string label = {}) : rhs(std::move(f)), name(std::move(label)) {}
    FieldSpec(Rhs f, Jac j, std::string label = {})
        : rhs(std::move(f)), jacobian(std::move(j)), name(std::move(label)) {}

    /// Autonomous helper: wraps a time-independent field.
    static FieldSpec autonomous(std::function<Vec(const Vec&)> f, std::string label = {}) {
        return FieldSpec([f = std::move(f)](double, const Vec& y) { return f(y); },
                         std::move(label));
    }

    // 4-point central differences, step 1e-5 * (1 + |x|).
    Mat jacobian_at(double t, const Vec& x) const {
        if (jacobian) return jacobian(t, x);
        const int n = static_cast<int>(x.size());
        const Vec f0 = rhs(t, x);
        const int m = static_cast<int>(f0.size());
        Mat J(m, n);
        for (int j = 0; j < n; ++j) {
            const double step = 1e-5 * (1.0 + std::abs(x[j]));
            Vec xp = x, xm = x, xp2 = x, xm2 = x;
            xp[j] += step;
            xm[j] -= step;
            xp2[j] += 2 * step;
            xm2[j] -= 2 * step;
            J.col(j) = (8.0 * (rhs(t, xp) - rhs(t, xm)) - (rhs(t, xp2) - rhs(t, xm2)))
                       / (12.0 * step);
        }
        return J;
    }
};

// Linear system dz/dx = A(x) z + b(x).
struct LinearSystemSpec {
    std::function<Mat(double)> A;
    std::function<Vec(double)> b;
    int dim = 0;

    FieldSpec as_field() const {
        auto Af = A;
        auto bf = b;
        return FieldSpec([Af, bf](double x, const Vec& z) -> Vec {
            Vec out = Af(x) * z;
            if (bf) out += bf(x);
            return out;
        });
    }
};

// ---------------------------------------------------------------------------
// Grid-sampled trajectory with provenance.
// ---------------------------------------------------------------------------
struct TrajectoryTable {
    TimeGrid grid;
    std::vector<Vec> states;   // one state per node
    std::string method;
    int iterations = 0;        // Picard iterations, when applicable
    bool nonuniqueness_flag = false;
    double last_gap = 0.0;

    const Vec& at(int i) const { return states.at(static_cast<size_t>(i)); }

    /// Linear interpolation between stored nodes.
    Vec interpolate(double t) const {
        const double h = grid.h();
        if (t <= grid.t0) return states.front();
        if (t >= grid.t1) return states.back();
        const int i = std::min(static_cast<int>((t - grid.t0) / h), grid.n - 1);
        const double w = (t - grid.node(i)) / h;
        return (1.0 - w) * states[i] + w * states[i + 1];
    }
};

struct FundamentalMatrixTable {
    double x0 = 0.0;
    TimeGrid grid;
    std::vector<Mat> matrices;      // C(x_i; x0)
    std::vector<double> determinants;

    const Mat& at(int i) const { return matrices.at(static_cast<size_t>(i)); }
};

struct StabilityReport {
    double w = 0.0;            // half the top eigenvalue of A + A^T
    double decay_rate = 0.0;   // gamma
    bool verdict = false;
    bool hurwitz_only = false; // Hurwitz spectrum but A + A^T indefinite
    std::vector<double> witness_norms;
    std::string note;
};

// Generic sampled solution on a product grid (time x space, or space only).
struct SolutionTable {
    std::vector<std::vector<double>> axes;   // coordinate values per axis
    std::vector<double> values;              // row-major over axes
    std::string method;
    double residual_norm = 0.0;

    size_t index(std::initializer_list<int> idx) const {
        size_t flat = 0;
        size_t k = 0;
        for (int i : idx) {
            flat = flat * axes[k].size() + static_cast<size_t>(i);
            ++k;
        }
        return flat;
    }
    double at(int i, int j) const { return values[index({i, j})]; }
    double& at(int i, int j) { return values[index({i, j})]; }
};

inline double sup_gap(const Vec& a, const Vec& b) {
    return (a - b).lpNorm<Eigen::Infinity>();
}

}  // namespace pdekit
