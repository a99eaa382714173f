#pragma once

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "pdekit/csv.hpp"
#include "pdekit/expr.hpp"
#include "pdekit/first_order.hpp"
#include "pdekit/fourier.hpp"
#include "pdekit/heat.hpp"
#include "pdekit/maxprinciple.hpp"
#include "pdekit/ode.hpp"
#include "pdekit/potential.hpp"
#include "pdekit/stochastic.hpp"
#include "pdekit/wave.hpp"

namespace pdekit {

class ParseError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Line-oriented problem files: [section] headers, key = value lines,
// '#' comments.
// ---------------------------------------------------------------------------
struct ProblemFile {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        return s != sections.end() && s->second.count(key) > 0;
    }
    std::string get(const std::string& sec, const std::string& key) const {
        auto s = sections.find(sec);
        if (s == sections.end() || !s->second.count(key))
            throw ParseError("missing key [" + sec + "] " + key);
        return s->second.at(key);
    }
    std::string get_or(const std::string& sec, const std::string& key,
                       const std::string& fallback) const {
        return has(sec, key) ? get(sec, key) : fallback;
    }
    double num(const std::string& sec, const std::string& key) const {
        const std::string v = get(sec, key);
        try {
            size_t used = 0;
            const double d = std::stod(v, &used);
            if (used != v.size()) throw ParseError("bad number");
            return d;
        } catch (const std::exception&) {
            throw ParseError("bad numeric value for [" + sec + "] " + key + ": " + v);
        }
    }
    double num_or(const std::string& sec, const std::string& key, double fallback) const {
        return has(sec, key) ? num(sec, key) : fallback;
    }
    int integer(const std::string& sec, const std::string& key) const {
        const double d = num(sec, key);
        if (d != std::floor(d)) throw ParseError("expected integer for " + key);
        return static_cast<int>(d);
    }
    int integer_or(const std::string& sec, const std::string& key, int fallback) const {
        return has(sec, key) ? integer(sec, key) : fallback;
    }
    Expr expr(const std::string& sec, const std::string& key) const {
        try {
            return Expr::parse(get(sec, key));
        } catch (const ExprError& e) {
            throw ParseError("bad expression for [" + sec + "] " + key + ": " + e.what());
        }
    }
};

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

inline ProblemFile parse_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open problem file: " + path);
    ProblemFile pf;
    std::string line, section = "problem";
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ParseError("line " + std::to_string(lineno) + ": bad section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
        pf.sections[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return pf;
}

inline std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            throw ParseError("bad list entry: " + tok);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Run reports and dispatch.  Exit codes: 0 success, 2 solver failure or failed
// check, 3 parse/usage error.
// ---------------------------------------------------------------------------
struct RunReport {
    int exit_code = 0;
    std::string message;
    std::vector<std::string> outputs;
};

namespace detail {

inline TimeGrid grid_from(const ProblemFile& pf, const std::string& sec,
                          const std::string& prefix) {
    return TimeGrid(pf.num(sec, prefix + "0"), pf.num(sec, prefix + "1"),
                    pf.integer(sec, "n" + prefix));
}

inline std::string out_path(const ProblemFile& pf, const std::string& override_path) {
    if (!override_path.empty()) return override_path;
    return pf.get_or("output", "file", "out.csv");
}

}  // namespace detail

inline RunReport run_solve(const ProblemFile& pf, const std::string& out_override = "") {
    RunReport rep;
    const std::string kind = pf.get("problem", "kind");
    const std::string out = detail::out_path(pf, out_override);

    if (kind == "heat") {
        Expr phi = pf.expr("problem", "phi");
        const double t = pf.num("problem", "t");
        TimeGrid xg = detail::grid_from(pf, "grid", "x");
        CsvWriter csv(out);
        csv.header({"x", "u"});
        for (int i = 0; i < xg.size(); ++i) {
            const double x = xg.node(i);
            const double u = heat_solve1d(
                [&phi](double xi) {
                    ExprEnv env;
                    env.x = xi;
                    return phi.eval(env);
                },
                t, x);
            csv.row({x, u});
        }
        rep.outputs.push_back(out);
    } else if (kind == "dalembert") {
        WaveProblem wp(1, pf.num_or("problem", "c0", 1.0));
        Expr u0 = pf.expr("problem", "u0");
        Expr u1 = pf.expr("problem", "u1");
        wp.u0 = [u0](const Vec& x) {
            ExprEnv env;
            env.x = x[0];
            return u0.eval(env);
        };
        wp.u1 = [u1](const Vec& x) {
            ExprEnv env;
            env.x = x[0];
            return u1.eval(env);
        };
        const double t = pf.num("problem", "t");
        TimeGrid xg = detail::grid_from(pf, "grid", "x");
        CsvWriter csv(out);
        csv.header({"x", "u"});
        for (int i = 0; i < xg.size(); ++i)
            csv.row({xg.node(i), dalembert_solve(wp, t, xg.node(i))});
        rep.outputs.push_back(out);
    } else if (kind == "kirchhoff" || kind == "duhamel") {
        WaveProblem wp(3, pf.num_or("problem", "c0", 1.0));
        Vec P = vec3(pf.num("problem", "px"), pf.num("problem", "py"),
                     pf.num("problem", "pz"));
        const double t = pf.num("problem", "t");
        double u = 0.0;
        if (kind == "kirchhoff") {
            Expr u0 = pf.expr("problem", "u0");
            Expr u1 = pf.expr("problem", "u1");
            wp.u0 = [u0](const Vec& q) {
                ExprEnv env;
                env.x = q[0];
                env.y = q[1];
                env.z = q[2];
                return u0.eval(env);
            };
            wp.u1 = [u1](const Vec& q) {
                ExprEnv env;
                env.x = q[0];
                env.y = q[1];
                env.z = q[2];
                return u1.eval(env);
            };
            u = kirchhoff_solve(wp, t, P);
        } else {
            Expr f = pf.expr("problem", "f");
            wp.f = [f](double s, const Vec& q) {
                ExprEnv env;
                env.t = s;
                env.x = q[0];
                env.y = q[1];
                env.z = q[2];
                return f.eval(env);
            };
            u = duhamel_solve(wp, t, P);
        }
        CsvWriter csv(out);
        csv.header({"t", "px", "py", "pz", "u"});
        csv.row({t, P[0], P[1], P[2], u});
        rep.outputs.push_back(out);
    } else if (kind == "quasilinear_hj" || kind == "nonlinear_hj") {
        HJProblem prob;
        prob.tgrid = detail::grid_from(pf, "grid", "t");
        prob.xgrid = detail::grid_from(pf, "grid", "x");
        Expr u0 = pf.expr("problem", "u0");
        prob.u0 = [u0](double x) {
            ExprEnv env;
            env.x = x;
            return u0.eval(env);
        };
        SolutionTable table;
        if (kind == "quasilinear_hj") {
            prob.kind = HJProblem::Kind::quasilinear;
            Expr g = pf.expr("problem", "g");
            Expr L = pf.expr("problem", "L");
            prob.g = [g](double t, double x, double u) {
                ExprEnv env;
                env.t = t;
                env.x = x;
                env.u = u;
                return g.eval(env);
            };
            prob.L = [L](double t, double x, double u) {
                ExprEnv env;
                env.t = t;
                env.x = x;
                env.u = u;
                return L.eval(env);
            };
            table = solve_quasilinear_hj(prob);
        } else {
            prob.kind = HJProblem::Kind::nonlinear;
            Expr H = pf.expr("problem", "H");
            prob.H.H = [H](double t, double x, double u, double p) {
                ExprEnv env;
                env.t = t;
                env.x = x;
                env.u = u;
                env.p = p;
                return H.eval(env);
            };
            table = solve_nonlinear_hj(prob).u;
        }
        CsvWriter csv(out);
        csv.header({"t", "x", "u"});
        for (size_t i = 0; i < table.axes[0].size(); ++i)
            for (size_t j = 0; j < table.axes[1].size(); ++j)
                csv.row({table.axes[0][i], table.axes[1][j],
                         table.at(static_cast<int>(i), static_cast<int>(j))});
        rep.outputs.push_back(out);
    } else if (kind == "ball_dirichlet") {
        BallProblem bp;
        bp.radius = pf.num_or("problem", "radius", 1.0);
        Expr data = pf.expr("problem", "data");
        bp.data = [data](const Vec& q) {
            ExprEnv env;
            env.x = q[0];
            env.y = q[1];
            env.z = q[2];
            return data.eval(env);
        };
        Vec y = vec3(pf.num("problem", "yx"), pf.num("problem", "yy"),
                     pf.num("problem", "yz"));
        CsvWriter csv(out);
        csv.header({"yx", "yy", "yz", "u"});
        csv.row({y[0], y[1], y[2], ball_dirichlet_solve(bp, y)});
        rep.outputs.push_back(out);
    } else if (kind == "fourier_parabolic" || kind == "fourier_hyperbolic") {
        MixedBVP spec;
        spec.A = pf.num_or("problem", "A", 0.0);
        spec.B = pf.num_or("problem", "B", 1.0);
        spec.a = pf.num_or("problem", "a", 1.0);
        spec.J = pf.integer_or("problem", "J", 16);
        Expr phi0 = pf.expr("problem", "phi0");
        spec.phi0 = [phi0](double x) {
            ExprEnv env;
            env.x = x;
            return phi0.eval(env);
        };
        FourierSolution sol;
        if (kind == "fourier_parabolic") {
            spec.type = MixedBVP::Type::parabolic_dirichlet;
            spec.uA = pf.num_or("problem", "uA", 0.0);
            spec.uB = pf.num_or("problem", "uB", 0.0);
            sol = fourier_parabolic_solve(spec);
        } else {
            spec.type = MixedBVP::Type::hyperbolic_neumann;
            if (pf.has("problem", "phi1")) {
                Expr phi1 = pf.expr("problem", "phi1");
                spec.phi1 = [phi1](double x) {
                    ExprEnv env;
                    env.x = x;
                    return phi1.eval(env);
                };
            }
            sol = fourier_hyperbolic_solve(spec);
        }
        TimeGrid tg = detail::grid_from(pf, "grid", "t");
        SpaceGrid xg = detail::grid_from(pf, "grid", "x");
        SolutionTable table = sol.table(tg, xg);
        CsvWriter csv(out);
        csv.header({"t", "x", "u"});
        for (int i = 0; i < tg.size(); ++i)
            for (int j = 0; j < xg.size(); ++j)
                csv.row({tg.node(i), xg.node(j), table.at(i, j)});
        rep.outputs.push_back(out);
    } else if (kind == "ivp") {
        Expr f = pf.expr("problem", "f");
        FieldSpec fs([f](double t, const Vec& y) {
            ExprEnv env;
            env.t = t;
            env.x = y[0];
            Vec out(1);
            out[0] = f.eval(env);
            return out;
        });
        TimeGrid tg = detail::grid_from(pf, "grid", "t");
        Vec y0(1);
        y0[0] = pf.num("problem", "y0");
        auto traj = solve_ivp(fs, tg.t0, y0, tg);
        CsvWriter csv(out);
        csv.header({"t", "y"});
        for (int i = 0; i < tg.size(); ++i) csv.row({tg.node(i), traj.states[i][0]});
        rep.outputs.push_back(out);
    } else {
        throw ParseError("unknown solve kind: " + kind
                         + " (valid: heat, dalembert, kirchhoff, duhamel, quasilinear_hj, "
                           "nonlinear_hj, ball_dirichlet, fourier_parabolic, "
                           "fourier_hyperbolic, ivp)");
    }
    rep.message = "ok";
    return rep;
}

inline RunReport run_verify(const ProblemFile& pf, const std::string& out_override = "") {
    RunReport rep;
    const std::string kind = pf.get("problem", "kind");
    const std::string out = detail::out_path(pf, out_override);
    CsvWriter csv(out);
    rep.outputs.push_back(out);

    if (kind == "heat_kernel") {
        const double t = pf.num_or("problem", "t", 0.5);
        const double tol = pf.num_or("problem", "tol", 1e-8);
        const double residual = std::abs(heat_kernel_mass(t) - 1.0);
        csv.header({"t", "residual", "tol"});
        csv.row({t, residual, tol});
        rep.exit_code = residual <= tol ? 0 : 2;
        rep.message = "heat kernel mass residual " + csv_number(residual);
    } else if (kind == "poisson_kernel") {
        const double r = pf.num_or("problem", "radius", 1.0);
        const double tol = pf.num_or("problem", "tol", 1e-8);
        Vec y = vec3(pf.num_or("problem", "yx", 0.3), pf.num_or("problem", "yy", 0.1),
                     pf.num_or("problem", "yz", -0.2));
        const double residual = std::abs(poisson_kernel_mass(r, y) - 1.0);
        csv.header({"radius", "residual", "tol"});
        csv.row({r, residual, tol});
        rep.exit_code = residual <= tol ? 0 : 2;
        rep.message = "Poisson kernel mass residual " + csv_number(residual);
    } else if (kind == "liouville") {
        const int dim = pf.integer_or("problem", "dim", 2);
        Mat A(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j)
                A(i, j) = pf.num("problem",
                                 "a" + std::to_string(i + 1) + std::to_string(j + 1));
        TimeGrid tg = detail::grid_from(pf, "grid", "t");
        const double tol = pf.num_or("problem", "tol", 1e-6);
        auto Af = [A](double) { return A; };
        auto table = fundamental_matrix(Af, tg.t0, tg);
        auto check = liouville_check(Af, table, tol);
        csv.header({"max_rel_residual", "tol"});
        csv.row({check.max_rel_residual, tol});
        rep.exit_code = check.pass ? 0 : 2;
        rep.message = "Liouville residual " + csv_number(check.max_rel_residual);
    } else if (kind == "max_principle") {
        Expr u = pf.expr("problem", "u");
        const std::string mode = pf.get_or("problem", "mode", "heat");
        TimeGrid tg = detail::grid_from(pf, "grid", "t");
        SpaceGrid xg = detail::grid_from(pf, "grid", "x");
        SolutionTable table;
        table.axes = {tg.nodes(), xg.nodes()};
        table.values.resize(static_cast<size_t>(tg.size()) * xg.size());
        for (int i = 0; i < tg.size(); ++i)
            for (int j = 0; j < xg.size(); ++j) {
                ExprEnv env;
                env.t = tg.node(i);
                env.x = xg.node(j);
                table.at(i, j) = u.eval(env);
            }
        auto mpr = max_principle_check(table, mode == "harmonic"
                                                  ? MaxPrincipleKind::harmonic
                                                  : MaxPrincipleKind::heat);
        csv.header({"max", "min", "pass"});
        csv.row({mpr.max_value, mpr.min_value, mpr.pass ? 1.0 : 0.0});
        rep.exit_code = mpr.pass ? 0 : 2;
        rep.message = mpr.pass ? "extremes on the boundary" : "interior extreme witness found";
    } else {
        throw ParseError("unknown verify kind: " + kind
                         + " (valid: heat_kernel, poisson_kernel, liouville, max_principle)");
    }
    return rep;
}

inline RunReport run_converge(const ProblemFile& pf, const std::string& out_override = "",
                              std::uint64_t seed_override = 0, bool has_seed = false) {
    RunReport rep;
    const std::string kind = pf.get("problem", "kind");
    const std::string out = detail::out_path(pf, out_override);

    if (kind == "wong_zakai") {
        auto eps = parse_list(pf.get_or("problem", "eps", ""));
        if (eps.empty()) throw ParseError("wong_zakai: empty eps sweep");
        const int n_paths = pf.integer_or("problem", "n_paths", 500);
        const std::uint64_t seed =
            has_seed ? seed_override
                     : static_cast<std::uint64_t>(pf.num_or("problem", "seed", 12345));
        const double slope_min = pf.num_or("problem", "slope_min", 0.8);

        SDEProblem sde;
        sde.x0 = Vec::Ones(1);
        sde.T = pf.num_or("problem", "T", 1.0);
        sde.g.push_back(FieldSpec([](double, const Vec& x) { return x; },
                                  [](double, const Vec&) {
                                      Mat J(1, 1);
                                      J(0, 0) = 1.0;
                                      return J;
                                  }));
        auto study = wz_convergence_study(sde, eps, n_paths, seed, 2048,
                                          [](const WienerPath& w) {
                                              Vec v(1);
                                              v[0] = std::exp(w.w.back()[0]);
                                              return v;
                                          });
        CsvWriter csv(out);
        csv.header({"epsilon", "mse", "ci_low", "ci_high", "n_paths", "seed"});
        for (const auto& r : study.rows)
            csv.row({r.eps, r.mse, r.ci_low, r.ci_high, double(r.n_paths), double(r.seed)});
        rep.outputs.push_back(out);
        rep.exit_code = study.slope >= slope_min ? 0 : 2;
        rep.message = "slope " + csv_number(study.slope);
    } else if (kind == "wave_residual") {
        auto factors = parse_list(pf.get_or("problem", "factors", ""));
        if (factors.empty()) throw ParseError("wave_residual: empty refinement sweep");
        const double band_lo = pf.num_or("problem", "order_min", 1.7);
        const double band_hi = pf.num_or("problem", "order_max", 2.3);
        // speed != 1, otherwise u_tttt = u_xxxx and the truncation errors of the
        // two stencils cancel exactly
        const double c = pf.num_or("problem", "c0", 2.0);
        WaveProblem wp(1, c);
        wp.u0 = [](const Vec& x) { return std::cos(x[0]); };
        wp.u1 = [](const Vec&) { return 0.0; };
        const double t = 0.4, x = 0.3;
        std::vector<double> hs, residuals;
        for (double f : factors) {
            const double h = 0.1 / f;
            auto u = [&](double tt, double xx) { return dalembert_solve(wp, tt, xx); };
            const double utt = (u(t + h, x) - 2 * u(t, x) + u(t - h, x)) / (h * h);
            const double uxx = (u(t, x + h) - 2 * u(t, x) + u(t, x - h)) / (h * h);
            hs.push_back(h);
            residuals.push_back(std::abs(utt - c * c * uxx));
        }
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t i = 0; i < hs.size(); ++i) {
            const double lx = std::log(hs[i]), ly = std::log(std::max(residuals[i], 1e-300));
            sx += lx;
            sy += ly;
            sxx += lx * lx;
            sxy += lx * ly;
        }
        const double n = static_cast<double>(hs.size());
        const double order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CsvWriter csv(out);
        csv.header({"h", "residual"});
        for (size_t i = 0; i < hs.size(); ++i) csv.row({hs[i], residuals[i]});
        rep.outputs.push_back(out);
        rep.exit_code = (order >= band_lo && order <= band_hi) ? 0 : 2;
        rep.message = "order " + csv_number(order);
    } else {
        throw ParseError("unknown converge kind: " + kind
                         + " (valid: wong_zakai, wave_residual)");
    }
    return rep;
}

}  // namespace pdekit
