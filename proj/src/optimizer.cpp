#include "vorient/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace vorient {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

bool all_finite(double f, const std::vector<double>& g) {
    if (!std::isfinite(f)) return false;
    for (double v : g)
        if (!std::isfinite(v)) return false;
    return true;
}

struct Pair {
    std::vector<double> s, y;
    double rho;
};

// H0 = gamma*I two-loop recursion.
std::vector<double> two_loop(const std::deque<Pair>& history, const std::vector<double>& g) {
    std::vector<double> q = g;
    std::vector<double> alpha(history.size());
    for (std::size_t i = history.size(); i-- > 0;) {
        alpha[i] = history[i].rho * dot(history[i].s, q);
        for (std::size_t k = 0; k < q.size(); ++k) q[k] -= alpha[i] * history[i].y[k];
    }
    if (!history.empty()) {
        const Pair& last = history.back();
        double gamma = dot(last.s, last.y) / dot(last.y, last.y);
        for (double& v : q) v *= gamma;
    }
    for (std::size_t i = 0; i < history.size(); ++i) {
        double beta = history[i].rho * dot(history[i].y, q);
        for (std::size_t k = 0; k < q.size(); ++k)
            q[k] += (alpha[i] - beta) * history[i].s[k];
    }
    for (double& v : q) v = -v;
    return q;
}

struct LineSearchState {
    std::vector<double> x, g;
    double f;
    int evals = 0;
};

// Strong Wolfe line search (bracket + zoom). Returns the accepted step or 0
// on failure; ls is left at the last evaluated point on success.
double wolfe_search(const EvalFn& evaluate, const std::vector<double>& x0, double f0,
                    const std::vector<double>& g0, const std::vector<double>& d, double alpha0,
                    double c1, double c2, LineSearchState& ls) {
    const double dphi0 = dot(g0, d);
    if (dphi0 >= 0.0) return 0.0;

    auto phi = [&](double alpha) {
        ls.x.resize(x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i) ls.x[i] = x0[i] + alpha * d[i];
        ls.f = evaluate(ls.x, ls.g);
        ++ls.evals;
        return ls.f;
    };

    double alpha_prev = 0.0, f_prev = f0;
    double alpha = alpha0;
    double lo = 0.0, hi = 0.0, f_lo = f0;
    bool bracketed = false;

    for (int iter = 0; iter < 20 && !bracketed; ++iter) {
        double f = phi(alpha);
        double dphi = dot(ls.g, d);
        if (f > f0 + c1 * alpha * dphi0 || (iter > 0 && f >= f_prev)) {
            lo = alpha_prev;
            f_lo = f_prev;
            hi = alpha;
            bracketed = true;
            break;
        }
        if (std::fabs(dphi) <= -c2 * dphi0) return alpha;
        if (dphi >= 0.0) {
            lo = alpha;
            f_lo = f;
            hi = alpha_prev;
            bracketed = true;
            break;
        }
        alpha_prev = alpha;
        f_prev = f;
        alpha = std::min(2.0 * alpha, 1e8);
    }
    if (!bracketed) return 0.0;

    for (int iter = 0; iter < 40; ++iter) {
        alpha = 0.5 * (lo + hi);
        double f = phi(alpha);
        double dphi = dot(ls.g, d);
        if (f > f0 + c1 * alpha * dphi0 || f >= f_lo) {
            hi = alpha;
        } else {
            if (std::fabs(dphi) <= -c2 * dphi0) return alpha;
            if (dphi * (hi - lo) >= 0.0) hi = lo;
            lo = alpha;
            f_lo = f;
        }
        if (std::fabs(hi - lo) < 1e-16 * std::max(1.0, std::fabs(lo))) break;
    }
    return 0.0;
}

// Plain Armijo backtracking along d; fallback when Wolfe bracketing fails.
double armijo_search(const EvalFn& evaluate, const std::vector<double>& x0, double f0,
                     const std::vector<double>& g0, const std::vector<double>& d, double c1,
                     LineSearchState& ls) {
    const double dphi0 = dot(g0, d);
    if (dphi0 >= 0.0) return 0.0;
    double alpha = 1.0;
    for (int iter = 0; iter < 40; ++iter) {
        ls.x.resize(x0.size());
        for (std::size_t i = 0; i < x0.size(); ++i) ls.x[i] = x0[i] + alpha * d[i];
        ls.f = evaluate(ls.x, ls.g);
        ++ls.evals;
        if (ls.f <= f0 + c1 * alpha * dphi0) return alpha;
        alpha *= 0.5;
    }
    return 0.0;
}

}  // namespace

std::vector<double> lbfgs_minimize(std::vector<double> x, const EvalFn& evaluate,
                                   const OptimizerConfig& cfg, LbfgsTrace* trace,
                                   const AcceptFn& on_accept) {
    LbfgsTrace local;
    LbfgsTrace& tr = trace ? *trace : local;
    tr = LbfgsTrace{};

    std::vector<double> g(x.size());
    double f = evaluate(x, g);
    ++tr.evaluations;
    if (!all_finite(f, g)) {
        tr.termination_reason = "non-finite";
        return x;
    }
    tr.objective_values.push_back(f);
    tr.gradient_norms.push_back(norm(g));
    if (on_accept) on_accept(0, x, f, tr.gradient_norms.back());
    if (tr.gradient_norms.back() == 0.0) {
        tr.termination_reason = "stationary start";
        return x;
    }

    std::deque<Pair> history;
    int small_deltas = 0;  // a single flat step can precede a large drop
    for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
        std::vector<double> d = two_loop(history, g);
        if (dot(d, g) >= 0.0) {  // not a descent direction; reset
            history.clear();
            d = g;
            for (double& v : d) v = -v;
        }
        double alpha0 = history.empty() ? std::min(1.0, 1.0 / norm(g)) : 1.0;

        LineSearchState ls;
        double alpha = wolfe_search(evaluate, x, f, g, d, alpha0, cfg.wolfe_c1, cfg.wolfe_c2, ls);
        if (alpha == 0.0) {
            std::vector<double> sd = g;
            for (double& v : sd) v = -v;
            alpha = armijo_search(evaluate, x, f, g, sd, cfg.wolfe_c1, ls);
            history.clear();
            if (alpha == 0.0) {
                tr.evaluations += ls.evals;
                tr.termination_reason = "line-search failure";
                return x;
            }
        }
        tr.evaluations += ls.evals;

        if (!all_finite(ls.f, ls.g)) {
            tr.termination_reason = "non-finite";
            return x;
        }

        Pair pair;
        pair.s.resize(x.size());
        pair.y.resize(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            pair.s[i] = ls.x[i] - x[i];
            pair.y[i] = ls.g[i] - g[i];
        }
        double ys = dot(pair.y, pair.s);
        if (ys > 1e-12) {
            pair.rho = 1.0 / ys;
            history.push_back(std::move(pair));
            if (static_cast<int>(history.size()) > cfg.lbfgs_history) history.pop_front();
        }

        double f_prev = f;
        x = std::move(ls.x);
        g = std::move(ls.g);
        f = ls.f;
        ++tr.iterations;
        tr.objective_values.push_back(f);
        tr.gradient_norms.push_back(norm(g));
        if (on_accept) on_accept(tr.iterations, x, f, tr.gradient_norms.back());

        if (std::fabs(f_prev - f) * cfg.delta_scale < cfg.termination_delta) {
            if (++small_deltas >= 2) {
                tr.termination_reason = "converged";
                return x;
            }
        } else {
            small_deltas = 0;
        }
        if (tr.gradient_norms.back() == 0.0) {
            tr.termination_reason = "stationary";
            return x;
        }
    }
    tr.termination_reason = "iteration cap";
    return x;
}

PointCloud orient_normals(const PointCloud& cloud, const VoronoiStructure& vor,
                          const ObjectiveParams& params, const OptimizerConfig& cfg,
                          OrientationTrace* out_trace, const ProgressFn& progress) {
    const std::size_t n = cloud.size();
    if (!cloud.has_areas()) throw std::invalid_argument("orient_normals: areas not estimated");
    if (vor.cell_vertex_ids.size() != n)
        throw std::invalid_argument("orient_normals: structure/cloud size mismatch");

    std::vector<SphericalNormal> uv =
        cloud.has_normals() ? cloud.normals : random_init_normals(n, cfg.seed);

    ObjectiveState state(cloud, vor, params);
    OrientationTrace local;
    OrientationTrace& tr = out_trace ? *out_trace : local;
    tr = OrientationTrace{};
    auto start = std::chrono::steady_clock::now();

    std::vector<SphericalNormal> scratch(n);
    auto unpack = [&scratch, n](const std::vector<double>& x) -> const std::vector<SphericalNormal>& {
        for (std::size_t i = 0; i < n; ++i) scratch[i] = {x[2 * i], x[2 * i + 1]};
        return scratch;
    };

    EvalFn evaluate = [&](const std::vector<double>& x, std::vector<double>& grad) {
        const auto& vars = unpack(x);
        ObjectiveValue val = state.objective(vars);
        auto g = state.gradient(vars);
        grad.resize(2 * n);
        for (std::size_t i = 0; i < n; ++i) {
            grad[2 * i] = g[i][0];
            grad[2 * i + 1] = g[i][1];
        }
        return val.total;
    };

    std::vector<double> x0(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        x0[2 * i] = uv[i].u;
        x0[2 * i + 1] = uv[i].v;
    }

    OptimizerConfig run_cfg = cfg;
    run_cfg.delta_scale = static_cast<double>(n);

    // The last line-search evaluation is the accepted point, so recomposing
    // the term values here hits the state cache.
    AcceptFn on_accept = [&](int iter, const std::vector<double>& x, double /*f*/,
                             double grad_norm) {
        ObjectiveValue val = state.objective(unpack(x));
        OrientationTrace::Entry e;
        e.total = val.total;
        e.f01 = val.f01;
        e.fb = val.fb;
        e.fa = val.fa;
        e.gradient_norm = grad_norm;
        e.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        tr.entries.push_back(e);
        if (progress) progress(iter, val, grad_norm);
    };

    LbfgsTrace lt;
    std::vector<double> x = lbfgs_minimize(std::move(x0), evaluate, run_cfg, &lt, on_accept);

    tr.iterations = lt.iterations;
    tr.evaluations = lt.evaluations;
    tr.termination_reason = lt.termination_reason;

    if (tr.termination_reason == "non-finite")
        throw std::runtime_error("orient_normals: non-finite objective or gradient");

    PointCloud out = cloud;
    out.normals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        SphericalNormal sn = cartesian_to_spherical(spherical_to_cartesian({x[2 * i], x[2 * i + 1]}));
        if (sn.v >= 3.14159265358979323846) sn.v = -3.14159265358979323846;
        out.normals[i] = sn;
    }
    return out;
}

}  // namespace vorient
