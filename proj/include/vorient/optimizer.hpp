#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "vorient/objective.hpp"

namespace vorient {

struct OptimizerConfig {
    int max_iterations = 200;
    double termination_delta = 1.0;  // on delta_scale * f between accepted steps
    double delta_scale = 1.0;        // orient_normals sets this to N
    int lbfgs_history = 10;
    double wolfe_c1 = 1e-4;
    double wolfe_c2 = 0.9;
    std::uint64_t seed = 0;
};

struct LbfgsTrace {
    std::vector<double> objective_values;  // accepted values, including start
    std::vector<double> gradient_norms;
    int iterations = 0;
    int evaluations = 0;
    std::string termination_reason;
};

// evaluate(x, grad) returns f(x) and fills grad (same size as x).
using EvalFn = std::function<double(const std::vector<double>&, std::vector<double>&)>;

// Called for the initial point (iteration 0) and after every accepted step.
using AcceptFn = std::function<void(int iteration, const std::vector<double>& x, double f,
                                    double grad_norm)>;

// Limited-memory BFGS with two-loop recursion and a strong Wolfe line
// search. Curvature pairs with y.s <= 1e-12 are skipped. When the line
// search fails, one steepest-descent step with Armijo backtracking is tried
// before giving up.
std::vector<double> lbfgs_minimize(std::vector<double> initial, const EvalFn& evaluate,
                                   const OptimizerConfig& cfg, LbfgsTrace* trace = nullptr,
                                   const AcceptFn& on_accept = nullptr);

struct OrientationTrace {
    struct Entry {
        double total, f01, fb, fa;
        double gradient_norm;
        double seconds;  // wall time since start of run
    };
    std::vector<Entry> entries;
    int iterations = 0;
    int evaluations = 0;
    std::string termination_reason;
};

using ProgressFn = std::function<void(int iteration, const ObjectiveValue&, double grad_norm)>;

// Full orientation run: random init (or warm start from cloud normals when
// present), L-BFGS to termination, final angles canonicalized to u in
// [0, pi], v in [-pi, pi).
PointCloud orient_normals(const PointCloud& cloud, const VoronoiStructure& vor,
                          const ObjectiveParams& params, const OptimizerConfig& cfg,
                          OrientationTrace* out_trace = nullptr,
                          const ProgressFn& progress = nullptr);

}  // namespace vorient
