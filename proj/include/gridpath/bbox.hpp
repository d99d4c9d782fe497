#pragma once

#include "gridpath/grid.hpp"
#include "gridpath/solvers.hpp"

#include <utility>

namespace gridpath {

/// lambda trades gradient informativeness against interpolation faithfulness.
/// weight_floor is the positivity floor applied to perturbed weights before
/// the backward re-solve.
struct BlackboxConfig {
    double lambda = 20.0;
    double weight_floor = 1e-3;
};

/// Saved forward-pass state for the blackbox backward pass.
struct ForwardContext {
    WeightGrid w_hat;
    PathMask y_hat;
    SolverStats stats;
    SolverId solver_id = SolverId::Dijkstra;
    ExpansionMask expanded;
    GridProblem problem;
};

/// Exact solve; returns the mask and the context needed by bb_backward.
std::pair<PathMask, ForwardContext> bb_forward(const WeightGrid& weights,
                                               const GridProblem& problem,
                                               SolverId solver,
                                               const BlackboxConfig& cfg);

struct BackwardResult {
    GradGrid grad_weights;
    SolverStats perturbed_stats;  // the re-solve is the cost of the backward pass
};

/// Perturbed re-solve: w' = clamp(w_hat + lambda * upstream, weight_floor),
/// y_lambda = solve(w'), grad = -(1/lambda) * (y_hat - y_lambda) elementwise.
BackwardResult bb_backward(const ForwardContext& ctx,
                           const GradGrid& upstream,
                           const BlackboxConfig& cfg);

/// f(y) = L(y_hat) + <upstream, y - y_hat>.
double linearized_loss(const ForwardContext& ctx,
                       double loss_at_yhat,
                       const GradGrid& upstream,
                       const PathMask& y);

/// Interpolated loss value
/// f_lambda(w) = f(y_lambda(w)) - (1/lambda) [ c(w, y(w)) - c(w, y_lambda(w)) ].
/// Test instrumentation only; not used on the training path.
double f_lambda_value(const WeightGrid& weights,
                      const ForwardContext& ctx,
                      const BlackboxConfig& cfg,
                      double loss_at_yhat,
                      const GradGrid& upstream);

}  // namespace gridpath
