#include "gridpath/bbox.hpp"

#include <stdexcept>

namespace gridpath {

std::pair<PathMask, ForwardContext> bb_forward(const WeightGrid& weights,
                                               const GridProblem& problem,
                                               SolverId solver,
                                               const BlackboxConfig& cfg) {
    if (cfg.lambda <= 0.0) throw std::invalid_argument("bb_forward: lambda must be positive");
    SolveResult res = run_solver(solver, weights, problem);
    ForwardContext ctx{weights, res.mask, res.stats, solver, res.expanded, problem};
    return {res.mask, std::move(ctx)};
}

BackwardResult bb_backward(const ForwardContext& ctx,
                           const GradGrid& upstream,
                           const BlackboxConfig& cfg) {
    if (upstream.rows() != ctx.w_hat.rows() || upstream.cols() != ctx.w_hat.cols()) {
        throw std::invalid_argument("bb_backward: upstream shape mismatch");
    }
    // The Hamming gradient is -1 on true-path cells, so the perturbation can
    // push weights negative; clamp to the floor to keep the re-solve
    // well-posed.
    WeightGrid perturbed = (ctx.w_hat + cfg.lambda * upstream).max(cfg.weight_floor);
    SolveResult re = run_solver(ctx.solver_id, perturbed, ctx.problem);
    BackwardResult out;
    out.grad_weights =
        -(ctx.y_hat.cast<double>() - re.mask.cast<double>()) / cfg.lambda;
    out.perturbed_stats = re.stats;
    return out;
}

double linearized_loss(const ForwardContext& ctx,
                       double loss_at_yhat,
                       const GradGrid& upstream,
                       const PathMask& y) {
    return loss_at_yhat +
           (upstream * (y.cast<double>() - ctx.y_hat.cast<double>())).sum();
}

double f_lambda_value(const WeightGrid& weights,
                      const ForwardContext& ctx,
                      const BlackboxConfig& cfg,
                      double loss_at_yhat,
                      const GradGrid& upstream) {
    const SolveResult y_w = run_solver(ctx.solver_id, weights, ctx.problem);
    WeightGrid perturbed = (ctx.w_hat + cfg.lambda * upstream).max(cfg.weight_floor);
    const SolveResult y_lambda = run_solver(ctx.solver_id, perturbed, ctx.problem);
    const double f_at_y_lambda = linearized_loss(ctx, loss_at_yhat, upstream, y_lambda.mask);
    const double c_yw = path_cost(weights, y_w.mask, ctx.problem.start);
    const double c_ylambda = path_cost(weights, y_lambda.mask, ctx.problem.start);
    return f_at_y_lambda - (c_yw - c_ylambda) / cfg.lambda;
}

}  // namespace gridpath
