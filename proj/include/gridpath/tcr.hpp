#pragma once

#include "gridpath/grid.hpp"
#include "gridpath/solvers.hpp"

namespace gridpath {

/// How solver time is measured.
/// ExpansionsNormalized: expansions / k^2, deterministic, in [1/k^2, 1].
/// WallSeconds: measured wall time, not reproducible across machines.
/// WorkNormalized: (pq pops + pushes + heuristic evals) / k^2, deterministic;
/// unlike raw expansions this charges A* for its per-node overhead.
enum class TimeUnit { ExpansionsNormalized, WallSeconds, WorkNormalized };

/// Monitor: time cost enters the reported loss only, weight gradient is zero.
/// Contrast: surrogate gradient that raises expanded-but-off-path weights.
enum class TcrGradMode { Monitor, Contrast };

struct TimeCostConfig {
    double lambda_t = 0.0;
    TimeUnit unit = TimeUnit::ExpansionsNormalized;
    TcrGradMode grad_mode = TcrGradMode::Monitor;
    double kappa = 0.0;  // surrogate scale; 0 means the 1/k^2 default

    double kappa_for(Eigen::Index k) const {
        return kappa > 0.0 ? kappa : 1.0 / static_cast<double>(k * k);
    }
};

/// Solver duration of one run in the configured unit.
double time_cost(const SolverStats& stats, Eigen::Index k, const TimeCostConfig& cfg);

/// The regularization term lambda_t * t.
double tcr_term(double t, const TimeCostConfig& cfg);

/// Weight-space surrogate gradient. Monitor mode: all zeros. Contrast mode:
/// grad_i = -lambda_t * kappa * (expanded_i - path_i); a descent step then
/// raises weights of expanded-but-off-path cells, pruning exploration.
GradGrid tcr_weight_grad(const ExpansionMask& expanded,
                         const PathMask& path,
                         const TimeCostConfig& cfg);

}  // namespace gridpath
