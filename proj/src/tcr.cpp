#include "gridpath/tcr.hpp"

#include <stdexcept>

namespace gridpath {

double time_cost(const SolverStats& stats, Eigen::Index k, const TimeCostConfig& cfg) {
    const double cells = static_cast<double>(k * k);
    switch (cfg.unit) {
        case TimeUnit::WallSeconds:
            return stats.wall_seconds;
        case TimeUnit::ExpansionsNormalized:
            return static_cast<double>(stats.expansions) / cells;
        case TimeUnit::WorkNormalized:
            return static_cast<double>(stats.pq_pops + stats.pq_pushes + stats.heuristic_evals) /
                   cells;
    }
    throw std::logic_error("time_cost: unknown unit");
}

double tcr_term(double t, const TimeCostConfig& cfg) {
    if (t < 0.0) throw std::invalid_argument("tcr_term: time cost must be >= 0");
    return cfg.lambda_t * t;
}

GradGrid tcr_weight_grad(const ExpansionMask& expanded,
                         const PathMask& path,
                         const TimeCostConfig& cfg) {
    if (expanded.rows() != path.rows() || expanded.cols() != path.cols()) {
        throw std::invalid_argument("tcr_weight_grad: mask sides differ");
    }
    if (cfg.grad_mode == TcrGradMode::Monitor) {
        return GradGrid::Zero(expanded.rows(), expanded.cols());
    }
    const double kappa = cfg.kappa_for(expanded.rows());
    return -cfg.lambda_t * kappa * (expanded.cast<double>() - path.cast<double>());
}

}  // namespace gridpath
