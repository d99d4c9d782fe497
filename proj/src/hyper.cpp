#include "gridpath/hyper.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridpath {

double informativeness(const WeightGrid& weights) {
    if (!(weights > 0.0).all()) {
        throw std::invalid_argument("informativeness: weights must be strictly positive");
    }
    return weights.minCoeff() / weights.mean();
}

SolverId route(double choice, const WeightGrid& weights, const HyperConfig& cfg) {
    const bool choice_says_astar = choice >= cfg.threshold;
    switch (cfg.mode) {
        case HyperMode::LearnedChoice:
            return choice_says_astar ? SolverId::AStarMinChebyshev : SolverId::Dijkstra;
        case HyperMode::InternalDecision:
            return informativeness(weights) >= cfg.informativeness_threshold
                       ? SolverId::AStarMinChebyshev
                       : SolverId::Dijkstra;
        case HyperMode::Hybrid:
            return (choice_says_astar &&
                    informativeness(weights) >= cfg.informativeness_threshold)
                       ? SolverId::AStarMinChebyshev
                       : SolverId::Dijkstra;
    }
    throw std::logic_error("route: unknown hyper mode");
}

double choice_grad(double t_astar, double t_dijkstra, double lambda_t, bool probed) {
    if (lambda_t < 0.0) throw std::invalid_argument("choice_grad: lambda_t must be >= 0");
    if (!probed) return 0.0;
    return lambda_t * (t_astar - t_dijkstra);
}

double usage_ratio(const UsageCounter& counter) {
    if (counter.astar_count == 0 && counter.dijkstra_count == 0) {
        return std::numeric_limits<double>::quiet_NaN();  // nothing was routed
    }
    if (counter.astar_count == 0) return 0.0;
    if (counter.dijkstra_count == 0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(counter.astar_count) /
           static_cast<double>(counter.dijkstra_count);
}

}  // namespace gridpath
