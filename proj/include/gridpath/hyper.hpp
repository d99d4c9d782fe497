#pragma once

#include "gridpath/grid.hpp"
#include "gridpath/solvers.hpp"

#include <cstdint>

namespace gridpath {

enum class HyperMode { LearnedChoice, InternalDecision, Hybrid };

struct HyperConfig {
    HyperMode mode = HyperMode::LearnedChoice;
    double threshold = 0.5;                  // choice >= threshold selects A*
    double informativeness_threshold = 0.3;  // theta for the internal weight scan
    double probe_probability = 0.25;         // chance of running both solvers
};

/// min(weights) / mean(weights), in (0, 1]; 1 iff the grid is uniform.
/// Low values mean the min-weight heuristic massively underestimates
/// remaining cost and will not prune.
double informativeness(const WeightGrid& weights);

/// Pick the internal solver for one instance.
/// LearnedChoice: A* iff choice >= threshold. InternalDecision: A* iff
/// informativeness(weights) >= theta. Hybrid: both conditions must hold.
SolverId route(double choice, const WeightGrid& weights, const HyperConfig& cfg);

/// Surrogate gradient for the choice parameter from a paired probe:
/// lambda_t * (t_astar - t_dijkstra) when both solvers ran, else 0.
/// Positive when A* was slower, pushing the choice toward Dijkstra.
double choice_grad(double t_astar, double t_dijkstra, double lambda_t, bool probed);

/// Per-epoch routing counts, reset at epoch boundaries.
struct UsageCounter {
    std::int64_t astar_count = 0;
    std::int64_t dijkstra_count = 0;
    void reset() { astar_count = dijkstra_count = 0; }
};

/// astar_count / dijkstra_count. Sentinels: +inf when only A* was used,
/// 0.0 when A* was never used, NaN when there were no routings at all.
double usage_ratio(const UsageCounter& counter);

}  // namespace gridpath
