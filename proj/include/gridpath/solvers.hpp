#pragma once

#include "gridpath/grid.hpp"

#include <cstdint>
#include <vector>

namespace gridpath {

enum class HeuristicKind { Zero, MinWeightChebyshev };

/// Instrumentation captured by one solver run.
///
/// expansions counts pops that settle an unsettled node; stale pops (lazy
/// decrease-key reinsertions) are not expansions. relaxations counts
/// successful g-value improvements. pq_pushes/pq_pops/heuristic_evals are
/// raw operation counts backing the deterministic work proxy.
/// Everything except wall_seconds is deterministic given identical inputs.
struct SolverStats {
    std::int64_t expansions = 0;
    std::int64_t relaxations = 0;
    std::int64_t pq_pushes = 0;
    std::int64_t pq_pops = 0;
    std::int64_t heuristic_evals = 0;
    double wall_seconds = 0.0;
};

struct SolveResult {
    PathMask mask;
    double cost = 0.0;
    SolverStats stats;
    ExpansionMask expanded;            // cells settled, includes every mask cell
    std::vector<Cell> expansion_order; // settle sequence, for degeneration tests
};

/// Dijkstra with deterministic tie-breaking: the queue orders by
/// (priority, insertion sequence number). Weights must be strictly positive.
SolveResult dijkstra(const WeightGrid& weights, const GridProblem& problem);

/// A* with lazy decrease-key and the same (priority, insertion sequence)
/// tie-breaking as dijkstra(). With HeuristicKind::Zero the expansion
/// sequence is identical to dijkstra's, not just equal in count.
SolveResult astar(const WeightGrid& weights, const GridProblem& problem, HeuristicKind h);

/// Minimum number of 8-neighbor moves between two cells: max(|dr|, |dc|).
Eigen::Index chebyshev_steps(Cell a, Cell b);

/// Admissible per-grid heuristic: chebyshev_steps(cell, goal) * min_weight,
/// where min_weight is the global minimum over all k^2 cells (start included).
double heuristic_value(Cell cell, Cell goal, double min_weight);

struct OracleResult {
    double cost = 0.0;
    std::vector<PathMask> optimal_masks;  // deduplicated, deterministic order
};

/// Exhaustive test oracle: exact minimal cost and the complete set of
/// cost-minimal simple paths. Enumerates simple paths by depth-first search,
/// pruned with a lower bound from exact_remaining_costs(). Refuses k > 6.
OracleResult brute_force_shortest(const WeightGrid& weights, const GridProblem& problem);

/// Exact optimal remaining cost to goal from every cell (cost of the cells
/// entered after leaving the cell). Computed by label-correcting sweeps to a
/// fixed point, independent of the priority-queue solvers above.
Eigen::ArrayXXd exact_remaining_costs(const WeightGrid& weights, const GridProblem& problem);

enum class SolverId { Dijkstra, AStarZero, AStarMinChebyshev };

SolveResult run_solver(SolverId id, const WeightGrid& weights, const GridProblem& problem);

const char* solver_name(SolverId id);

}  // namespace gridpath
