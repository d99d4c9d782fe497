#include "gridpath/grid.hpp"

#include <stdexcept>
#include <string>

namespace gridpath {

namespace {

void check_square(const Eigen::Index rows, const Eigen::Index cols, const char* what) {
    if (rows != cols || rows < 1) {
        throw std::invalid_argument(std::string(what) + ": expected a square k x k array, got " +
                                    std::to_string(rows) + " x " + std::to_string(cols));
    }
}

}  // namespace

GridProblem::GridProblem(Eigen::Index side)
    : GridProblem(side, Cell{0, 0}, Cell{side - 1, side - 1}) {}

GridProblem::GridProblem(Eigen::Index side, Cell s, Cell g) : k(side), start(s), goal(g) {
    if (k < 1) throw std::invalid_argument("GridProblem: side must be >= 1");
    if (!in_grid(start, k) || !in_grid(goal, k)) {
        throw std::invalid_argument("GridProblem: start and goal must lie inside the grid");
    }
}

bool in_grid(Cell c, Eigen::Index k) {
    return c.row >= 0 && c.row < k && c.col >= 0 && c.col < k;
}

std::vector<Cell> neighbors(Cell c, Eigen::Index k) {
    if (!in_grid(c, k)) throw std::invalid_argument("neighbors: cell out of bounds");
    std::vector<Cell> out;
    out.reserve(8);
    for (Eigen::Index dr = -1; dr <= 1; ++dr) {
        for (Eigen::Index dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const Cell n{c.row + dr, c.col + dc};
            if (in_grid(n, k)) out.push_back(n);
        }
    }
    return out;
}

double path_cost(const WeightGrid& weights, const PathMask& mask, Cell start) {
    check_square(weights.rows(), weights.cols(), "path_cost: weights");
    if (mask.rows() != weights.rows() || mask.cols() != weights.cols()) {
        throw std::invalid_argument("path_cost: weight/mask shape mismatch");
    }
    if (!in_grid(start, weights.rows()) || mask(start.row, start.col) == 0) {
        throw std::invalid_argument("path_cost: start cell is not on the mask");
    }
    return (weights * mask.cast<double>()).sum() - weights(start.row, start.col);
}

std::int64_t hamming(const PathMask& a, const PathMask& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("hamming: mask sides differ");
    }
    return (a != b).count();
}

GradGrid hamming_grad(const PathMask& true_mask) {
    return 1.0 - 2.0 * true_mask.cast<double>();
}

PathMask single_cell_mask(Eigen::Index k, Cell c) {
    PathMask m = PathMask::Zero(k, k);
    m(c.row, c.col) = 1;
    return m;
}

namespace {

// Depth-first search for an ordering of the remaining set cells that walks
// start -> goal with 8-neighbor steps. Budgeted: path-shaped sets finish in
// linear-ish time, dense blobs give up and count as invalid.
bool order_exists(const PathMask& mask, Cell cur, Cell goal, PathMask& visited,
                  std::int64_t remaining, std::int64_t& budget) {
    if (--budget < 0) return false;
    if (cur == goal) return remaining == 0;
    const Eigen::Index k = mask.rows();
    for (Eigen::Index dr = -1; dr <= 1; ++dr) {
        for (Eigen::Index dc = -1; dc <= 1; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const Cell n{cur.row + dr, cur.col + dc};
            if (!in_grid(n, k)) continue;
            if (mask(n.row, n.col) == 0 || visited(n.row, n.col) != 0) continue;
            visited(n.row, n.col) = 1;
            if (order_exists(mask, n, goal, visited, remaining - 1, budget)) return true;
            visited(n.row, n.col) = 0;
        }
    }
    return false;
}

}  // namespace

bool validate_path(const PathMask& mask, const GridProblem& problem) {
    if (mask.rows() != problem.k || mask.cols() != problem.k) return false;
    if (mask(problem.start.row, problem.start.col) == 0) return false;
    if (mask(problem.goal.row, problem.goal.col) == 0) return false;
    const std::int64_t cells = mask.cast<std::int64_t>().sum();
    if (problem.start == problem.goal) return cells == 1;

    PathMask visited = PathMask::Zero(problem.k, problem.k);
    visited(problem.start.row, problem.start.col) = 1;
    std::int64_t budget = 1'000'000;
    return order_exists(mask, problem.start, problem.goal, visited, cells - 1, budget);
}

}  // namespace gridpath
