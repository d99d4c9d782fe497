#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace gridpath {

/// k x k grid of strictly positive cell-entry costs.
using WeightGrid = Eigen::ArrayXXd;

/// k x k binary indicator of cells on a path (0/1).
using PathMask = Eigen::Array<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// k x k binary indicator of cells a solver expanded.
using ExpansionMask = PathMask;

/// Dense real-valued gradient with the same layout as a WeightGrid.
using GradGrid = Eigen::ArrayXXd;

struct Cell {
    Eigen::Index row = 0;
    Eigen::Index col = 0;
    friend bool operator==(const Cell& a, const Cell& b) {
        return a.row == b.row && a.col == b.col;
    }
    friend bool operator!=(const Cell& a, const Cell& b) { return !(a == b); }
};

/// Grid geometry plus endpoints. Defaults to the top-left -> bottom-right
/// corner pair.
struct GridProblem {
    Eigen::Index k;
    Cell start;
    Cell goal;

    explicit GridProblem(Eigen::Index side);
    GridProblem(Eigen::Index side, Cell s, Cell g);
};

bool in_grid(Cell c, Eigen::Index k);

/// All in-bounds cells at Chebyshev distance 1, in row-major order.
/// Throws std::invalid_argument for an out-of-bounds cell.
std::vector<Cell> neighbors(Cell c, Eigen::Index k);

/// Sum of weights over 1-cells, excluding the start cell:
/// exactly dot(weights, mask) - weights[start].
/// Throws if shapes mismatch or the start cell is not on the mask.
double path_cost(const WeightGrid& weights, const PathMask& mask, Cell start);

/// Count of cells where the two masks differ. Throws on mismatched sides.
std::int64_t hamming(const PathMask& a, const PathMask& b);

/// Per-cell derivative of the Hamming loss L(y) = sum_i [y_i + y*_i - 2 y_i y*_i]
/// at any y: grad_i = 1 - 2 y*_i. Entries are +1 off the true path, -1 on it.
GradGrid hamming_grad(const PathMask& true_mask);

/// True iff the 1-cells form a simple 8-connected path from start to goal.
/// Exact for path-like masks; dense adversarial blobs beyond an internal
/// search budget are reported as invalid.
bool validate_path(const PathMask& mask, const GridProblem& problem);

/// Mask with a single 1 at the given cell.
PathMask single_cell_mask(Eigen::Index k, Cell c);

}  // namespace gridpath
