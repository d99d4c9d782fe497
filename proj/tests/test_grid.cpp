#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridpath/grid.hpp"
#include "gridpath/rng.hpp"
#include "gridpath/solvers.hpp"
#include "testutil.hpp"

#include <vector>

using namespace gridpath;

namespace {

PathMask mask_of(Eigen::Index k, const std::vector<Cell>& cells) {
    PathMask m = PathMask::Zero(k, k);
    for (const Cell& c : cells) m(c.row, c.col) = 1;
    return m;
}

}  // namespace

TEST_CASE("neighbors: corner, interior, edge") {
    const auto corner = neighbors(Cell{0, 0}, 3);
    REQUIRE(corner.size() == 3);
    CHECK(corner[0] == Cell{0, 1});
    CHECK(corner[1] == Cell{1, 0});
    CHECK(corner[2] == Cell{1, 1});

    CHECK(neighbors(Cell{1, 1}, 3).size() == 8);
    CHECK(neighbors(Cell{0, 1}, 3).size() == 5);
    CHECK_THROWS_AS(neighbors(Cell{3, 0}, 3), std::invalid_argument);
}

TEST_CASE("path_cost: diagonal examples") {
    WeightGrid w = WeightGrid::Constant(3, 3, 10000.0);
    for (Eigen::Index i = 0; i < 3; ++i) w(i, i) = 0.1;
    const PathMask diag = mask_of(3, {{0, 0}, {1, 1}, {2, 2}});
    CHECK(path_cost(w, diag, Cell{0, 0}) == doctest::Approx(0.2).epsilon(1e-12));

    WeightGrid ones = WeightGrid::Constant(12, 12, 1.0);
    std::vector<Cell> cells;
    for (Eigen::Index i = 0; i < 12; ++i) cells.push_back(Cell{i, i});
    CHECK(path_cost(ones, mask_of(12, cells), Cell{0, 0}) == 11.0);

    CHECK_THROWS_AS(path_cost(ones, mask_of(12, cells), Cell{0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(path_cost(w, mask_of(4, {{0, 0}}), Cell{0, 0}), std::invalid_argument);
}

TEST_CASE("path_cost: identity dot(w, mask) - w[start] and oracle-optimal cost") {
    const WeightGrid w = testutil::dyadic_grid(4, 77);
    const GridProblem p(4);
    const OracleResult oracle = brute_force_shortest(w, p);
    REQUIRE(!oracle.optimal_masks.empty());
    for (const PathMask& m : oracle.optimal_masks) {
        const double direct = (w * m.cast<double>()).sum() - w(0, 0);
        CHECK(path_cost(w, m, p.start) == direct);
        CHECK(path_cost(w, m, p.start) == oracle.cost);
    }
}

TEST_CASE("hamming: examples and properties") {
    const PathMask a = mask_of(3, {{0, 0}, {1, 1}, {2, 2}});
    CHECK(hamming(a, a) == 0);

    PathMask complement = (a == 0).cast<std::uint8_t>();
    CHECK(hamming(a, complement) == 9);

    PathMask small = PathMask::Zero(2, 2);
    CHECK_THROWS_AS(hamming(a, small), std::invalid_argument);

    // symmetry + triangle inequality on random triples
    Rng rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        PathMask x(4, 4), y(4, 4), z(4, 4);
        for (Eigen::Index i = 0; i < 4; ++i) {
            for (Eigen::Index j = 0; j < 4; ++j) {
                x(i, j) = rng.uniform() < 0.5;
                y(i, j) = rng.uniform() < 0.5;
                z(i, j) = rng.uniform() < 0.5;
            }
        }
        CHECK(hamming(x, y) == hamming(y, x));
        CHECK(hamming(x, z) <= hamming(x, y) + hamming(y, z));
    }
}

TEST_CASE("hamming: two distinct oracle paths differ by the per-cell xor count") {
    // corner-to-corner diagonals are unique; a same-row goal gives ties
    const WeightGrid w = WeightGrid::Constant(3, 3, 1.0);
    const OracleResult oracle = brute_force_shortest(w, GridProblem(3, {0, 0}, {0, 2}));
    REQUIRE(oracle.optimal_masks.size() >= 2);
    const PathMask& a = oracle.optimal_masks[0];
    const PathMask& b = oracle.optimal_masks[1];
    std::int64_t xor_count = 0;
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) xor_count += (a(i, j) ^ b(i, j)) != 0;
    }
    CHECK(hamming(a, b) == xor_count);
}

TEST_CASE("hamming_grad: values and finite-difference check of the relaxed loss") {
    const PathMask zeros = PathMask::Zero(3, 3);
    CHECK((hamming_grad(zeros) == 1.0).all());
    const PathMask ones = PathMask::Constant(3, 3, 1);
    CHECK((hamming_grad(ones) == -1.0).all());

    const PathMask mixed = mask_of(3, {{0, 0}, {1, 1}, {2, 2}});
    const GradGrid g = hamming_grad(mixed);
    CHECK(g(1, 1) == -1.0);
    CHECK(g(0, 1) == 1.0);

    // central finite difference of L(y) = sum(y + y* - 2 y y*) over relaxed y
    Rng rng(5);
    Eigen::ArrayXXd y(3, 3);
    for (Eigen::Index i = 0; i < y.size(); ++i) y.data()[i] = rng.uniform();
    const auto relaxed_loss = [&](const Eigen::ArrayXXd& yy) {
        return (yy + mixed.cast<double>() - 2.0 * yy * mixed.cast<double>()).sum();
    };
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < 3; ++i) {
        for (Eigen::Index j = 0; j < 3; ++j) {
            Eigen::ArrayXXd up = y, dn = y;
            up(i, j) += h;
            dn(i, j) -= h;
            const double fd = (relaxed_loss(up) - relaxed_loss(dn)) / (2.0 * h);
            CHECK(g(i, j) == doctest::Approx(fd).epsilon(1e-6));
        }
    }

    // gradient entries are always exactly +1 or -1
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        CHECK((g.data()[i] == 1.0 || g.data()[i] == -1.0));
    }
}

TEST_CASE("validate_path: basic shapes") {
    const GridProblem p(3);
    CHECK(validate_path(mask_of(3, {{0, 0}, {1, 1}, {2, 2}}), p));
    // isolated 1-cell
    CHECK_FALSE(validate_path(mask_of(3, {{0, 0}, {1, 1}, {2, 2}, {0, 2}}), p));
    // missing endpoints
    CHECK_FALSE(validate_path(mask_of(3, {{1, 1}, {2, 2}}), p));
    CHECK_FALSE(validate_path(PathMask::Zero(3, 3), p));
    // disconnected pair
    CHECK_FALSE(validate_path(mask_of(3, {{0, 0}, {2, 2}}), p));
    // degenerate single-cell problem
    CHECK(validate_path(mask_of(3, {{1, 1}}), GridProblem(3, {1, 1}, {1, 1})));
}

TEST_CASE("validate_path: every oracle-enumerated simple path on 4x4 is valid") {
    const WeightGrid w = testutil::dyadic_grid(4, 123);
    const GridProblem p(4);
    const OracleResult oracle = brute_force_shortest(w, p);
    for (const PathMask& m : oracle.optimal_masks) CHECK(validate_path(m, p));
    // a same-row goal on a uniform grid has several tied optimal paths
    const GridProblem row_goal(4, {0, 0}, {0, 3});
    const OracleResult uniform =
        brute_force_shortest(WeightGrid::Constant(4, 4, 1.0), row_goal);
    REQUIRE(uniform.optimal_masks.size() > 1);
    for (const PathMask& m : uniform.optimal_masks) CHECK(validate_path(m, row_goal));
}

TEST_CASE("validate_path holds for solver output on random grids") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const Eigen::Index k = 3 + static_cast<Eigen::Index>(seed % 8);
        const WeightGrid w = testutil::dyadic_grid(k, 1000 + seed);
        const GridProblem p(k);
        CHECK(validate_path(dijkstra(w, p).mask, p));
        CHECK(validate_path(astar(w, p, HeuristicKind::MinWeightChebyshev).mask, p));
    }
}
