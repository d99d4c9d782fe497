#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridpath/bench.hpp"
#include "gridpath/tcr.hpp"
#include "testutil.hpp"

using namespace gridpath;

TEST_CASE("time_cost: unit conversions") {
    SolverStats stats;
    stats.expansions = 64;
    stats.relaxations = 200;
    stats.pq_pushes = 210;
    stats.pq_pops = 205;
    stats.heuristic_evals = 210;
    stats.wall_seconds = 0.125;

    TimeCostConfig cfg;
    cfg.unit = TimeUnit::ExpansionsNormalized;
    CHECK(time_cost(stats, 8, cfg) == 1.0);  // full exploration
    cfg.unit = TimeUnit::WallSeconds;
    CHECK(time_cost(stats, 8, cfg) == 0.125);
    cfg.unit = TimeUnit::WorkNormalized;
    CHECK(time_cost(stats, 8, cfg) == doctest::Approx((205 + 210 + 210) / 64.0));
}

TEST_CASE("time_cost: contrast run stays under 5n normalized") {
    const Eigen::Index n = 32;
    const SolveResult res = dijkstra(contrast_grid(n), GridProblem(n));
    TimeCostConfig cfg;
    const double t = time_cost(res.stats, n, cfg);
    CHECK(t <= 5.0 / static_cast<double>(n));
    CHECK(t >= 1.0 / static_cast<double>(n * n));

    // identical across repeated runs
    CHECK(time_cost(dijkstra(contrast_grid(n), GridProblem(n)).stats, n, cfg) == t);
}

TEST_CASE("tcr_term: scaling") {
    TimeCostConfig cfg;
    cfg.lambda_t = 0.0;
    CHECK(tcr_term(3.7, cfg) == 0.0);
    cfg.lambda_t = 2.0;
    CHECK(tcr_term(0.0, cfg) == 0.0);
    // an extra second at lambda_t = 2 prices like a 2-cell Hamming error
    CHECK(tcr_term(1.0, cfg) == 2.0);
    cfg.lambda_t = 50.0;
    CHECK(tcr_term(1.0, cfg) == 50.0);
    CHECK_THROWS_AS(tcr_term(-0.5, cfg), std::invalid_argument);
}

TEST_CASE("tcr_weight_grad: monitor is all zeros") {
    TimeCostConfig cfg;
    cfg.lambda_t = 50.0;
    cfg.grad_mode = TcrGradMode::Monitor;
    const SolveResult res = dijkstra(uniform_grid(6), GridProblem(6));
    CHECK((tcr_weight_grad(res.expanded, res.mask, cfg) == 0.0).all());
}

TEST_CASE("tcr_weight_grad: contrast support is expanded minus path") {
    TimeCostConfig cfg;
    cfg.lambda_t = 50.0;
    cfg.grad_mode = TcrGradMode::Contrast;

    // expanded == path -> zero
    const SolveResult con = dijkstra(contrast_grid(4, 0.1, 10000.0), GridProblem(4));
    if ((con.expanded == con.mask).all()) {
        CHECK((tcr_weight_grad(con.expanded, con.mask, cfg) == 0.0).all());
    }
    PathMask m = con.mask;
    CHECK((tcr_weight_grad(m, m, cfg) == 0.0).all());

    // uniform 4x4: dijkstra expands everything, path is the diagonal;
    // negative entries exactly on the 12 off-path cells
    const SolveResult uni = dijkstra(uniform_grid(4), GridProblem(4));
    REQUIRE(uni.stats.expansions == 16);
    const GradGrid g = tcr_weight_grad(uni.expanded, uni.mask, cfg);
    int negatives = 0;
    for (Eigen::Index i = 0; i < 4; ++i) {
        for (Eigen::Index j = 0; j < 4; ++j) {
            if (uni.mask(i, j) != 0) {
                CHECK(g(i, j) == 0.0);  // zero on path cells always
            } else {
                CHECK(g(i, j) < 0.0);
                ++negatives;
            }
        }
    }
    CHECK(negatives == 12);
    // magnitude is lambda_t * kappa with the 1/k^2 default
    CHECK(g.minCoeff() == doctest::Approx(-50.0 / 16.0).epsilon(1e-12));

    cfg.kappa = 0.5;
    CHECK(tcr_weight_grad(uni.expanded, uni.mask, cfg).minCoeff() ==
          doctest::Approx(-25.0).epsilon(1e-12));
}

TEST_CASE("contrast surrogate direction: one step strictly reduces expansions") {
    const Eigen::Index k = 8;
    const WeightGrid w = uniform_grid(k, 1.0);
    const GridProblem p(k);
    const SolveResult before = dijkstra(w, p);

    TimeCostConfig cfg;
    cfg.lambda_t = 50.0;
    cfg.grad_mode = TcrGradMode::Contrast;  // kappa defaults to 1/k^2
    const GradGrid g = tcr_weight_grad(before.expanded, before.mask, cfg);
    const WeightGrid stepped = w - 0.5 * g;

    const SolveResult after = dijkstra(stepped, p);
    CHECK(after.stats.expansions < before.stats.expansions);
    CHECK(after.cost == path_cost(stepped, after.mask, p.start));
}
