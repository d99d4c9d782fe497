#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridpath/bench.hpp"
#include "gridpath/hyper.hpp"
#include "gridpath/rng.hpp"
#include "testutil.hpp"

#include <cmath>

using namespace gridpath;

TEST_CASE("route: learned choice thresholds, boundary inclusive") {
    const WeightGrid w = WeightGrid::Constant(4, 4, 1.0);
    HyperConfig cfg;
    cfg.mode = HyperMode::LearnedChoice;
    CHECK(route(0.7, w, cfg) == SolverId::AStarMinChebyshev);
    CHECK(route(0.2, w, cfg) == SolverId::Dijkstra);
    CHECK(route(0.5, w, cfg) == SolverId::AStarMinChebyshev);
    CHECK(route(0.4999999, w, cfg) == SolverId::Dijkstra);
}

TEST_CASE("route: internal decision scans the weights") {
    HyperConfig cfg;
    cfg.mode = HyperMode::InternalDecision;
    const WeightGrid uniform = WeightGrid::Constant(4, 4, 2.5);
    CHECK(route(0.0, uniform, cfg) == SolverId::AStarMinChebyshev);  // choice ignored
    const WeightGrid contrast = contrast_grid(12);
    CHECK(route(1.0, contrast, cfg) == SolverId::Dijkstra);
}

TEST_CASE("route: hybrid requires both signals") {
    HyperConfig cfg;
    cfg.mode = HyperMode::Hybrid;
    const WeightGrid uniform = WeightGrid::Constant(4, 4, 2.5);
    const WeightGrid contrast = contrast_grid(12);
    CHECK(route(0.9, uniform, cfg) == SolverId::AStarMinChebyshev);
    CHECK(route(0.2, uniform, cfg) == SolverId::Dijkstra);
    CHECK(route(0.9, contrast, cfg) == SolverId::Dijkstra);
    CHECK(route(0.2, contrast, cfg) == SolverId::Dijkstra);
}

TEST_CASE("routing purity: identical inputs give identical ids") {
    const WeightGrid w = testutil::dyadic_grid(6, 3);
    for (const HyperMode mode :
         {HyperMode::LearnedChoice, HyperMode::InternalDecision, HyperMode::Hybrid}) {
        HyperConfig cfg;
        cfg.mode = mode;
        CHECK(route(0.61, w, cfg) == route(0.61, w, cfg));
    }
}

TEST_CASE("equal-cost guarantee: any routing decision prices like dijkstra") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const WeightGrid w = testutil::dyadic_grid(6, 900 + seed);
        const GridProblem p(6);
        const double base = dijkstra(w, p).cost;
        HyperConfig cfg;
        for (const double choice : {0.0, 1.0}) {
            const SolverId id = route(choice, w, cfg);
            CHECK(run_solver(id, w, p).cost == base);
        }
    }
}

TEST_CASE("informativeness: uniform grid scores 1, contrast scores ~1e-5") {
    // dyadic uniform value sums exactly; non-dyadic is 1 within rounding
    CHECK(informativeness(WeightGrid::Constant(9, 9, 4.0)) == 1.0);
    CHECK(informativeness(WeightGrid::Constant(9, 9, 3.7)) ==
          doctest::Approx(1.0).epsilon(1e-14));

    // 12x12 with 0.1 on the diagonal and 10,000 elsewhere:
    // mean = (12*0.1 + 132*10000)/144, score = 0.1/mean ~= 1.09e-5
    const double mean = (12 * 0.1 + 132 * 10000.0) / 144.0;
    const double expected = 0.1 / mean;
    CHECK(expected == doctest::Approx(1.09e-5).epsilon(0.01));
    CHECK(informativeness(contrast_grid(12)) == doctest::Approx(expected).epsilon(1e-12));

    // in (0, 1] on random grids; 1 only for uniform
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const double v = informativeness(testutil::dyadic_grid(5, seed));
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }

    // the internal decision threshold routes on this score
    HyperConfig cfg;
    cfg.mode = HyperMode::InternalDecision;
    WeightGrid mild = WeightGrid::Constant(4, 4, 1.0);
    mild(2, 2) = 0.5;  // score ~ 0.516 >= 0.3
    CHECK(route(0.0, mild, cfg) == SolverId::AStarMinChebyshev);
}

TEST_CASE("choice_grad: examples and antisymmetry") {
    CHECK(choice_grad(1.3, 1.3, 50.0, true) == 0.0);
    CHECK(choice_grad(9.0, 1.0, 50.0, false) == 0.0);
    // Table-2-scale placeholder times: 50 * (1.8 - 1.55) = 12.5, positive,
    // pushing the choice toward Dijkstra
    CHECK(choice_grad(1.8, 1.55, 50.0, true) == doctest::Approx(12.5).epsilon(1e-12));
    CHECK_THROWS_AS(choice_grad(1.0, 1.0, -1.0, true), std::invalid_argument);

    Rng rng(4);
    for (int i = 0; i < 40; ++i) {
        const double a = rng.uniform(0.0, 3.0), d = rng.uniform(0.0, 3.0);
        CHECK(choice_grad(a, d, 50.0, true) == -choice_grad(d, a, 50.0, true));
    }
}

TEST_CASE("usage_ratio: sentinels and examples") {
    CHECK(usage_ratio(UsageCounter{36, 5}) == doctest::Approx(7.2).epsilon(1e-12));
    CHECK(usage_ratio(UsageCounter{0, 123}) == 0.0);
    CHECK(usage_ratio(UsageCounter{17, 17}) == 1.0);
    CHECK(std::isinf(usage_ratio(UsageCounter{3, 0})));
    CHECK(std::isnan(usage_ratio(UsageCounter{0, 0})));

    UsageCounter c{4, 9};
    c.reset();
    CHECK(c.astar_count == 0);
    CHECK(c.dijkstra_count == 0);
}
