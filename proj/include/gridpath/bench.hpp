#pragma once

#include "gridpath/grid.hpp"
#include "gridpath/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gridpath {

struct BenchRow {
    std::string family;
    std::string solver;
    Eigen::Index k = 0;
    int instance = 0;
    std::int64_t expansions = 0;
    std::int64_t relaxations = 0;
    double work_norm = 0.0;
    double wall_seconds = 0.0;
    double cost = 0.0;
};

/// Grid families from the solver-comparison benchmark.
WeightGrid uniform_grid(Eigen::Index k, double w = 1.0);
WeightGrid contrast_grid(Eigen::Index k, double diag = 0.1, double off = 10000.0);
WeightGrid random_grid(Eigen::Index k, std::uint64_t seed, double lo = 0.1, double hi = 1.0);

/// Runs Dijkstra, A*(Zero) and A*(MinWeightChebyshev) over the uniform,
/// contrast and random families (plus model-output grids when supplied).
std::vector<BenchRow> run_bench(Eigen::Index k, int random_instances, std::uint64_t seed,
                                const std::vector<WeightGrid>& model_grids = {});

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows);

}  // namespace gridpath
