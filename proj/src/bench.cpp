#include "gridpath/bench.hpp"

#include "gridpath/errors.hpp"
#include "gridpath/rng.hpp"
#include "gridpath/tcr.hpp"

#include <fstream>

namespace gridpath {

WeightGrid uniform_grid(Eigen::Index k, double w) { return WeightGrid::Constant(k, k, w); }

WeightGrid contrast_grid(Eigen::Index k, double diag, double off) {
    WeightGrid g = WeightGrid::Constant(k, k, off);
    for (Eigen::Index i = 0; i < k; ++i) g(i, i) = diag;
    return g;
}

WeightGrid random_grid(Eigen::Index k, std::uint64_t seed, double lo, double hi) {
    Rng rng(seed);
    WeightGrid g(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) g(i, j) = rng.uniform(lo, hi);
    }
    return g;
}

namespace {

void push_rows(std::vector<BenchRow>& rows, const std::string& family, int instance,
               const WeightGrid& w) {
    const GridProblem problem(w.rows());
    TimeCostConfig work_cfg;
    work_cfg.unit = TimeUnit::WorkNormalized;
    for (const SolverId id :
         {SolverId::Dijkstra, SolverId::AStarZero, SolverId::AStarMinChebyshev}) {
        const SolveResult res = run_solver(id, w, problem);
        BenchRow row;
        row.family = family;
        row.solver = solver_name(id);
        row.k = w.rows();
        row.instance = instance;
        row.expansions = res.stats.expansions;
        row.relaxations = res.stats.relaxations;
        row.work_norm = time_cost(res.stats, w.rows(), work_cfg);
        row.wall_seconds = res.stats.wall_seconds;
        row.cost = res.cost;
        rows.push_back(row);
    }
}

}  // namespace

std::vector<BenchRow> run_bench(Eigen::Index k, int random_instances, std::uint64_t seed,
                                const std::vector<WeightGrid>& model_grids) {
    std::vector<BenchRow> rows;
    push_rows(rows, "uniform", 0, uniform_grid(k));
    push_rows(rows, "contrast", 0, contrast_grid(k));
    for (int i = 0; i < random_instances; ++i) {
        push_rows(rows, "random", i, random_grid(k, mix_seed(seed, static_cast<std::uint64_t>(i))));
    }
    for (std::size_t i = 0; i < model_grids.size(); ++i) {
        push_rows(rows, "model", static_cast<int>(i), model_grids[i]);
    }
    return rows;
}

void write_bench_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw DataError("bench: cannot open " + path.string() + " for writing");
    f << "family,solver,k,instance,expansions,relaxations,work_norm,wall_seconds,cost\n";
    for (const BenchRow& r : rows) {
        f << r.family << ',' << r.solver << ',' << r.k << ',' << r.instance << ','
          << r.expansions << ',' << r.relaxations << ',' << r.work_norm << ','
          << r.wall_seconds << ',' << r.cost << "\n";
    }
    if (!f) throw DataError("bench: write failed for " + path.string());
}

}  // namespace gridpath
