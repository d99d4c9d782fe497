#pragma once

#include "gridpath/bbox.hpp"
#include "gridpath/hyper.hpp"
#include "gridpath/tcr.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gridpath {

enum class SolverChoice { Dijkstra, AStar, Hyper };

enum class OptimizerKind { Sgd, Momentum, Adam };

/// Flat key=value run configuration (file plus command-line overrides).
/// Every key is documented in the README.
struct RunConfig {
    // solver selection
    SolverChoice solver = SolverChoice::Dijkstra;
    HeuristicKind heuristic = HeuristicKind::MinWeightChebyshev;  // astar/hyper A*
    bool heuristic_set = false;

    // blackbox layer
    BlackboxConfig bbox;

    // time-cost regularization
    TimeCostConfig tcr;

    // hyper-blackbox
    HyperConfig hyper;
    bool hyper_keys_set = false;
    double choice_delta = 0.01;  // init scale of the FC head's choice row

    // optimization
    OptimizerKind optimizer = OptimizerKind::Adam;
    double momentum = 0.9;     // momentum optimizer only
    double alpha_l1 = 0.0;
    int epochs = 10;
    int batch_size = 32;
    double lr = 0.001;
    double lr_decay = 1.0;     // per-epoch multiplier
    bool center_grad = true;   // drop the common mode of the blackbox weight gradient
    std::uint64_t seed = 1;

    // data generation
    Eigen::Index k = 12;
    Eigen::Index tile_px = 8;
    double cluster_prob = 0.2;
    std::int64_t train_count = 10000;
    std::int64_t val_count = 1000;
    std::int64_t test_count = 1000;

    // io
    std::filesystem::path dataset_dir;
    std::filesystem::path out_dir;
    std::string eval_split = "none";  // none|train|val|test, evaluated per epoch

    /// Apply one "key=value" assignment; throws ConfigError on unknown keys
    /// or unparsable values.
    void apply(const std::string& key, const std::string& value);

    /// Throws ConfigError on invalid combinations (e.g. a heuristic override
    /// without an A*-capable solver, probe probability outside [0,1]).
    void validate() const;

    static RunConfig from_file(const std::filesystem::path& path);
    void apply_overrides(const std::vector<std::string>& assignments);
};

}  // namespace gridpath
