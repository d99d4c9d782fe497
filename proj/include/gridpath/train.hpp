#pragma once

#include "gridpath/config.hpp"
#include "gridpath/dataset.hpp"
#include "gridpath/metrics.hpp"
#include "gridpath/model.hpp"

#include <filesystem>
#include <vector>

namespace gridpath {

struct TrainResult {
    ModelParams params;
    ArchitectureSpec arch;
    std::vector<EpochMetrics> rows;  // per-epoch train rows (+ eval rows if requested)
};

/// Full training loop: model forward -> (hyper route) -> blackbox forward ->
/// Hamming + l1 + time-cost loss -> blackbox backward (+ TCR surrogate and
/// probed choice gradient) -> model backward -> SGD step.
/// Writes checkpoint-<epoch>.cgrd per epoch (000 = initial parameters) and
/// metrics.csv under cfg.out_dir when it is non-empty.
/// Throws NumericError naming the batch if the loss goes non-finite.
TrainResult run_training(const RunConfig& cfg, const Dataset& data);

/// Forward-only metrics of a parameter set on one split.
EpochMetrics evaluate_split(const ModelParams& params, const ArchitectureSpec& arch,
                            const std::vector<Sample>& samples, const RunConfig& cfg,
                            int epoch, const std::string& split_name);

/// Architecture implied by a config and dataset; infers the hyper head.
ArchitectureSpec arch_for(const RunConfig& cfg, const DatasetManifest& manifest);

}  // namespace gridpath
