#pragma once

#include "gridpath/grid.hpp"
#include "gridpath/tensor.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gridpath {

struct Terrain {
    int id = 0;
    double cost = 1.0;                      // strictly positive base entry cost
    std::array<double, 3> color{0, 0, 0};   // RGB in [0,1]
};

struct TerrainPalette {
    std::vector<Terrain> terrains;

    /// Five terrains with costs {0.8, 1.2, 2.0, 5.0, 9.2}.
    static TerrainPalette default_palette();

    /// Costs must be strictly positive and pairwise distinct.
    void validate() const;
};

/// One synthetic instance: rendered image, ground-truth weights, an optimal
/// path mask for those weights, and its cost.
struct Sample {
    Tensor image;            // {3, k*p, k*p}, values in [0,1], float32-exact
    WeightGrid true_weights; // base terrain cost + per-cell jitter
    PathMask true_mask;      // Dijkstra-optimal for true_weights
    double optimal_cost = 0.0;
    Eigen::ArrayXXi terrain_ids;  // k x k, which palette entry generated each cell
};

struct DatasetManifest {
    int version = 1;
    std::uint64_t seed = 0;
    Eigen::Index k = 12;
    Eigen::Index tile_px = 8;
    double cluster_prob = 0.2;  // chance a cell copies an already-drawn neighbor
    TerrainPalette palette;
    std::map<std::string, std::int64_t> split_counts;  // "train"/"val"/"test"
};

/// Deterministic sample from one seed. Terrain ids get mild spatial
/// clustering; weights are base cost + uniform jitter in [-0.05, +0.05];
/// the image renders each cell as a p x p patch of the terrain color plus
/// Gaussian pixel noise (std 0.05) clamped to [0,1].
Sample gen_sample(std::uint64_t seed, Eigen::Index k, Eigen::Index p,
                  const TerrainPalette& palette, double cluster_prob = 0.2);

using SplitMap = std::map<std::string, std::vector<Sample>>;

/// Generate every split listed in the manifest. Per-sample seeds are derived
/// from (manifest.seed, split name, index), so bytes are a pure function of
/// the manifest.
SplitMap generate_dataset(const DatasetManifest& manifest);

/// On-disk layout: manifest.json plus one <split>.gsp file per split.
/// Each .gsp file: magic "GRIDSP01"; k, p, count as u64 LE; then per sample
/// image float32s ({3,H,W} row-major), weights f64 (row-major), mask bytes,
/// optimal cost f64. Round-trips are byte-exact.
void write_dataset(const std::filesystem::path& dir, const DatasetManifest& manifest,
                   const SplitMap& splits);

struct Dataset {
    DatasetManifest manifest;
    SplitMap splits;
};

/// Throws DataError naming the offending file/record on any corruption.
Dataset read_dataset(const std::filesystem::path& dir);

}  // namespace gridpath
