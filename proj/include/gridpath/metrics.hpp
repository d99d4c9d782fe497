#pragma once

#include "gridpath/tcr.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gridpath {

/// One metrics CSV row. avg_batch_time_s is populated only when the run
/// measures wall time (TimeUnit::WallSeconds); in the deterministic units it
/// is left empty so the CSV bytes are a pure function of (config, seed).
struct EpochMetrics {
    int epoch = 0;
    std::string split;
    double exact_cost_match_acc = 0.0;
    double per_cell_acc = 0.0;
    double mean_hamming = 0.0;
    double avg_batch_time_s = 0.0;
    bool has_wall_time = false;
    double avg_batch_time_norm = 0.0;
    double tcr_term = 0.0;
    double l1_term = 0.0;
    std::int64_t astar_count = 0;
    std::int64_t dijkstra_count = 0;
    double usage_ratio = 0.0;
};

std::string metrics_csv_header();
std::string metrics_csv_row(const EpochMetrics& m);
void write_metrics_csv(const std::filesystem::path& path, const std::vector<EpochMetrics>& rows);

}  // namespace gridpath
