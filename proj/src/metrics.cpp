#include "gridpath/metrics.hpp"

#include "gridpath/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace gridpath {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

}  // namespace

std::string metrics_csv_header() {
    return "epoch,split,exact_cost_match_acc,per_cell_acc,mean_hamming,avg_batch_time_s,"
           "avg_batch_time_norm,tcr_term,l1_term,astar_count,dijkstra_count,usage_ratio";
}

std::string metrics_csv_row(const EpochMetrics& m) {
    std::string row = std::to_string(m.epoch) + "," + m.split + "," +
                      fmt(m.exact_cost_match_acc) + "," + fmt(m.per_cell_acc) + "," +
                      fmt(m.mean_hamming) + ",";
    // wall time is only reported when the run actually measures it, so CSV
    // bytes stay a pure function of (config, seed) in the deterministic units
    if (m.has_wall_time) row += fmt(m.avg_batch_time_s);
    row += "," + fmt(m.avg_batch_time_norm) + "," + fmt(m.tcr_term) + "," + fmt(m.l1_term) +
           "," + std::to_string(m.astar_count) + "," + std::to_string(m.dijkstra_count) + "," +
           fmt(m.usage_ratio);
    return row;
}

void write_metrics_csv(const std::filesystem::path& path, const std::vector<EpochMetrics>& rows) {
    std::ofstream f(path, std::ios::trunc);
    if (!f) throw DataError("metrics: cannot open " + path.string() + " for writing");
    f << metrics_csv_header() << "\n";
    for (const EpochMetrics& m : rows) f << metrics_csv_row(m) << "\n";
    if (!f) throw DataError("metrics: write failed for " + path.string());
}

}  // namespace gridpath
