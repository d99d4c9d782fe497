#pragma once

#include "gridpath/tensor.hpp"

#include <filesystem>

namespace gridpath {

// Checkpoint container: magic "CGRD0001", then per-tensor records of
// u64 name length, name bytes, u64 rank, u64 extents, f64 data, all
// little-endian, records until EOF.

void write_checkpoint(const std::filesystem::path& path, const ModelParams& params);

/// Throws DataError naming the offending record on corruption or truncation.
ModelParams read_checkpoint(const std::filesystem::path& path);

}  // namespace gridpath
