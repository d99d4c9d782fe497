#include "gridpath/checkpoint.hpp"

#include "gridpath/errors.hpp"

#include <cstdint>
#include <fstream>
#include <string>

namespace gridpath {

namespace {

constexpr char kMagic[8] = {'C', 'G', 'R', 'D', '0', '0', '0', '1'};

void write_u64(std::ofstream& f, std::uint64_t v) {
    // little-endian on all supported targets
    f.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

std::uint64_t read_u64(std::ifstream& f, const std::string& what) {
    std::uint64_t v = 0;
    f.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!f) throw DataError("checkpoint: truncated while reading " + what);
    return v;
}

}  // namespace

void write_checkpoint(const std::filesystem::path& path, const ModelParams& params) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("checkpoint: cannot open " + path.string() + " for writing");
    f.write(kMagic, sizeof(kMagic));
    for (const auto& [name, tensor] : params.tensors) {
        write_u64(f, name.size());
        f.write(name.data(), static_cast<std::streamsize>(name.size()));
        write_u64(f, static_cast<std::uint64_t>(tensor.rank()));
        for (const Eigen::Index d : tensor.dims) write_u64(f, static_cast<std::uint64_t>(d));
        f.write(reinterpret_cast<const char*>(tensor.data.data()),
                static_cast<std::streamsize>(tensor.numel() * sizeof(double)));
    }
    if (!f) throw DataError("checkpoint: write failed for " + path.string());
}

ModelParams read_checkpoint(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("checkpoint: cannot open " + path.string());
    char magic[8] = {};
    f.read(magic, sizeof(magic));
    if (!f || std::string(magic, 8) != std::string(kMagic, 8)) {
        throw DataError("checkpoint: bad magic in " + path.string() +
                        " (expected CGRD0001)");
    }

    ModelParams params;
    int record = 0;
    while (true) {
        std::uint64_t name_len = 0;
        f.read(reinterpret_cast<char*>(&name_len), sizeof(name_len));
        if (f.eof()) break;
        if (!f) throw DataError("checkpoint: unreadable record " + std::to_string(record));
        if (name_len == 0 || name_len > 4096) {
            throw DataError("checkpoint: implausible name length in record " +
                            std::to_string(record));
        }
        std::string name(name_len, '\0');
        f.read(name.data(), static_cast<std::streamsize>(name_len));
        if (!f) throw DataError("checkpoint: truncated name in record " + std::to_string(record));

        const std::uint64_t rank = read_u64(f, "rank of " + name);
        if (rank == 0 || rank > 8) {
            throw DataError("checkpoint: implausible rank for tensor " + name);
        }
        std::vector<Eigen::Index> dims(rank);
        std::uint64_t numel = 1;
        for (std::uint64_t i = 0; i < rank; ++i) {
            const std::uint64_t d = read_u64(f, "extent of " + name);
            if (d == 0 || numel > (1ULL << 32) / d) {
                throw DataError("checkpoint: implausible extents for tensor " + name);
            }
            numel *= d;
            dims[i] = static_cast<Eigen::Index>(d);
        }
        Tensor t(dims);
        f.read(reinterpret_cast<char*>(t.data.data()),
               static_cast<std::streamsize>(numel * sizeof(double)));
        if (!f) throw DataError("checkpoint: truncated data for tensor " + name);
        params.tensors.emplace_back(std::move(name), std::move(t));
        ++record;
    }
    if (params.tensors.empty()) throw DataError("checkpoint: no tensors in " + path.string());
    return params;
}

}  // namespace gridpath
