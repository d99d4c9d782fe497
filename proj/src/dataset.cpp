#include "gridpath/dataset.hpp"

#include "gridpath/errors.hpp"
#include "gridpath/rng.hpp"
#include "gridpath/solvers.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace gridpath {

namespace {

constexpr char kMagic[8] = {'G', 'R', 'I', 'D', 'S', 'P', '0', '1'};

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

/// Round through float so the float32 file representation is lossless.
double f32_exact(double v) { return static_cast<double>(static_cast<float>(v)); }

std::uint64_t split_stream_id(const std::string& split) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c : split) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

TerrainPalette TerrainPalette::default_palette() {
    // grass, sand, forest, rock, water
    return TerrainPalette{{
        {0, 0.8, {0.20, 0.70, 0.20}},
        {1, 1.2, {0.90, 0.80, 0.50}},
        {2, 2.0, {0.10, 0.40, 0.10}},
        {3, 5.0, {0.50, 0.50, 0.55}},
        {4, 9.2, {0.10, 0.20, 0.80}},
    }};
}

void TerrainPalette::validate() const {
    if (terrains.empty()) throw ConfigError("palette: needs at least one terrain");
    for (std::size_t i = 0; i < terrains.size(); ++i) {
        if (terrains[i].cost <= 0.0) throw ConfigError("palette: costs must be positive");
        for (std::size_t j = i + 1; j < terrains.size(); ++j) {
            if (terrains[i].cost == terrains[j].cost) {
                throw ConfigError("palette: costs must be pairwise distinct");
            }
        }
    }
}

Sample gen_sample(std::uint64_t seed, Eigen::Index k, Eigen::Index p,
                  const TerrainPalette& palette, double cluster_prob) {
    if (k < 2 || p < 2) throw std::invalid_argument("gen_sample: need k >= 2 and p >= 2");
    palette.validate();
    Rng rng(seed);

    // terrain ids with mild clustering: each cell may copy an already-drawn
    // neighbor (up/left/up-left) instead of sampling fresh
    const std::size_t nt = palette.terrains.size();
    Eigen::ArrayXXi ids(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const bool can_copy = i > 0 || j > 0;
            if (can_copy && rng.uniform() < cluster_prob) {
                std::vector<int> prev;
                if (j > 0) prev.push_back(ids(i, j - 1));
                if (i > 0) prev.push_back(ids(i - 1, j));
                if (i > 0 && j > 0) prev.push_back(ids(i - 1, j - 1));
                ids(i, j) = prev[rng.uniform_int(prev.size())];
            } else {
                ids(i, j) = palette.terrains[rng.uniform_int(nt)].id;
            }
        }
    }

    Sample s;
    s.terrain_ids = ids;
    s.true_weights = WeightGrid(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const Terrain& t = palette.terrains[static_cast<std::size_t>(ids(i, j))];
            s.true_weights(i, j) = t.cost + rng.uniform(-0.05, 0.05);
        }
    }

    const Eigen::Index side = k * p;
    s.image = Tensor({3, side, side});
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const Terrain& t = palette.terrains[static_cast<std::size_t>(ids(i, j))];
            for (Eigen::Index py = 0; py < p; ++py) {
                for (Eigen::Index px = 0; px < p; ++px) {
                    for (Eigen::Index c = 0; c < 3; ++c) {
                        const double v = t.color[static_cast<std::size_t>(c)] +
                                         0.05 * rng.normal();
                        s.image.at3(c, i * p + py, j * p + px) = f32_exact(clamp01(v));
                    }
                }
            }
        }
    }

    const GridProblem problem(k);
    SolveResult res = dijkstra(s.true_weights, problem);
    s.true_mask = res.mask;
    s.optimal_cost = res.cost;
    return s;
}

SplitMap generate_dataset(const DatasetManifest& manifest) {
    SplitMap splits;
    for (const auto& [split, count] : manifest.split_counts) {
        std::vector<Sample>& out = splits[split];
        out.reserve(static_cast<std::size_t>(count));
        const std::uint64_t stream = split_stream_id(split);
        for (std::int64_t i = 0; i < count; ++i) {
            const std::uint64_t s =
                mix_seed(manifest.seed ^ stream, static_cast<std::uint64_t>(i));
            out.push_back(gen_sample(s, manifest.k, manifest.tile_px, manifest.palette,
                                     manifest.cluster_prob));
        }
    }
    return splits;
}

namespace {

nlohmann::json palette_json(const TerrainPalette& p) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Terrain& t : p.terrains) {
        arr.push_back({{"id", t.id}, {"cost", t.cost}, {"color", t.color}});
    }
    return arr;
}

TerrainPalette palette_from_json(const nlohmann::json& arr) {
    TerrainPalette p;
    for (const auto& e : arr) {
        Terrain t;
        t.id = e.at("id").get<int>();
        t.cost = e.at("cost").get<double>();
        const auto col = e.at("color");
        for (int c = 0; c < 3; ++c) t.color[static_cast<std::size_t>(c)] = col.at(c).get<double>();
        p.terrains.push_back(t);
    }
    return p;
}

void write_split_file(const std::filesystem::path& path, const DatasetManifest& m,
                      const std::vector<Sample>& samples) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw DataError("dataset: cannot open " + path.string() + " for writing");
    f.write(kMagic, sizeof(kMagic));
    const std::uint64_t header[3] = {static_cast<std::uint64_t>(m.k),
                                     static_cast<std::uint64_t>(m.tile_px),
                                     samples.size()};
    f.write(reinterpret_cast<const char*>(header), sizeof(header));
    std::vector<float> pixels;
    for (const Sample& s : samples) {
        pixels.resize(static_cast<std::size_t>(s.image.numel()));
        for (Eigen::Index i = 0; i < s.image.numel(); ++i) {
            pixels[static_cast<std::size_t>(i)] = static_cast<float>(s.image.data[i]);
        }
        f.write(reinterpret_cast<const char*>(pixels.data()),
                static_cast<std::streamsize>(pixels.size() * sizeof(float)));
        // row-major weight/mask records
        for (Eigen::Index i = 0; i < m.k; ++i) {
            f.write(reinterpret_cast<const char*>(s.true_weights.row(i).eval().data()),
                    static_cast<std::streamsize>(m.k * sizeof(double)));
        }
        for (Eigen::Index i = 0; i < m.k; ++i) {
            f.write(reinterpret_cast<const char*>(s.true_mask.row(i).eval().data()),
                    static_cast<std::streamsize>(m.k));
        }
        f.write(reinterpret_cast<const char*>(&s.optimal_cost), sizeof(double));
    }
    if (!f) throw DataError("dataset: write failed for " + path.string());
}

std::vector<Sample> read_split_file(const std::filesystem::path& path,
                                    const DatasetManifest& m, std::int64_t expected_count) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("dataset: cannot open " + path.string());
    const std::string name = path.filename().string();
    char magic[8] = {};
    f.read(magic, sizeof(magic));
    if (!f || std::string(magic, 8) != std::string(kMagic, 8)) {
        throw DataError("dataset: " + name + ": bad magic (expected GRIDSP01)");
    }
    std::uint64_t header[3] = {};
    f.read(reinterpret_cast<char*>(header), sizeof(header));
    if (!f) throw DataError("dataset: " + name + ": truncated header");
    if (header[0] != static_cast<std::uint64_t>(m.k) ||
        header[1] != static_cast<std::uint64_t>(m.tile_px)) {
        throw DataError("dataset: " + name + ": header (k, p) disagrees with manifest");
    }
    if (header[2] != static_cast<std::uint64_t>(expected_count)) {
        throw DataError("dataset: " + name + ": sample count disagrees with manifest");
    }

    const Eigen::Index side = m.k * m.tile_px;
    std::vector<Sample> samples(header[2]);
    std::vector<float> pixels(static_cast<std::size_t>(3 * side * side));
    for (std::uint64_t idx = 0; idx < header[2]; ++idx) {
        Sample& s = samples[idx];
        const std::string where = name + ": sample " + std::to_string(idx);
        f.read(reinterpret_cast<char*>(pixels.data()),
               static_cast<std::streamsize>(pixels.size() * sizeof(float)));
        if (!f) throw DataError("dataset: " + where + ": truncated image record");
        s.image = Tensor({3, side, side});
        for (Eigen::Index i = 0; i < s.image.numel(); ++i) {
            s.image.data[i] = static_cast<double>(pixels[static_cast<std::size_t>(i)]);
        }
        s.true_weights = WeightGrid(m.k, m.k);
        for (Eigen::Index i = 0; i < m.k; ++i) {
            Eigen::ArrayXd row(m.k);
            f.read(reinterpret_cast<char*>(row.data()),
                   static_cast<std::streamsize>(m.k * sizeof(double)));
            if (!f) throw DataError("dataset: " + where + ": truncated weights record");
            s.true_weights.row(i) = row.transpose();
        }
        s.true_mask = PathMask(m.k, m.k);
        for (Eigen::Index i = 0; i < m.k; ++i) {
            Eigen::Array<std::uint8_t, Eigen::Dynamic, 1> row(m.k);
            f.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(m.k));
            if (!f) throw DataError("dataset: " + where + ": truncated mask record");
            s.true_mask.row(i) = row.transpose();
        }
        f.read(reinterpret_cast<char*>(&s.optimal_cost), sizeof(double));
        if (!f) throw DataError("dataset: " + where + ": truncated cost record");
        s.terrain_ids = Eigen::ArrayXXi();  // not serialized
    }
    // trailing bytes mean the count header lied
    f.peek();
    if (!f.eof()) throw DataError("dataset: " + name + ": trailing bytes after last sample");
    return samples;
}

}  // namespace

void write_dataset(const std::filesystem::path& dir, const DatasetManifest& manifest,
                   const SplitMap& splits) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["version"] = manifest.version;
    j["seed"] = manifest.seed;
    j["k"] = manifest.k;
    j["tile_px"] = manifest.tile_px;
    j["cluster_prob"] = manifest.cluster_prob;
    j["palette"] = palette_json(manifest.palette);
    j["splits"] = nlohmann::json::object();
    for (const auto& [split, count] : manifest.split_counts) {
        j["splits"][split] = {{"count", count}, {"file", split + ".gsp"}};
    }
    std::ofstream mf(dir / "manifest.json", std::ios::trunc);
    if (!mf) throw DataError("dataset: cannot write manifest.json");
    mf << j.dump(2) << "\n";

    for (const auto& [split, samples] : splits) {
        const auto it = manifest.split_counts.find(split);
        if (it == manifest.split_counts.end() ||
            it->second != static_cast<std::int64_t>(samples.size())) {
            throw DataError("dataset: split " + split + " disagrees with manifest counts");
        }
        write_split_file(dir / (split + ".gsp"), manifest, samples);
    }
}

Dataset read_dataset(const std::filesystem::path& dir) {
    std::ifstream mf(dir / "manifest.json");
    if (!mf) throw DataError("dataset: cannot open " + (dir / "manifest.json").string());
    nlohmann::json j;
    try {
        mf >> j;
    } catch (const nlohmann::json::exception& e) {
        throw DataError("dataset: manifest.json is not valid JSON: " + std::string(e.what()));
    }

    Dataset ds;
    try {
        ds.manifest.version = j.at("version").get<int>();
        ds.manifest.seed = j.at("seed").get<std::uint64_t>();
        ds.manifest.k = j.at("k").get<Eigen::Index>();
        ds.manifest.tile_px = j.at("tile_px").get<Eigen::Index>();
        ds.manifest.cluster_prob = j.at("cluster_prob").get<double>();
        ds.manifest.palette = palette_from_json(j.at("palette"));
        for (const auto& [split, entry] : j.at("splits").items()) {
            ds.manifest.split_counts[split] = entry.at("count").get<std::int64_t>();
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError("dataset: manifest.json missing fields: " + std::string(e.what()));
    }

    for (const auto& [split, count] : ds.manifest.split_counts) {
        ds.splits[split] = read_split_file(dir / (split + ".gsp"), ds.manifest, count);
    }
    return ds;
}

}  // namespace gridpath
