#include "gridpath/bench.hpp"
#include "gridpath/checkpoint.hpp"
#include "gridpath/config.hpp"
#include "gridpath/errors.hpp"
#include "gridpath/train.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

namespace {

using namespace gridpath;

RunConfig load_config(const std::string& config_path, const std::vector<std::string>& sets) {
    RunConfig cfg;
    if (!config_path.empty()) cfg = RunConfig::from_file(config_path);
    cfg.apply_overrides(sets);
    return cfg;
}

TerrainPalette parse_palette(const std::string& text) {
    // "cost:r,g,b;cost:r,g,b;..."
    TerrainPalette palette;
    std::size_t pos = 0;
    int id = 0;
    while (pos < text.size()) {
        const std::size_t end = text.find(';', pos);
        const std::string entry = text.substr(pos, end == std::string::npos ? end : end - pos);
        Terrain t;
        t.id = id++;
        if (std::sscanf(entry.c_str(), "%lf:%lf,%lf,%lf", &t.cost, &t.color[0], &t.color[1],
                        &t.color[2]) != 4) {
            throw ConfigError("gen-data: bad palette entry '" + entry +
                              "' (expected cost:r,g,b)");
        }
        palette.terrains.push_back(t);
        if (end == std::string::npos) break;
        pos = end + 1;
    }
    palette.validate();
    return palette;
}

int cmd_gen_data(const RunConfig& cfg, const std::string& palette_text) {
    if (cfg.out_dir.empty()) throw ConfigError("gen-data: out directory required");
    DatasetManifest manifest;
    manifest.seed = cfg.seed;
    manifest.k = cfg.k;
    manifest.tile_px = cfg.tile_px;
    manifest.cluster_prob = cfg.cluster_prob;
    manifest.palette =
        palette_text.empty() ? TerrainPalette::default_palette() : parse_palette(palette_text);
    manifest.split_counts = {{"train", cfg.train_count},
                             {"val", cfg.val_count},
                             {"test", cfg.test_count}};
    write_dataset(cfg.out_dir, manifest, generate_dataset(manifest));
    std::cout << "wrote dataset to " << cfg.out_dir.string() << "\n";
    return 0;
}

int cmd_train(const RunConfig& cfg) {
    if (cfg.dataset_dir.empty()) throw ConfigError("train: dataset directory required");
    const Dataset data = read_dataset(cfg.dataset_dir);
    const TrainResult res = run_training(cfg, data);
    std::cout << metrics_csv_header() << "\n";
    for (const EpochMetrics& m : res.rows) std::cout << metrics_csv_row(m) << "\n";
    if (!cfg.out_dir.empty()) {
        std::cout << "checkpoints and metrics.csv under " << cfg.out_dir.string() << "\n";
    }
    return 0;
}

int cmd_eval(RunConfig cfg, const std::string& checkpoint, const std::string& split) {
    if (cfg.dataset_dir.empty()) throw ConfigError("eval: dataset directory required");
    const Dataset data = read_dataset(cfg.dataset_dir);
    const ModelParams params = read_checkpoint(checkpoint);

    const Eigen::Index k = data.manifest.k;
    const Tensor& fc = params.find("fc.weight");
    if (fc.rank() != 2 || fc.dims[1] != k * k) {
        throw DataError("eval: checkpoint head expects k*k = " + std::to_string(fc.dims[1]) +
                        " inputs but the dataset has k = " + std::to_string(k));
    }
    const bool hyper_head = fc.dims[0] == k * k + 1;
    if (hyper_head != (cfg.solver == SolverChoice::Hyper)) {
        throw ConfigError(
            "eval: checkpoint and config disagree about the hyper choice head "
            "(set solver=hyper iff the checkpoint was trained with it)");
    }
    const auto it = data.splits.find(split);
    if (it == data.splits.end()) throw DataError("eval: no split named '" + split + "'");

    const ArchitectureSpec arch = arch_for(cfg, data.manifest);
    const EpochMetrics m = evaluate_split(params, arch, it->second, cfg, 0, split);
    std::cout << metrics_csv_header() << "\n" << metrics_csv_row(m) << "\n";
    return 0;
}

int cmd_bench(const RunConfig& cfg, Eigen::Index bench_k, int instances,
              const std::string& checkpoint, int model_grids, const std::string& out) {
    std::vector<WeightGrid> grids;
    if (!checkpoint.empty()) {
        if (cfg.dataset_dir.empty()) {
            throw ConfigError("bench: --checkpoint needs --set dataset=<dir> for input images");
        }
        const Dataset data = read_dataset(cfg.dataset_dir);
        const ModelParams params = read_checkpoint(checkpoint);
        RunConfig model_cfg = cfg;
        const Tensor& fc = params.find("fc.weight");
        model_cfg.solver = fc.dims[0] == data.manifest.k * data.manifest.k + 1
                               ? SolverChoice::Hyper
                               : SolverChoice::Dijkstra;
        const ArchitectureSpec arch = arch_for(model_cfg, data.manifest);
        const auto& samples = data.splits.begin()->second;
        for (int i = 0; i < model_grids && i < static_cast<int>(samples.size()); ++i) {
            grids.push_back(model_forward(params, samples[i].image, arch).weights);
        }
    }
    const std::vector<BenchRow> rows = run_bench(bench_k, instances, cfg.seed, grids);
    if (out.empty()) {
        std::cout << "family,solver,k,instance,expansions,relaxations,work_norm,"
                     "wall_seconds,cost\n";
        for (const BenchRow& r : rows) {
            std::cout << r.family << ',' << r.solver << ',' << r.k << ',' << r.instance << ','
                      << r.expansions << ',' << r.relaxations << ',' << r.work_norm << ','
                      << r.wall_seconds << ',' << r.cost << "\n";
        }
    } else {
        write_bench_csv(out, rows);
        std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
    }
    return 0;
}

int cmd_inspect(const RunConfig& cfg, const std::string& split, int index) {
    if (cfg.dataset_dir.empty()) throw ConfigError("inspect: dataset directory required");
    const Dataset data = read_dataset(cfg.dataset_dir);
    const auto it = data.splits.find(split);
    if (it == data.splits.end()) throw DataError("inspect: no split named '" + split + "'");
    if (index < 0 || index >= static_cast<int>(it->second.size())) {
        throw DataError("inspect: sample index out of range");
    }
    const Sample& s = it->second[static_cast<std::size_t>(index)];
    const Eigen::Index k = data.manifest.k;
    std::printf("split %s sample %d: k=%lld p=%lld optimal_cost=%.6f\n", split.c_str(), index,
                static_cast<long long>(k), static_cast<long long>(data.manifest.tile_px),
                s.optimal_cost);
    std::printf("true weights ('*' marks the optimal path):\n");
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            std::printf("%7.2f%c", s.true_weights(i, j), s.true_mask(i, j) ? '*' : ' ');
        }
        std::printf("\n");
    }
    std::printf("mask:\n");
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            std::printf("%c", s.true_mask(i, j) ? '*' : '.');
        }
        std::printf("\n");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grid shortest-path solvers as differentiable layers"};
    app.require_subcommand(1);
    app.fallthrough();  // --config/--set may follow the subcommand name

    std::string config_path, palette_text, checkpoint, split = "test", bench_out;
    std::vector<std::string> sets;
    int index = 0, instances = 20, model_grids = 8;
    Eigen::Index bench_k = 32;

    app.add_option("--config", config_path, "flat key=value config file")->expected(1);
    app.add_option("--set", sets, "override a config key (key=value, repeatable)");

    auto* gen = app.add_subcommand("gen-data", "generate a synthetic terrain dataset");
    gen->add_option("--palette", palette_text, "cost:r,g,b;... terrain palette");

    app.add_subcommand("train", "train a model with a blackbox solver layer");

    auto* ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset split");
    ev->add_option("--checkpoint", checkpoint, "checkpoint file")->required();
    ev->add_option("--split", split, "dataset split (default test)");

    auto* bench = app.add_subcommand("bench", "compare solvers over grid families");
    bench->add_option("--k", bench_k, "grid side (default 32)");
    bench->add_option("--instances", instances, "random instances (default 20)");
    bench->add_option("--checkpoint", checkpoint, "optional checkpoint for model grids");
    bench->add_option("--model-grids", model_grids, "model grids to include (default 8)");
    bench->add_option("--out", bench_out, "CSV output path (default stdout)");

    auto* ins = app.add_subcommand("inspect", "dump a sample's weights and mask as text");
    ins->add_option("--split", split, "dataset split (default test)");
    ins->add_option("--index", index, "sample index (default 0)");

    CLI11_PARSE(app, argc, argv);

    try {
        gridpath::RunConfig cfg = load_config(config_path, sets);
        cfg.validate();
        if (gen->parsed()) return cmd_gen_data(cfg, palette_text);
        if (app.get_subcommand("train")->parsed()) return cmd_train(cfg);
        if (ev->parsed()) return cmd_eval(cfg, checkpoint, split);
        if (bench->parsed()) return cmd_bench(cfg, bench_k, instances, checkpoint,
                                              model_grids, bench_out);
        if (ins->parsed()) return cmd_inspect(cfg, split, index);
    } catch (const gridpath::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const gridpath::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const gridpath::NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
