#include "gridpath/train.hpp"

#include "gridpath/bbox.hpp"
#include "gridpath/checkpoint.hpp"
#include "gridpath/errors.hpp"
#include "gridpath/hyper.hpp"
#include "gridpath/rng.hpp"
#include "gridpath/tcr.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace gridpath {

namespace {

constexpr double kCostMatchTol = 1e-9;

SolverId fixed_solver(const RunConfig& cfg) {
    if (cfg.solver == SolverChoice::Dijkstra) return SolverId::Dijkstra;
    return cfg.heuristic == HeuristicKind::Zero ? SolverId::AStarZero
                                                : SolverId::AStarMinChebyshev;
}

double norm_expansions(const SolverStats& s, Eigen::Index k) {
    return static_cast<double>(s.expansions) / static_cast<double>(k * k);
}

std::filesystem::path checkpoint_path(const std::filesystem::path& dir, int epoch) {
    char name[40];
    std::snprintf(name, sizeof(name), "checkpoint-%03d.cgrd", epoch);
    return dir / name;
}

}  // namespace

ArchitectureSpec arch_for(const RunConfig& cfg, const DatasetManifest& manifest) {
    return ArchitectureSpec::desk_scale(manifest.k, manifest.tile_px,
                                        cfg.solver == SolverChoice::Hyper);
}

EpochMetrics evaluate_split(const ModelParams& params, const ArchitectureSpec& arch,
                            const std::vector<Sample>& samples, const RunConfig& cfg,
                            int epoch, const std::string& split_name) {
    const Eigen::Index k = arch.k;
    const GridProblem problem(k);
    EpochMetrics m;
    m.epoch = epoch;
    m.split = split_name;
    m.has_wall_time = cfg.tcr.unit == TimeUnit::WallSeconds;
    UsageCounter usage;

    std::int64_t matches = 0, ham_sum = 0;
    double tcr_sum = 0.0, norm_sum = 0.0, wall_sum = 0.0;
    for (const Sample& smp : samples) {
        const ModelOutput out = model_forward(params, smp.image, arch);
        const SolverId sid = cfg.solver == SolverChoice::Hyper
                                 ? route(out.choice.value(), out.weights, cfg.hyper)
                                 : fixed_solver(cfg);
        const SolveResult res = run_solver(sid, out.weights, problem);
        (sid == SolverId::Dijkstra ? usage.dijkstra_count : usage.astar_count)++;
        ham_sum += hamming(res.mask, smp.true_mask);
        const double priced = path_cost(smp.true_weights, res.mask, problem.start);
        if (std::abs(priced - smp.optimal_cost) <= kCostMatchTol) ++matches;
        tcr_sum += tcr_term(time_cost(res.stats, k, cfg.tcr), cfg.tcr);
        norm_sum += norm_expansions(res.stats, k);
        wall_sum += res.stats.wall_seconds;
    }
    const double n = static_cast<double>(samples.size());
    m.exact_cost_match_acc = matches / n;
    m.mean_hamming = static_cast<double>(ham_sum) / n;
    m.per_cell_acc = 1.0 - m.mean_hamming / static_cast<double>(k * k);
    m.avg_batch_time_norm = norm_sum / n;
    m.avg_batch_time_s = wall_sum / n;
    m.tcr_term = tcr_sum / n;
    m.l1_term = cfg.alpha_l1 * params.l1_norm();
    m.astar_count = usage.astar_count;
    m.dijkstra_count = usage.dijkstra_count;
    m.usage_ratio = usage_ratio(usage);
    return m;
}

TrainResult run_training(const RunConfig& cfg, const Dataset& data) {
    cfg.validate();
    const auto train_it = data.splits.find("train");
    if (train_it == data.splits.end() || train_it->second.empty()) {
        throw DataError("train: dataset has no train split");
    }
    const std::vector<Sample>& train = train_it->second;
    const Eigen::Index k = data.manifest.k;
    const GridProblem problem(k);

    TrainResult result;
    result.arch = arch_for(cfg, data.manifest);
    result.params = init_params(result.arch, cfg.seed, cfg.choice_delta);
    ModelParams& params = result.params;

    const bool write_files = !cfg.out_dir.empty();
    if (write_files) {
        std::filesystem::create_directories(cfg.out_dir);
        write_checkpoint(checkpoint_path(cfg.out_dir, 0), params);
    }

    const std::vector<Sample>* eval_samples = nullptr;
    if (cfg.eval_split != "none") {
        const auto it = data.splits.find(cfg.eval_split);
        if (it == data.splits.end()) {
            throw DataError("train: eval split '" + cfg.eval_split + "' not in dataset");
        }
        eval_samples = &it->second;
        result.rows.push_back(
            evaluate_split(params, result.arch, *eval_samples, cfg, 0, cfg.eval_split));
    }

    Rng shuffle_rng(mix_seed(cfg.seed, 0x53485546));  // "SHUF"
    Rng probe_rng(mix_seed(cfg.seed, 0x50524f42));    // "PROB"

    ModelParams velocity = params.zeros_like();
    AdamState adam{params.zeros_like(), params.zeros_like(), 0};
    double lr = cfg.lr;

    std::vector<std::size_t> perm(train.size());
    std::iota(perm.begin(), perm.end(), 0);

    for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
        // Fisher-Yates with the shuffle stream
        for (std::size_t i = perm.size(); i > 1; --i) {
            const std::size_t j = shuffle_rng.uniform_int(i);
            std::swap(perm[i - 1], perm[j]);
        }

        UsageCounter usage;
        std::int64_t matches = 0, ham_sum = 0, batches = 0;
        double tcr_sum = 0.0, l1_sum = 0.0, batch_norm_sum = 0.0, batch_wall_sum = 0.0;

        for (std::size_t b0 = 0; b0 < perm.size(); b0 += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t b1 =
                std::min(perm.size(), b0 + static_cast<std::size_t>(cfg.batch_size));
            const auto batch_t0 = std::chrono::steady_clock::now();
            const double batch_l1_term = cfg.alpha_l1 * params.l1_norm();
            ModelParams grads = params.zeros_like();
            double batch_norm_time = 0.0;

            for (std::size_t bi = b0; bi < b1; ++bi) {
                const Sample& smp = train[perm[bi]];
                const ModelOutput out = model_forward(params, smp.image, result.arch);
                if (!out.weights.isFinite().all()) {
                    throw NumericError("train: non-finite model weights at epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batches) + " (sample " +
                                       std::to_string(perm[bi]) + ")");
                }
                const SolverId sid = cfg.solver == SolverChoice::Hyper
                                         ? route(out.choice.value(), out.weights, cfg.hyper)
                                         : fixed_solver(cfg);
                auto [mask, ctx] = bb_forward(out.weights, problem, sid, cfg.bbox);

                const std::int64_t ham = hamming(mask, smp.true_mask);
                const double t_fwd = time_cost(ctx.stats, k, cfg.tcr);
                const double sample_tcr = tcr_term(t_fwd, cfg.tcr);
                const double total = static_cast<double>(ham) + batch_l1_term + sample_tcr;
                if (!std::isfinite(total)) {
                    throw NumericError("train: non-finite loss at epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batches) + " (sample " +
                                       std::to_string(perm[bi]) + ")");
                }

                const GradGrid upstream = hamming_grad(smp.true_mask);
                const BackwardResult bwd = bb_backward(ctx, upstream, cfg.bbox);
                // The common mode of the blackbox gradient only reflects the
                // cell-count difference between the two solves; argmin paths
                // depend on relative costs, and keeping the common mode
                // drives every weight into the softplus floor.
                GradGrid bb_grad = bwd.grad_weights;
                if (cfg.center_grad) bb_grad -= bb_grad.mean();
                const GradGrid gw =
                    bb_grad + tcr_weight_grad(ctx.expanded, ctx.y_hat, cfg.tcr);

                double gchoice = 0.0;
                batch_norm_time += norm_expansions(ctx.stats, k) +
                                   norm_expansions(bwd.perturbed_stats, k);
                if (cfg.solver == SolverChoice::Hyper) {
                    (sid == SolverId::Dijkstra ? usage.dijkstra_count : usage.astar_count)++;
                    const bool probed = probe_rng.uniform() < cfg.hyper.probe_probability;
                    if (probed) {
                        // paired probe: run the solver the router did not pick
                        double t_astar, t_dijkstra;
                        if (sid == SolverId::Dijkstra) {
                            const SolveResult other =
                                run_solver(SolverId::AStarMinChebyshev, out.weights, problem);
                            t_astar = time_cost(other.stats, k, cfg.tcr);
                            t_dijkstra = t_fwd;
                            batch_norm_time += norm_expansions(other.stats, k);
                        } else {
                            const SolveResult other =
                                run_solver(SolverId::Dijkstra, out.weights, problem);
                            t_astar = t_fwd;
                            t_dijkstra = time_cost(other.stats, k, cfg.tcr);
                            batch_norm_time += norm_expansions(other.stats, k);
                        }
                        gchoice = choice_grad(t_astar, t_dijkstra, cfg.tcr.lambda_t, true);
                    }
                } else {
                    (sid == SolverId::Dijkstra ? usage.dijkstra_count : usage.astar_count)++;
                }

                const ModelParams pg =
                    model_backward(params, result.arch, out.tape, gw, gchoice);
                for (std::size_t ti = 0; ti < grads.tensors.size(); ++ti) {
                    grads.tensors[ti].second.data += pg.tensors[ti].second.data;
                }

                ham_sum += ham;
                tcr_sum += sample_tcr;
                const double priced = path_cost(smp.true_weights, mask, problem.start);
                if (std::abs(priced - smp.optimal_cost) <= kCostMatchTol) ++matches;
            }

            const double inv_n = 1.0 / static_cast<double>(b1 - b0);
            for (auto& [name, t] : grads.tensors) t.data *= inv_n;
            switch (cfg.optimizer) {
                case OptimizerKind::Sgd:
                    optimizer_step(params, grads, lr, cfg.alpha_l1);
                    break;
                case OptimizerKind::Momentum:
                    optimizer_step(params, velocity, grads, lr, cfg.alpha_l1, cfg.momentum);
                    break;
                case OptimizerKind::Adam:
                    adam_step(params, adam, grads, lr, cfg.alpha_l1);
                    break;
            }

            ++batches;
            l1_sum += batch_l1_term;
            batch_norm_sum += batch_norm_time;
            batch_wall_sum +=
                std::chrono::duration<double>(std::chrono::steady_clock::now() - batch_t0)
                    .count();
        }

        EpochMetrics m;
        m.epoch = epoch;
        m.split = "train";
        m.has_wall_time = cfg.tcr.unit == TimeUnit::WallSeconds;
        const double n = static_cast<double>(perm.size());
        m.exact_cost_match_acc = static_cast<double>(matches) / n;
        m.mean_hamming = static_cast<double>(ham_sum) / n;
        m.per_cell_acc = 1.0 - m.mean_hamming / static_cast<double>(k * k);
        m.avg_batch_time_s = batch_wall_sum / static_cast<double>(batches);
        m.avg_batch_time_norm = batch_norm_sum / static_cast<double>(batches);
        m.tcr_term = tcr_sum / n;
        m.l1_term = l1_sum / static_cast<double>(batches);
        m.astar_count = usage.astar_count;
        m.dijkstra_count = usage.dijkstra_count;
        m.usage_ratio = usage_ratio(usage);
        result.rows.push_back(m);

        if (write_files) write_checkpoint(checkpoint_path(cfg.out_dir, epoch), params);
        if (eval_samples != nullptr) {
            result.rows.push_back(
                evaluate_split(params, result.arch, *eval_samples, cfg, epoch, cfg.eval_split));
        }
        lr *= cfg.lr_decay;
    }

    if (write_files) write_metrics_csv(cfg.out_dir / "metrics.csv", result.rows);
    return result;
}

}  // namespace gridpath
