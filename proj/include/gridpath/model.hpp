#pragma once

#include "gridpath/grid.hpp"
#include "gridpath/rng.hpp"
#include "gridpath/tensor.hpp"

#include <optional>
#include <string>
#include <vector>

namespace gridpath {

struct ConvStage {
    Eigen::Index out_channels = 1;
    Eigen::Index kernel = 3;   // odd, zero-padded to preserve the spatial extent
    Eigen::Index stride = 1;   // only 1 is supported; pooling does the downsampling
    Eigen::Index pool = 1;     // average-pool factor, 1 = none
    bool relu = true;
};

/// Feature extractor geometry: (k*p) x (k*p) x 3 image in, k x k features out.
struct ArchitectureSpec {
    Eigen::Index k = 12;
    Eigen::Index tile_px = 8;
    bool hyper_mode = false;  // adds the choice row to the FC head
    std::vector<ConvStage> stages;

    Eigen::Index input_side() const { return k * tile_px; }
    Eigen::Index fc_outputs() const { return k * k + (hyper_mode ? 1 : 0); }

    /// Default desk-scale extractor: three 3x3 stages (8, 16, 1 channels),
    /// ReLU on the first two, pooling factors multiplying to tile_px.
    /// tile_px must be a power of two in [1, 8].
    static ArchitectureSpec desk_scale(Eigen::Index k, Eigen::Index tile_px, bool hyper_mode);

    /// Throws ConfigError unless the stages reduce the image to k x k x 1.
    void validate() const;
};

/// FC head initializer: identity (k^2 x k^2), or in hyper mode (k^2+1) x k^2
/// with the identity block plus one extra row of uniform values in
/// [-delta, +delta] so the choice logit starts near the decision boundary.
Tensor fc_head_init(Eigen::Index k, bool hyper_mode, double delta, Rng& rng);

/// Seeded parameter set for an architecture: uniform Glorot conv kernels,
/// zero biases, fc_head_init for the head.
ModelParams init_params(const ArchitectureSpec& spec, std::uint64_t seed, double delta = 0.01);

/// Everything the backward pass needs; valid until the next parameter update.
struct ForwardTape {
    std::uint64_t params_version = 0;
    Tensor input;
    std::vector<Tensor> preact;       // conv + bias output per stage
    std::vector<Tensor> postact;      // after ReLU (aliases preact values when relu=false)
    std::vector<Tensor> pooled;       // after average pooling
    Eigen::VectorXd features;         // flattened (row-major) final stage output
    Eigen::VectorXd fc_out;           // head outputs before softplus/logistic
};

struct ModelOutput {
    WeightGrid weights;               // softplus(fc) + floor, strictly positive
    std::optional<double> choice;     // logistic(extra fc output) in hyper mode
    ForwardTape tape;
};

inline constexpr double kWeightFloor = 1e-3;

/// Image must be a {3, k*p, k*p} tensor. Throws on shape mismatch.
ModelOutput model_forward(const ModelParams& params, const Tensor& image,
                          const ArchitectureSpec& spec);

/// Reverse-mode accumulation through the head and conv stages.
/// grad_weights is dL/d(weight grid); grad_choice is dL/d(choice scalar)
/// (ignored when the architecture has no choice head).
/// Throws std::logic_error if the tape is stale.
ModelParams model_backward(const ModelParams& params, const ArchitectureSpec& spec,
                           const ForwardTape& tape, const GradGrid& grad_weights,
                           double grad_choice = 0.0);

/// SGD with an l1 subgradient: w <- w - lr * (g + alpha_l1 * sign(w)),
/// sign(0) = 0. Bumps the parameter version.
void optimizer_step(ModelParams& params, const ModelParams& grads, double lr, double alpha_l1);

/// Momentum variant: v <- momentum * v + (g + alpha_l1 * sign(w)),
/// w <- w - lr * v. momentum = 0 reproduces the plain step exactly.
/// velocity must be zeros_like(params) on the first call.
void optimizer_step(ModelParams& params, ModelParams& velocity, const ModelParams& grads,
                    double lr, double alpha_l1, double momentum);

/// Adam moments; both tensors start as zeros_like(params), step at 0.
struct AdamState {
    ModelParams m;
    ModelParams v;
    std::int64_t step = 0;
};

/// Adam with the same l1 subgradient folded into the gradient.
void adam_step(ModelParams& params, AdamState& state, const ModelParams& grads, double lr,
               double alpha_l1, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);

double softplus(double x);
double logistic(double x);

}  // namespace gridpath
