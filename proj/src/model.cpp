#include "gridpath/model.hpp"

#include "gridpath/errors.hpp"
#include "gridpath/model_ops.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gridpath {

double softplus(double x) {
    if (x > 30.0) return x;
    if (x < -30.0) return std::exp(x);
    return std::log1p(std::exp(x));
}

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

ArchitectureSpec ArchitectureSpec::desk_scale(Eigen::Index k, Eigen::Index tile_px,
                                              bool hyper_mode) {
    std::vector<Eigen::Index> pools;
    switch (tile_px) {
        case 1: pools = {1, 1, 1}; break;
        case 2: pools = {2, 1, 1}; break;
        case 4: pools = {2, 2, 1}; break;
        case 8: pools = {2, 2, 2}; break;
        default:
            throw ConfigError("desk_scale: tile_px must be one of {1, 2, 4, 8}, got " +
                              std::to_string(tile_px));
    }
    ArchitectureSpec spec;
    spec.k = k;
    spec.tile_px = tile_px;
    spec.hyper_mode = hyper_mode;
    // pool late: convolutions run at the highest resolution the budget
    // allows, keeping 3x3 kernels inside single terrain tiles
    spec.stages = {
        ConvStage{8, 3, 1, pools[2], true},
        ConvStage{16, 3, 1, pools[1], true},
        ConvStage{1, 3, 1, pools[0], false},
    };
    spec.validate();
    return spec;
}

void ArchitectureSpec::validate() const {
    if (k < 1 || tile_px < 1) throw ConfigError("architecture: k and tile_px must be >= 1");
    if (stages.empty()) throw ConfigError("architecture: needs at least one conv stage");
    Eigen::Index side = input_side();
    for (const ConvStage& s : stages) {
        if (s.stride != 1) throw ConfigError("architecture: only stride 1 is supported");
        if (s.kernel < 1 || s.kernel % 2 == 0) {
            throw ConfigError("architecture: kernels must be odd (same padding)");
        }
        if (s.pool < 1 || side % s.pool != 0) {
            throw ConfigError("architecture: pool factor must divide the spatial side");
        }
        side /= s.pool;
    }
    if (side != k) {
        throw ConfigError("architecture: stages reduce the image to " + std::to_string(side) +
                          " x " + std::to_string(side) + ", expected k = " + std::to_string(k));
    }
    if (stages.back().out_channels != 1) {
        throw ConfigError("architecture: final stage must emit one channel");
    }
}

Tensor fc_head_init(Eigen::Index k, bool hyper_mode, double delta, Rng& rng) {
    if (k < 1) throw std::invalid_argument("fc_head_init: k must be >= 1");
    if (delta <= 0.0) throw std::invalid_argument("fc_head_init: delta must be positive");
    const Eigen::Index in = k * k;
    const Eigen::Index out = in + (hyper_mode ? 1 : 0);
    Tensor fc({out, in});
    for (Eigen::Index i = 0; i < in; ++i) fc.data[i * in + i] = 1.0;
    if (hyper_mode) {
        for (Eigen::Index j = 0; j < in; ++j) fc.data[in * in + j] = rng.uniform(-delta, delta);
    }
    return fc;
}

ModelParams init_params(const ArchitectureSpec& spec, std::uint64_t seed, double delta) {
    spec.validate();
    ModelParams params;
    Rng rng(seed);
    Eigen::Index in_channels = 3;
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const ConvStage& s = spec.stages[i];
        const std::string base = "conv" + std::to_string(i + 1);
        Tensor kernel({s.out_channels, in_channels, s.kernel, s.kernel});
        const double fan_in = static_cast<double>(in_channels * s.kernel * s.kernel);
        const double fan_out = static_cast<double>(s.out_channels * s.kernel * s.kernel);
        const double scale = std::sqrt(6.0 / (fan_in + fan_out));
        for (Eigen::Index j = 0; j < kernel.numel(); ++j) {
            kernel.data[j] = rng.uniform(-scale, scale);
        }
        params.tensors.emplace_back(base + ".kernel", std::move(kernel));
        params.tensors.emplace_back(base + ".bias", Tensor({s.out_channels}));
        in_channels = s.out_channels;
    }
    Rng head_rng = rng.fork(0x4643);
    params.tensors.emplace_back("fc.weight",
                                fc_head_init(spec.k, spec.hyper_mode, delta, head_rng));
    return params;
}

namespace ops {

// conv with same zero padding, stride 1
void conv_forward(const Tensor& in, const Tensor& kernel, const Tensor& bias, Tensor& out) {
    const Eigen::Index ic = in.dims[0], h = in.dims[1], wdt = in.dims[2];
    const Eigen::Index oc = kernel.dims[0], ksz = kernel.dims[2];
    const Eigen::Index pad = ksz / 2;
    for (Eigen::Index o = 0; o < oc; ++o) {
        for (Eigen::Index y = 0; y < h; ++y) {
            for (Eigen::Index x = 0; x < wdt; ++x) {
                double acc = bias.data[o];
                for (Eigen::Index c = 0; c < ic; ++c) {
                    for (Eigen::Index dy = 0; dy < ksz; ++dy) {
                        const Eigen::Index sy = y + dy - pad;
                        if (sy < 0 || sy >= h) continue;
                        for (Eigen::Index dx = 0; dx < ksz; ++dx) {
                            const Eigen::Index sx = x + dx - pad;
                            if (sx < 0 || sx >= wdt) continue;
                            acc += in.data[(c * h + sy) * wdt + sx] *
                                   kernel.data[((o * ic + c) * ksz + dy) * ksz + dx];
                        }
                    }
                }
                out.data[(o * h + y) * wdt + x] = acc;
            }
        }
    }
}

void conv_backward(const Tensor& in, const Tensor& kernel, const Tensor& dout, Tensor& dkernel,
                   Tensor& dbias, Tensor& din) {
    const Eigen::Index ic = in.dims[0], h = in.dims[1], wdt = in.dims[2];
    const Eigen::Index oc = kernel.dims[0], ksz = kernel.dims[2];
    const Eigen::Index pad = ksz / 2;
    for (Eigen::Index o = 0; o < oc; ++o) {
        for (Eigen::Index y = 0; y < h; ++y) {
            for (Eigen::Index x = 0; x < wdt; ++x) {
                const double g = dout.data[(o * h + y) * wdt + x];
                if (g == 0.0) continue;
                dbias.data[o] += g;
                for (Eigen::Index c = 0; c < ic; ++c) {
                    for (Eigen::Index dy = 0; dy < ksz; ++dy) {
                        const Eigen::Index sy = y + dy - pad;
                        if (sy < 0 || sy >= h) continue;
                        for (Eigen::Index dx = 0; dx < ksz; ++dx) {
                            const Eigen::Index sx = x + dx - pad;
                            if (sx < 0 || sx >= wdt) continue;
                            dkernel.data[((o * ic + c) * ksz + dy) * ksz + dx] +=
                                g * in.data[(c * h + sy) * wdt + sx];
                            din.data[(c * h + sy) * wdt + sx] +=
                                g * kernel.data[((o * ic + c) * ksz + dy) * ksz + dx];
                        }
                    }
                }
            }
        }
    }
}

void pool_forward(const Tensor& in, Eigen::Index factor, Tensor& out) {
    const Eigen::Index c = in.dims[0], h = in.dims[1], wdt = in.dims[2];
    const Eigen::Index oh = h / factor, ow = wdt / factor;
    const double inv = 1.0 / static_cast<double>(factor * factor);
    for (Eigen::Index ch = 0; ch < c; ++ch) {
        for (Eigen::Index y = 0; y < oh; ++y) {
            for (Eigen::Index x = 0; x < ow; ++x) {
                double acc = 0.0;
                for (Eigen::Index dy = 0; dy < factor; ++dy) {
                    for (Eigen::Index dx = 0; dx < factor; ++dx) {
                        acc += in.data[(ch * h + y * factor + dy) * wdt + x * factor + dx];
                    }
                }
                out.data[(ch * oh + y) * ow + x] = acc * inv;
            }
        }
    }
}

void pool_backward(const Tensor& dout, Eigen::Index factor, Tensor& din) {
    const Eigen::Index c = din.dims[0], h = din.dims[1], wdt = din.dims[2];
    const Eigen::Index oh = h / factor, ow = wdt / factor;
    const double inv = 1.0 / static_cast<double>(factor * factor);
    for (Eigen::Index ch = 0; ch < c; ++ch) {
        for (Eigen::Index y = 0; y < h; ++y) {
            for (Eigen::Index x = 0; x < wdt; ++x) {
                din.data[(ch * h + y) * wdt + x] +=
                    inv * dout.data[(ch * oh + y / factor) * ow + x / factor];
            }
        }
    }
}

}  // namespace ops

ModelOutput model_forward(const ModelParams& params, const Tensor& image,
                          const ArchitectureSpec& spec) {
    spec.validate();
    const Eigen::Index side = spec.input_side();
    if (image.rank() != 3 || image.dims[0] != 3 || image.dims[1] != side ||
        image.dims[2] != side) {
        throw std::invalid_argument("model_forward: image must be {3, " + std::to_string(side) +
                                    ", " + std::to_string(side) + "}");
    }

    ModelOutput out;
    ForwardTape& tape = out.tape;
    tape.params_version = params.version;
    tape.input = image;
    tape.input.data -= 0.5;  // center pixel values
    tape.preact.resize(spec.stages.size());
    tape.postact.resize(spec.stages.size());
    tape.pooled.resize(spec.stages.size());

    const Tensor* cur = &tape.input;
    for (std::size_t i = 0; i < spec.stages.size(); ++i) {
        const ConvStage& s = spec.stages[i];
        const std::string base = "conv" + std::to_string(i + 1);
        const Tensor& kernel = params.find(base + ".kernel");
        const Tensor& bias = params.find(base + ".bias");
        if (kernel.dims[1] != cur->dims[0] || kernel.dims[0] != s.out_channels) {
            throw std::invalid_argument("model_forward: " + base + " kernel shape mismatch");
        }
        Tensor pre({s.out_channels, cur->dims[1], cur->dims[2]});
        ops::conv_forward(*cur, kernel, bias, pre);
        tape.preact[i] = std::move(pre);
        if (s.relu) {
            Tensor post = tape.preact[i];
            post.data = post.data.max(0.0);
            tape.postact[i] = std::move(post);
        } else {
            tape.postact[i] = tape.preact[i];
        }
        Tensor pooled({s.out_channels, cur->dims[1] / s.pool, cur->dims[2] / s.pool});
        ops::pool_forward(tape.postact[i], s.pool, pooled);
        tape.pooled[i] = std::move(pooled);
        cur = &tape.pooled[i];
    }

    // flatten {1, k, k} row-major
    const Eigen::Index k = spec.k;
    tape.features = Eigen::VectorXd(k * k);
    for (Eigen::Index i = 0; i < k * k; ++i) tape.features[i] = cur->data[i];

    const Tensor& fc = params.find("fc.weight");
    const Eigen::Index fc_out_n = spec.fc_outputs();
    if (fc.rank() != 2 || fc.dims[0] != fc_out_n || fc.dims[1] != k * k) {
        throw std::invalid_argument("model_forward: fc.weight shape mismatch");
    }
    tape.fc_out = Eigen::VectorXd::Zero(fc_out_n);
    for (Eigen::Index r = 0; r < fc_out_n; ++r) {
        double acc = 0.0;
        for (Eigen::Index c = 0; c < k * k; ++c) acc += fc.data[r * k * k + c] * tape.features[c];
        tape.fc_out[r] = acc;
    }

    out.weights = WeightGrid(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            out.weights(i, j) = softplus(tape.fc_out[i * k + j]) + kWeightFloor;
        }
    }
    if (spec.hyper_mode) out.choice = logistic(tape.fc_out[k * k]);
    return out;
}

ModelParams model_backward(const ModelParams& params, const ArchitectureSpec& spec,
                           const ForwardTape& tape, const GradGrid& grad_weights,
                           double grad_choice) {
    if (tape.params_version != params.version) {
        throw std::logic_error("model_backward: stale tape (parameters were updated)");
    }
    const Eigen::Index k = spec.k;
    if (grad_weights.rows() != k || grad_weights.cols() != k) {
        throw std::invalid_argument("model_backward: grad_weights shape mismatch");
    }

    ModelParams grads = params.zeros_like();

    // head: weights go through softplus (+ constant floor), choice through logistic
    Eigen::VectorXd dfc_out = Eigen::VectorXd::Zero(spec.fc_outputs());
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            dfc_out[i * k + j] = grad_weights(i, j) * logistic(tape.fc_out[i * k + j]);
        }
    }
    if (spec.hyper_mode) {
        const double sig = logistic(tape.fc_out[k * k]);
        dfc_out[k * k] = grad_choice * sig * (1.0 - sig);
    }

    const Tensor& fc = params.find("fc.weight");
    Tensor& dfc = grads.find("fc.weight");
    Eigen::VectorXd dfeatures = Eigen::VectorXd::Zero(k * k);
    for (Eigen::Index r = 0; r < spec.fc_outputs(); ++r) {
        const double g = dfc_out[r];
        if (g == 0.0) continue;
        for (Eigen::Index c = 0; c < k * k; ++c) {
            dfc.data[r * k * k + c] += g * tape.features[c];
            dfeatures[c] += g * fc.data[r * k * k + c];
        }
    }

    // unflatten into the last pooled tensor's shape
    Tensor dpooled(tape.pooled.back().dims);
    for (Eigen::Index i = 0; i < k * k; ++i) dpooled.data[i] = dfeatures[i];

    for (std::size_t si = spec.stages.size(); si-- > 0;) {
        const ConvStage& s = spec.stages[si];
        const std::string base = "conv" + std::to_string(si + 1);
        const Tensor& kernel = params.find(base + ".kernel");
        const Tensor& input = (si == 0) ? tape.input : tape.pooled[si - 1];

        Tensor dpost(tape.postact[si].dims);
        ops::pool_backward(dpooled, s.pool, dpost);

        Tensor dpre = std::move(dpost);
        if (s.relu) {
            for (Eigen::Index i = 0; i < dpre.numel(); ++i) {
                if (tape.preact[si].data[i] <= 0.0) dpre.data[i] = 0.0;
            }
        }

        Tensor din(input.dims);
        ops::conv_backward(input, kernel, dpre, grads.find(base + ".kernel"),
                           grads.find(base + ".bias"), din);
        dpooled = std::move(din);
    }
    return grads;
}

void optimizer_step(ModelParams& params, const ModelParams& grads, double lr, double alpha_l1) {
    if (params.tensors.size() != grads.tensors.size()) {
        throw std::invalid_argument("optimizer_step: parameter/gradient structure mismatch");
    }
    for (std::size_t i = 0; i < params.tensors.size(); ++i) {
        Tensor& p = params.tensors[i].second;
        const Tensor& g = grads.tensors[i].second;
        if (!p.same_shape(g)) {
            throw std::invalid_argument("optimizer_step: shape mismatch at " +
                                        params.tensors[i].first);
        }
        p.data -= lr * (g.data + alpha_l1 * p.data.sign());
    }
    ++params.version;
}

void optimizer_step(ModelParams& params, ModelParams& velocity, const ModelParams& grads,
                    double lr, double alpha_l1, double momentum) {
    if (params.tensors.size() != grads.tensors.size() ||
        params.tensors.size() != velocity.tensors.size()) {
        throw std::invalid_argument("optimizer_step: parameter/gradient structure mismatch");
    }
    for (std::size_t i = 0; i < params.tensors.size(); ++i) {
        Tensor& p = params.tensors[i].second;
        Tensor& v = velocity.tensors[i].second;
        const Tensor& g = grads.tensors[i].second;
        if (!p.same_shape(g) || !p.same_shape(v)) {
            throw std::invalid_argument("optimizer_step: shape mismatch at " +
                                        params.tensors[i].first);
        }
        v.data = momentum * v.data + (g.data + alpha_l1 * p.data.sign());
        p.data -= lr * v.data;
    }
    ++params.version;
}

void adam_step(ModelParams& params, AdamState& state, const ModelParams& grads, double lr,
               double alpha_l1, double beta1, double beta2, double eps) {
    if (params.tensors.size() != grads.tensors.size()) {
        throw std::invalid_argument("adam_step: parameter/gradient structure mismatch");
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.tensors.size(); ++i) {
        Tensor& p = params.tensors[i].second;
        Tensor& m = state.m.tensors[i].second;
        Tensor& v = state.v.tensors[i].second;
        const Eigen::ArrayXd g = grads.tensors[i].second.data + alpha_l1 * p.data.sign();
        m.data = beta1 * m.data + (1.0 - beta1) * g;
        v.data = beta2 * v.data + (1.0 - beta2) * g.square();
        p.data -= lr * (m.data / bc1) / ((v.data / bc2).sqrt() + eps);
    }
    ++params.version;
}

}  // namespace gridpath
