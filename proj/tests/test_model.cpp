#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "gridpath/errors.hpp"
#include "gridpath/hyper.hpp"
#include "gridpath/model.hpp"
#include "gridpath/model_ops.hpp"
#include "gridpath/rng.hpp"

#include <cmath>
#include <functional>

using namespace gridpath;

namespace {

void fill_uniform(Tensor& t, Rng& rng, double lo = -1.0, double hi = 1.0) {
    for (Eigen::Index i = 0; i < t.numel(); ++i) t.data[i] = rng.uniform(lo, hi);
}

// Max relative error between an analytic gradient and central differences of
// a scalar function over one tensor. The 1e-5 denominator floor keeps the
// metric above central-difference roundoff (~1e-10 absolute at loss scale 1)
// for near-zero gradient entries.
double fd_check(Tensor& x, const Eigen::ArrayXd& analytic,
                const std::function<double()>& value, double h = 1e-6) {
    double worst = 0.0;
    for (Eigen::Index i = 0; i < x.numel(); ++i) {
        const double keep = x.data[i];
        x.data[i] = keep + h;
        const double up = value();
        x.data[i] = keep - h;
        const double dn = value();
        x.data[i] = keep;
        const double fd = (up - dn) / (2.0 * h);
        const double err =
            std::abs(analytic[i] - fd) / std::max({1e-5, std::abs(analytic[i]), std::abs(fd)});
        worst = std::max(worst, err);
    }
    return worst;
}

}  // namespace

TEST_CASE("fc_head_init: identity and near-identity shapes") {
    Rng rng(1);
    const Tensor plain = fc_head_init(12, false, 0.01, rng);
    REQUIRE(plain.dims == std::vector<Eigen::Index>{144, 144});
    for (Eigen::Index r = 0; r < 144; ++r) {
        for (Eigen::Index c = 0; c < 144; ++c) {
            CHECK(plain.data[r * 144 + c] == (r == c ? 1.0 : 0.0));
        }
    }

    const Tensor small = fc_head_init(2, false, 0.01, rng);
    REQUIRE(small.dims == std::vector<Eigen::Index>{4, 4});
    CHECK(small.data.sum() == 4.0);

    const Tensor hyper = fc_head_init(12, true, 0.01, rng);
    REQUIRE(hyper.dims == std::vector<Eigen::Index>{145, 144});
    for (Eigen::Index r = 0; r < 144; ++r) {
        for (Eigen::Index c = 0; c < 144; ++c) {
            CHECK(hyper.data[r * 144 + c] == (r == c ? 1.0 : 0.0));
        }
    }
    bool nonzero = false;
    for (Eigen::Index c = 0; c < 144; ++c) {
        const double v = hyper.data[144 * 144 + c];
        CHECK(std::abs(v) <= 0.01);
        nonzero = nonzero || v != 0.0;
    }
    CHECK(nonzero);
}

TEST_CASE("model_forward: zero conv parameters give a uniform positive grid") {
    const ArchitectureSpec spec = ArchitectureSpec::desk_scale(4, 4, false);
    ModelParams params = init_params(spec, 3);
    for (auto& [name, t] : params.tensors) {
        if (name != "fc.weight") t.data.setZero();
    }
    Tensor image({3, 16, 16});
    Rng rng(7);
    fill_uniform(image, rng, 0.0, 1.0);
    const ModelOutput out = model_forward(params, image, spec);
    const double expect = softplus(0.0) + kWeightFloor;
    CHECK((out.weights == expect).all());
    CHECK(!out.choice.has_value());
}

TEST_CASE("model_forward: hyper head with zero extra row routes to A*") {
    const ArchitectureSpec spec = ArchitectureSpec::desk_scale(3, 2, true);
    ModelParams params = init_params(spec, 3);
    Tensor& fc = params.find("fc.weight");
    for (Eigen::Index c = 0; c < 9; ++c) fc.data[9 * 9 + c] = 0.0;
    Tensor image({3, 6, 6});
    Rng rng(7);
    fill_uniform(image, rng, 0.0, 1.0);
    const ModelOutput out = model_forward(params, image, spec);
    REQUIRE(out.choice.has_value());
    CHECK(*out.choice == 0.5);  // logistic(0) exactly
    CHECK(route(*out.choice, out.weights, HyperConfig{}) == SolverId::AStarMinChebyshev);
}

TEST_CASE("model_forward: outputs finite, positive, deterministic per seed") {
    const ArchitectureSpec spec = ArchitectureSpec::desk_scale(4, 4, true);
    const ModelParams a = init_params(spec, 42);
    const ModelParams b = init_params(spec, 42);
    Tensor image({3, 16, 16});
    Rng rng(11);
    fill_uniform(image, rng, 0.0, 1.0);
    const ModelOutput oa = model_forward(a, image, spec);
    const ModelOutput ob = model_forward(b, image, spec);
    CHECK((oa.weights == ob.weights).all());
    CHECK(*oa.choice == *ob.choice);
    CHECK(oa.weights.isFinite().all());
    CHECK((oa.weights > kWeightFloor * 0.999).all());

    Tensor bad({3, 8, 8});
    CHECK_THROWS_AS(model_forward(a, bad, spec), std::invalid_argument);
}

TEST_CASE("identity-head neutrality: pass-through conv composes as documented") {
    // single 1x1 stage selecting the red channel, identity head
    ArchitectureSpec spec;
    spec.k = 5;
    spec.tile_px = 1;
    spec.hyper_mode = false;
    spec.stages = {ConvStage{1, 1, 1, 1, false}};
    spec.validate();

    ModelParams params;
    Tensor kernel({1, 3, 1, 1});
    kernel.data[0] = 1.0;  // red
    params.tensors.emplace_back("conv1.kernel", kernel);
    params.tensors.emplace_back("conv1.bias", Tensor({1}));
    Rng rng(1);
    params.tensors.emplace_back("fc.weight", fc_head_init(5, false, 0.01, rng));

    Tensor image({3, 5, 5});
    Rng irng(15);
    fill_uniform(image, irng, -2.0, 2.0);
    const ModelOutput out = model_forward(params, image, spec);
    // input pixels are centered by 0.5 before the conv stack
    for (Eigen::Index i = 0; i < 5; ++i) {
        for (Eigen::Index j = 0; j < 5; ++j) {
            CHECK(out.weights(i, j) == softplus(image.at3(0, i, j) - 0.5) + kWeightFloor);
        }
    }
}

TEST_CASE("gradcheck: conv kernel, bias and input (50 draws)") {
    Rng rng(2024);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        Tensor in({2, 5, 5}), kernel({3, 2, 3, 3}), bias({3}), gsel({3, 5, 5});
        fill_uniform(in, rng);
        fill_uniform(kernel, rng);
        fill_uniform(bias, rng);
        fill_uniform(gsel, rng);

        Tensor out({3, 5, 5});
        const auto value = [&]() {
            ops::conv_forward(in, kernel, bias, out);
            return (out.data * gsel.data).sum();
        };
        value();
        Tensor dk({3, 2, 3, 3}), db({3}), din({2, 5, 5});
        ops::conv_backward(in, kernel, gsel, dk, db, din);
        worst = std::max(worst, fd_check(kernel, dk.data, value));
        worst = std::max(worst, fd_check(bias, db.data, value));
        worst = std::max(worst, fd_check(in, din.data, value));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("gradcheck: average pooling (50 draws)") {
    Rng rng(77);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        Tensor in({2, 6, 6}), gsel({2, 3, 3});
        fill_uniform(in, rng);
        fill_uniform(gsel, rng);
        Tensor out({2, 3, 3});
        const auto value = [&]() {
            ops::pool_forward(in, 2, out);
            return (out.data * gsel.data).sum();
        };
        value();
        Tensor din({2, 6, 6});
        ops::pool_backward(gsel, 2, din);
        worst = std::max(worst, fd_check(in, din.data, value));
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("gradcheck: linear head, softplus, logistic, relu via the full model") {
    // scalar loss <G, weights> + g_c * choice exercises fc, softplus and
    // logistic; the conv stages in between exercise relu
    Rng rng(31415);
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
        const ArchitectureSpec spec = ArchitectureSpec::desk_scale(3, 2, true);
        ModelParams params = init_params(spec, 1000 + static_cast<std::uint64_t>(draw));
        // move the head off the identity so its gradient is generic
        Tensor& fc = params.find("fc.weight");
        for (Eigen::Index i = 0; i < fc.numel(); ++i) fc.data[i] += 0.3 * rng.uniform(-1.0, 1.0);

        Tensor image({3, 6, 6});
        fill_uniform(image, rng, 0.0, 1.0);
        GradGrid gsel(3, 3);
        for (Eigen::Index i = 0; i < 9; ++i) gsel.data()[i] = rng.uniform(-1.0, 1.0);
        const double g_choice = rng.uniform(-1.0, 1.0);

        const auto value = [&]() {
            const ModelOutput out = model_forward(params, image, spec);
            return (gsel * out.weights).sum() + g_choice * out.choice.value();
        };
        const ModelOutput out = model_forward(params, image, spec);
        const ModelParams grads = model_backward(params, spec, out.tape, gsel, g_choice);

        for (std::size_t t = 0; t < params.tensors.size(); ++t) {
            worst = std::max(
                worst, fd_check(params.tensors[t].second, grads.tensors[t].second.data, value));
        }
    }
    CHECK(worst < 1e-4);
}

TEST_CASE("model_backward: zero upstream gives zero parameter grads") {
    const ArchitectureSpec spec = ArchitectureSpec::desk_scale(4, 4, false);
    const ModelParams params = init_params(spec, 5);
    Tensor image({3, 16, 16});
    Rng rng(9);
    fill_uniform(image, rng, 0.0, 1.0);
    const ModelOutput out = model_forward(params, image, spec);
    const ModelParams grads = model_backward(params, spec, out.tape, GradGrid::Zero(4, 4));
    for (const auto& [name, t] : grads.tensors) CHECK((t.data == 0.0).all());
}

TEST_CASE("model_backward: stale tape is rejected") {
    const ArchitectureSpec spec = ArchitectureSpec::desk_scale(3, 2, false);
    ModelParams params = init_params(spec, 5);
    Tensor image({3, 6, 6});
    Rng rng(9);
    fill_uniform(image, rng, 0.0, 1.0);
    const ModelOutput out = model_forward(params, image, spec);
    optimizer_step(params, params.zeros_like(), 0.1, 0.0);
    CHECK_THROWS_AS(model_backward(params, spec, out.tape, GradGrid::Zero(3, 3)),
                    std::logic_error);
}

TEST_CASE("optimizer_step: hand-checked update and l1 shrinkage") {
    // w' = 2 - 0.1 * (1 + 0.5) = 1.85
    ModelParams params;
    Tensor w({1});
    w.data[0] = 2.0;
    params.tensors.emplace_back("w", w);
    ModelParams grads = params.zeros_like();
    grads.find("w").data[0] = 1.0;
    optimizer_step(params, grads, 0.1, 0.5);
    CHECK(params.find("w").data[0] == doctest::Approx(1.85).epsilon(1e-15));
    CHECK(params.version == 1);

    // zero grads, alpha > 0: magnitudes shrink by lr * alpha; sign(0) = 0
    ModelParams p2;
    Tensor v({3});
    v.data[0] = 1.0;
    v.data[1] = -2.0;
    v.data[2] = 0.0;
    p2.tensors.emplace_back("v", v);
    optimizer_step(p2, p2.zeros_like(), 0.1, 0.5);
    CHECK(p2.find("v").data[0] == doctest::Approx(0.95).epsilon(1e-15));
    CHECK(p2.find("v").data[1] == doctest::Approx(-1.95).epsilon(1e-15));
    CHECK(p2.find("v").data[2] == 0.0);

    // alpha = 0 is a plain SGD step
    ModelParams p3;
    Tensor u({1});
    u.data[0] = 1.0;
    p3.tensors.emplace_back("u", u);
    ModelParams g3 = p3.zeros_like();
    g3.find("u").data[0] = 2.0;
    optimizer_step(p3, g3, 0.25, 0.0);
    CHECK(p3.find("u").data[0] == 0.5);
}

TEST_CASE("desk_scale validation") {
    CHECK_THROWS_AS(ArchitectureSpec::desk_scale(4, 3, false), ConfigError);
    ArchitectureSpec bad = ArchitectureSpec::desk_scale(4, 4, false);
    bad.stages.back().out_channels = 2;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = ArchitectureSpec::desk_scale(4, 4, false);
    bad.stages[0].stride = 2;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}
