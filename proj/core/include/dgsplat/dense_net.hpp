#pragma once

#include <random>
#include <string>
#include <vector>

#include "dgsplat/types.hpp"

namespace dgs {

enum class Activation { kLinear, kRelu, kSigmoid };

struct DenseLayer {
    MatX W;  // out x in
    VecX b;  // out
    Activation act = Activation::kLinear;

    int in_width() const { return static_cast<int>(W.cols()); }
    int out_width() const { return static_cast<int>(W.rows()); }
};

struct DenseHead {
    std::string name;
    DenseLayer lin;
};

// Activations retained from a forward pass; enough to reconstruct exact
// gradients without re-running the network.
struct ForwardCache {
    std::vector<MatX> inputs;     // input to each layer; inputs[L] feeds the heads
    std::vector<MatX> head_outs;  // post-activation head outputs
    const void* net_tag = nullptr;
    int batch = 0;
};

// Explicit-gradient dense feedforward network with optional input
// re-concatenation (skip) and multiple output heads off the last hidden layer.
struct DenseNet {
    int input_dim = 0;
    int skip_layer = -1;  // index of the layer whose input is [h; x]; -1 = none
    std::vector<DenseLayer> layers;
    std::vector<DenseHead> heads;

    int param_count() const;
    VecX params_flat() const;
    void set_params_flat(const VecX& p);

    // U[-1/sqrt(fan_in), +1/sqrt(fan_in)] weights, zero biases.
    void init_weights(std::mt19937& rng);

    int head_index(const std::string& name) const;
};

// X is input_dim x batch; returns one (width x batch) matrix per head.
std::vector<MatX> net_forward(const DenseNet& net, const MatX& X, ForwardCache& cache);

// Single-sample convenience wrapper.
std::vector<VecX> net_forward(const DenseNet& net, const VecX& x);

// dL_dheads must match the head layout of the cached forward pass. Returns
// the flat parameter gradient (same ordering as params_flat) and writes the
// input gradient to dL_dX.
VecX net_backward(const DenseNet& net, const ForwardCache& cache,
                  const std::vector<MatX>& dL_dheads, MatX& dL_dX);

// Motion deformation field M_d: gamma(x) ++ e -> (dx, dq, ds).
// 8 hidden layers of width 256 (ReLU), input re-concatenated into layer 3,
// three linear heads of widths 3/4/3.
DenseNet build_deformation_net(int expr_dim, std::mt19937& rng);

// Opacity decoder D_alpha: f -> (alpha, z). 3 hidden layers of width 64,
// sigmoid head for alpha, linear head for the latent z.
DenseNet build_opacity_net(int feature_dim, int latent_dim, std::mt19937& rng);

// Color decoder D_c: [z; d] -> SH coefficients. 2 hidden layers of width 64,
// one linear head.
DenseNet build_color_net(int latent_dim, int sh_coeff_count, std::mt19937& rng);

}  // namespace dgs
