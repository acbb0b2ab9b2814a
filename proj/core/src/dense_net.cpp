#include "dgsplat/dense_net.hpp"

#include <cmath>

#include "dgsplat/errors.hpp"

namespace dgs {

namespace {

MatX apply_activation(Activation act, MatX z) {
    switch (act) {
        case Activation::kLinear:
            return z;
        case Activation::kRelu:
            return z.cwiseMax(0.0);
        case Activation::kSigmoid:
            return z.unaryExpr([](double v) {
                if (v >= 0.0) return 1.0 / (1.0 + std::exp(-v));
                const double e = std::exp(v);
                return e / (1.0 + e);
            });
    }
    return z;
}

// act'(z) expressed through the stored activation a = act(z).
MatX activation_prime_from_output(Activation act, const MatX& a) {
    switch (act) {
        case Activation::kLinear:
            return MatX::Ones(a.rows(), a.cols());
        case Activation::kRelu:
            return (a.array() > 0.0).cast<double>();
        case Activation::kSigmoid:
            return (a.array() * (1.0 - a.array())).matrix();
    }
    return MatX::Ones(a.rows(), a.cols());
}

}  // namespace

int DenseNet::param_count() const {
    int n = 0;
    for (const auto& l : layers) n += (l.in_width() + 1) * l.out_width();
    for (const auto& h : heads) n += (h.lin.in_width() + 1) * h.lin.out_width();
    return n;
}

VecX DenseNet::params_flat() const {
    VecX p(param_count());
    int off = 0;
    auto put = [&](const DenseLayer& l) {
        const int nw = static_cast<int>(l.W.size());
        p.segment(off, nw) = Eigen::Map<const VecX>(l.W.data(), nw);
        off += nw;
        p.segment(off, l.b.size()) = l.b;
        off += static_cast<int>(l.b.size());
    };
    for (const auto& l : layers) put(l);
    for (const auto& h : heads) put(h.lin);
    return p;
}

void DenseNet::set_params_flat(const VecX& p) {
    if (p.size() != param_count())
        throw ShapeMismatchError("set_params_flat: parameter vector size mismatch");
    int off = 0;
    auto take = [&](DenseLayer& l) {
        const int nw = static_cast<int>(l.W.size());
        Eigen::Map<VecX>(l.W.data(), nw) = p.segment(off, nw);
        off += nw;
        l.b = p.segment(off, l.b.size());
        off += static_cast<int>(l.b.size());
    };
    for (auto& l : layers) take(l);
    for (auto& h : heads) take(h.lin);
}

void DenseNet::init_weights(std::mt19937& rng) {
    auto fill = [&](DenseLayer& l) {
        const double bound = 1.0 / std::sqrt(static_cast<double>(l.in_width()));
        std::uniform_real_distribution<double> u(-bound, bound);
        for (Eigen::Index i = 0; i < l.W.size(); ++i) l.W.data()[i] = u(rng);
        l.b.setZero();
    };
    for (auto& l : layers) fill(l);
    for (auto& h : heads) fill(h.lin);
}

int DenseNet::head_index(const std::string& name) const {
    for (size_t i = 0; i < heads.size(); ++i)
        if (heads[i].name == name) return static_cast<int>(i);
    throw ShapeMismatchError("head_index: no head named " + name);
}

std::vector<MatX> net_forward(const DenseNet& net, const MatX& X, ForwardCache& cache) {
    if (X.rows() != net.input_dim)
        throw WidthMismatchError("net_forward: input width " + std::to_string(X.rows()) +
                                 " != " + std::to_string(net.input_dim));
    const int L = static_cast<int>(net.layers.size());
    cache.inputs.assign(L + 1, MatX());
    cache.head_outs.assign(net.heads.size(), MatX());
    cache.net_tag = &net;
    cache.batch = static_cast<int>(X.cols());

    MatX a = X;
    for (int l = 0; l < L; ++l) {
        if (l == net.skip_layer && l > 0) {
            MatX cat(a.rows() + X.rows(), X.cols());
            cat.topRows(a.rows()) = a;
            cat.bottomRows(X.rows()) = X;
            a = std::move(cat);
        }
        if (net.layers[l].in_width() != a.rows())
            throw WidthMismatchError("net_forward: layer " + std::to_string(l) + " width mismatch");
        cache.inputs[l] = a;
        MatX z = (net.layers[l].W * a).colwise() + net.layers[l].b;
        a = apply_activation(net.layers[l].act, std::move(z));
    }
    cache.inputs[L] = a;

    std::vector<MatX> outs(net.heads.size());
    for (size_t h = 0; h < net.heads.size(); ++h) {
        const auto& lin = net.heads[h].lin;
        MatX z = (lin.W * a).colwise() + lin.b;
        outs[h] = apply_activation(lin.act, std::move(z));
        cache.head_outs[h] = outs[h];
    }
    return outs;
}

std::vector<VecX> net_forward(const DenseNet& net, const VecX& x) {
    ForwardCache cache;
    auto outs = net_forward(net, MatX(x), cache);
    std::vector<VecX> v(outs.size());
    for (size_t i = 0; i < outs.size(); ++i) v[i] = outs[i].col(0);
    return v;
}

VecX net_backward(const DenseNet& net, const ForwardCache& cache,
                  const std::vector<MatX>& dL_dheads, MatX& dL_dX) {
    const int L = static_cast<int>(net.layers.size());
    if (cache.net_tag != &net || cache.inputs.size() != static_cast<size_t>(L + 1) ||
        cache.head_outs.size() != net.heads.size())
        throw CacheMismatchError("net_backward: cache does not match this network");
    if (dL_dheads.size() != net.heads.size())
        throw CacheMismatchError("net_backward: upstream gradient head count mismatch");

    VecX grad = VecX::Zero(net.param_count());
    dL_dX = MatX::Zero(net.input_dim, cache.batch);

    // Flat offsets mirror params_flat ordering.
    std::vector<int> layer_off(L), head_off(net.heads.size());
    {
        int off = 0;
        for (int l = 0; l < L; ++l) {
            layer_off[l] = off;
            off += (net.layers[l].in_width() + 1) * net.layers[l].out_width();
        }
        for (size_t h = 0; h < net.heads.size(); ++h) {
            head_off[h] = off;
            off += (net.heads[h].lin.in_width() + 1) * net.heads[h].lin.out_width();
        }
    }

    const MatX& last_hidden = cache.inputs[L];
    MatX dA = MatX::Zero(last_hidden.rows(), cache.batch);
    for (size_t h = 0; h < net.heads.size(); ++h) {
        const auto& lin = net.heads[h].lin;
        if (dL_dheads[h].rows() != lin.out_width() || dL_dheads[h].cols() != cache.batch)
            throw CacheMismatchError("net_backward: head gradient shape mismatch");
        MatX dZ = dL_dheads[h].cwiseProduct(activation_prime_from_output(lin.act, cache.head_outs[h]));
        const int nw = static_cast<int>(lin.W.size());
        MatX dW(lin.out_width(), lin.in_width());
        dW.noalias() = dZ * last_hidden.transpose();
        grad.segment(head_off[h], nw) = Eigen::Map<const VecX>(dW.data(), nw);
        grad.segment(head_off[h] + nw, lin.out_width()) = dZ.rowwise().sum();
        dA.noalias() += lin.W.transpose() * dZ;
    }

    for (int l = L - 1; l >= 0; --l) {
        const auto& lay = net.layers[l];
        // act(z_l) is the top block of the next layer's input.
        const MatX& next_in = cache.inputs[l + 1];
        MatX aprime = activation_prime_from_output(lay.act, next_in.topRows(lay.out_width()));
        MatX dZ = dA.cwiseProduct(aprime);
        const int nw = static_cast<int>(lay.W.size());
        MatX dW(lay.out_width(), lay.in_width());
        dW.noalias() = dZ * cache.inputs[l].transpose();
        grad.segment(layer_off[l], nw) = Eigen::Map<const VecX>(dW.data(), nw);
        grad.segment(layer_off[l] + nw, lay.out_width()) = dZ.rowwise().sum();
        MatX dIn(lay.in_width(), cache.batch);
        dIn.noalias() = lay.W.transpose() * dZ;
        if (l == net.skip_layer && l > 0) {
            dA = dIn.topRows(lay.in_width() - net.input_dim);
            dL_dX += dIn.bottomRows(net.input_dim);
        } else if (l == 0) {
            dL_dX += dIn;
        } else {
            dA = std::move(dIn);
        }
    }
    return grad;
}

namespace {

DenseLayer make_layer(int in, int out, Activation act) {
    DenseLayer l;
    l.W = MatX::Zero(out, in);
    l.b = VecX::Zero(out);
    l.act = act;
    return l;
}

}  // namespace

DenseNet build_deformation_net(int expr_dim, std::mt19937& rng) {
    constexpr int kWidth = 256;
    constexpr int kDepth = 8;
    constexpr int kPosDim = 63;
    DenseNet net;
    net.input_dim = kPosDim + expr_dim;
    net.skip_layer = 3;
    net.layers.push_back(make_layer(net.input_dim, kWidth, Activation::kRelu));
    for (int l = 1; l < kDepth; ++l) {
        const int in = (l == net.skip_layer) ? kWidth + net.input_dim : kWidth;
        net.layers.push_back(make_layer(in, kWidth, Activation::kRelu));
    }
    // Offset heads are linear: the predicted deltas are signed.
    net.heads.push_back({"dx", make_layer(kWidth, 3, Activation::kLinear)});
    net.heads.push_back({"dq", make_layer(kWidth, 4, Activation::kLinear)});
    net.heads.push_back({"ds", make_layer(kWidth, 3, Activation::kLinear)});
    net.init_weights(rng);
    return net;
}

DenseNet build_opacity_net(int feature_dim, int latent_dim, std::mt19937& rng) {
    constexpr int kWidth = 64;
    DenseNet net;
    net.input_dim = feature_dim;
    net.layers.push_back(make_layer(feature_dim, kWidth, Activation::kRelu));
    net.layers.push_back(make_layer(kWidth, kWidth, Activation::kRelu));
    net.layers.push_back(make_layer(kWidth, kWidth, Activation::kRelu));
    net.heads.push_back({"alpha", make_layer(kWidth, 1, Activation::kSigmoid)});
    net.heads.push_back({"z", make_layer(kWidth, latent_dim, Activation::kLinear)});
    net.init_weights(rng);
    return net;
}

DenseNet build_color_net(int latent_dim, int sh_coeff_count, std::mt19937& rng) {
    constexpr int kWidth = 64;
    DenseNet net;
    net.input_dim = latent_dim + 3;
    net.layers.push_back(make_layer(net.input_dim, kWidth, Activation::kRelu));
    net.layers.push_back(make_layer(kWidth, kWidth, Activation::kRelu));
    net.heads.push_back({"sh", make_layer(kWidth, sh_coeff_count, Activation::kLinear)});
    net.init_weights(rng);
    return net;
}

}  // namespace dgs
