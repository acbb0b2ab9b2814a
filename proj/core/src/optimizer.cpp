#include "dgsplat/optimizer.hpp"

#include <cmath>

#include "dgsplat/errors.hpp"

namespace dgs {

void AdamState::step(VecX& params, const VecX& grads) {
    if (params.size() != m.size() || grads.size() != m.size())
        throw ShapeMismatchError("adam_step: parameter/gradient shape mismatch");
    ++t;
    m = beta1 * m + (1.0 - beta1) * grads;
    v = beta2 * v + (1.0 - beta2) * grads.cwiseProduct(grads);
    const double c1 = 1.0 - std::pow(beta1, static_cast<double>(t));
    const double c2 = 1.0 - std::pow(beta2, static_cast<double>(t));
    params.array() -= lr * (m.array() / c1) / ((v.array() / c2).sqrt() + eps);
}

void AdamState::remap_rows(const std::vector<int>& src, int block) {
    VecX m2 = VecX::Zero(static_cast<Eigen::Index>(src.size()) * block);
    VecX v2 = VecX::Zero(m2.size());
    for (size_t i = 0; i < src.size(); ++i) {
        if (src[i] < 0) continue;
        m2.segment(static_cast<Eigen::Index>(i) * block, block) = m.segment(src[i] * block, block);
        v2.segment(static_cast<Eigen::Index>(i) * block, block) = v.segment(src[i] * block, block);
    }
    m = std::move(m2);
    v = std::move(v2);
}

Quat riemannian_adam_step(RiemannianAdamState& state, const Quat& r, const Vec4& euclid_grad,
                          double lr) {
    // B^T both maps to tangent coordinates and discards the radial component.
    const Vec3 u = tangent_coords(r, euclid_grad);
    ++state.t;
    state.m = state.beta1 * state.m + (1.0 - state.beta1) * u;
    state.v = state.beta2 * state.v + (1.0 - state.beta2) * u.cwiseProduct(u);
    const double c1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
    const double c2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
    const Vec3 dir = (state.m / c1).array() / ((state.v / c2).array().sqrt() + state.eps);
    return quat_exp_map(r, -lr * dir);
}

int k_scheduler(int64_t n_current, int64_t n_initial, int channels, int t_const) {
    const int64_t u = (n_current + n_initial - 1) / n_initial;  // ceil
    const double k_raw = std::ldexp(static_cast<double>(channels),
                                    static_cast<int>(u) - t_const);
    int best = 1;
    for (int k : {1, 2, 4, 8, 16}) {
        if (channels % k != 0) continue;
        if (static_cast<double>(k) <= k_raw && k > best) best = k;
    }
    return best;
}

}  // namespace dgs
