#pragma once

#include <cstdint>
#include <vector>

#include "dgsplat/quat.hpp"
#include "dgsplat/types.hpp"

namespace dgs {

// First-order ADAM over a flat parameter vector.
struct AdamState {
    int64_t t = 0;
    VecX m, v;
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-15;

    void init(Eigen::Index n) {
        t = 0;
        m = VecX::Zero(n);
        v = VecX::Zero(n);
    }

    void step(VecX& params, const VecX& grads);

    // Rebuilds the moment buffers after densify/prune. src[i] is the old row
    // feeding new row i, or -1 for a fresh row (zero moments). block is the
    // number of components per row.
    void remap_rows(const std::vector<int>& src, int block);
};

// Transport-free Riemannian ADAM state for one unit quaternion; moments live
// in the tangent coordinates of the current point.
struct RiemannianAdamState {
    int64_t t = 0;
    Vec3 m = Vec3::Zero();
    Vec3 v = Vec3::Zero();
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-15;
};

// Projects euclid_grad onto the tangent space at r, updates the moments, and
// retracts along the negated bias-corrected direction scaled by lr.
Quat riemannian_adam_step(RiemannianAdamState& state, const Quat& r, const Vec4& euclid_grad,
                          double lr);

inline double lr_linear_decay(double initial, int64_t step, int64_t total_steps) {
    return initial * (1.0 - static_cast<double>(step) / static_cast<double>(total_steps));
}

inline double lr_exp_decay(double initial, double final, int64_t step, int64_t total_steps) {
    const double frac = static_cast<double>(step) / static_cast<double>(total_steps);
    return initial * std::pow(final / initial, frac);
}

// Doppelganger-count schedule: K = L / 2^(t_const - u) with u = ceil(n_i/n_o),
// clamped into {1,2,4,8,16} restricted to divisors of L.
int k_scheduler(int64_t n_current, int64_t n_initial, int channels, int t_const = 6);

}  // namespace dgs
