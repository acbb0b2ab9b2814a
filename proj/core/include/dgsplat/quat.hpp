#pragma once

#include <array>
#include <cmath>
#include <random>

#include "dgsplat/errors.hpp"
#include "dgsplat/types.hpp"

namespace dgs {

// Unit quaternion, scalar-first (w, x, y, z), Hamilton product convention.
// One convention project-wide; all rotation state (Gaussian orientation q and
// derivation quaternions r) is stored this way.
struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    Quat() = default;
    Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

    static Quat identity() { return {1.0, 0.0, 0.0, 0.0}; }

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Vec4 vec() const { return Vec4(w, x, y, z); }
    static Quat from_vec(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

    double dot(const Quat& o) const { return w * o.w + x * o.x + y * o.y + z * o.z; }
};

inline Quat quat_normalize(const Vec4& q) {
    const double n = q.norm();
    if (n <= 1e-12) throw ZeroNormError("quat_normalize: zero-norm quaternion");
    return Quat::from_vec(q / n);
}

inline Quat quat_normalize(const Quat& q) { return quat_normalize(q.vec()); }

// Gradient of u / ||u|| : maps dL/d(unit) back to dL/du.
inline Vec4 quat_normalize_backward(const Vec4& u, const Vec4& dL_dunit) {
    const double n = u.norm();
    const Vec4 uhat = u / n;
    return (dL_dunit - uhat.dot(dL_dunit) * uhat) / n;
}

inline Mat3 quat_to_rotmat(const Quat& q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    Mat3 R;
    R << 1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y),
         2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x),
         2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y);
    return R;
}

// dR/d(w,x,y,z) of the unit-quaternion rotation formula. Downstream code
// projects onto the tangent space (or differentiates through normalization),
// so the off-manifold extension is immaterial.
inline std::array<Mat3, 4> quat_to_rotmat_jacobian(const Quat& q) {
    const double w = q.w, x = q.x, y = q.y, z = q.z;
    std::array<Mat3, 4> J;
    J[0] << 0, -z, y,
            z, 0, -x,
            -y, x, 0;
    J[1] << 0, y, z,
            y, -2 * x, -w,
            z, w, -2 * x;
    J[2] << -2 * y, x, w,
            x, 0, z,
            -w, z, -2 * y;
    J[3] << -2 * z, -w, x,
            w, -2 * z, y,
            x, y, 0;
    for (auto& m : J) m *= 2.0;
    return J;
}

// Hamilton product (no normalization).
inline Quat quat_mul_raw(const Quat& a, const Quat& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quat quat_mul(const Quat& a, const Quat& b) {
    return quat_normalize(quat_mul_raw(a, b));
}

// exp of the pure quaternion (0, v): (cos theta, sin(theta) v / theta).
inline Quat quat_exp_pure(const Vec3& v) {
    const double theta = v.norm();
    if (theta < 1e-12) {
        // series limit: sinc(theta) ~ 1 - theta^2/6
        const double sinc = 1.0 - theta * theta / 6.0;
        return {std::cos(theta), sinc * v[0], sinc * v[1], sinc * v[2]};
    }
    const double s = std::sin(theta) / theta;
    return {std::cos(theta), s * v[0], s * v[1], s * v[2]};
}

// Retraction base * exp((0, v)); v in the body-frame tangent coordinates.
// v = 0 returns base bit-exactly.
inline Quat quat_exp_map(const Quat& base, const Vec3& v) {
    if (v[0] == 0.0 && v[1] == 0.0 && v[2] == 0.0) return base;
    return quat_mul(base, quat_exp_pure(v));
}

// p' = R(r) p via t = 2 v x p; p' = p + w t + v x t.
// Identity rotation returns p bit-exactly.
inline Vec3 rotate_point(const Quat& r, const Vec3& p) {
    const Vec3 v(r.x, r.y, r.z);
    const Vec3 t = 2.0 * v.cross(p);
    return p + r.w * t + v.cross(t);
}

// d(R(r) p)/d(w,x,y,z), columns ordered (w,x,y,z); unit-assuming extension.
inline Eigen::Matrix<double, 3, 4> rotate_point_quat_jacobian(const Quat& r, const Vec3& p) {
    const Vec3 v(r.x, r.y, r.z);
    const Vec3 vxp = v.cross(p);
    Eigen::Matrix<double, 3, 4> J;
    J.col(0) = 2.0 * vxp;
    for (int j = 0; j < 3; ++j) {
        Vec3 e = Vec3::Zero();
        e[j] = 1.0;
        J.col(1 + j) = 2.0 * (r.w * e.cross(p) + e.cross(vxp) + v.cross(e.cross(p)));
    }
    return J;
}

// Sigma = R diag(s^2) R^T. Symmetric PSD with eigenvalues {s1^2, s2^2, s3^2}.
inline Mat3 build_covariance(const Quat& q, const Vec3& s) {
    if (s[0] <= 0.0 || s[1] <= 0.0 || s[2] <= 0.0)
        throw NonPositiveScaleError("build_covariance: scales must be positive");
    const Mat3 R = quat_to_rotmat(q);
    return R * s.array().square().matrix().asDiagonal() * R.transpose();
}

struct CovarianceGrads {
    std::array<Mat3, 4> dq;  // dSigma/d(w,x,y,z)
    std::array<Mat3, 3> ds;  // dSigma/d(s1,s2,s3)
};

inline Mat3 build_covariance(const Quat& q, const Vec3& s, CovarianceGrads& grads) {
    if (s[0] <= 0.0 || s[1] <= 0.0 || s[2] <= 0.0)
        throw NonPositiveScaleError("build_covariance: scales must be positive");
    const Mat3 R = quat_to_rotmat(q);
    const Mat3 D = s.array().square().matrix().asDiagonal();
    const auto dR = quat_to_rotmat_jacobian(q);
    for (int j = 0; j < 4; ++j) {
        const Mat3 A = dR[j] * D * R.transpose();
        grads.dq[j] = A + A.transpose();
    }
    for (int k = 0; k < 3; ++k)
        grads.ds[k] = 2.0 * s[k] * R.col(k) * R.col(k).transpose();
    return R * D * R.transpose();
}

// Pulls dL/dSigma (symmetric) back to (dL/dq, dL/ds).
inline void covariance_backward(const Quat& q, const Vec3& s, const Mat3& dL_dSigma,
                                Vec4& dL_dq, Vec3& dL_ds) {
    CovarianceGrads g;
    (void)build_covariance(q, s, g);
    for (int j = 0; j < 4; ++j) dL_dq[j] = (dL_dSigma.array() * g.dq[j].array()).sum();
    for (int k = 0; k < 3; ++k) dL_ds[k] = (dL_dSigma.array() * g.ds[k].array()).sum();
}

// Removes the radial component: g - <g, r> r.
inline Vec4 tangent_project(const Vec4& g, const Quat& r) {
    const Vec4 rv = r.vec();
    return g - g.dot(rv) * rv;
}

// Orthonormal basis of T_r S^3 under left translation: columns r * e_i.
// Coordinates in this basis are what quat_exp_map consumes.
inline Eigen::Matrix<double, 4, 3> tangent_basis(const Quat& r) {
    Eigen::Matrix<double, 4, 3> B;
    B.col(0) = Vec4(-r.x, r.w, r.z, -r.y);
    B.col(1) = Vec4(-r.y, -r.z, r.w, r.x);
    B.col(2) = Vec4(-r.z, r.y, -r.x, r.w);
    return B;
}

inline Vec3 tangent_coords(const Quat& r, const Vec4& g) {
    return tangent_basis(r).transpose() * g;
}

// Uniform sample on S^3 (normalized-Gaussian method).
template <typename Rng>
Quat sample_uniform_quat(Rng& rng) {
    std::normal_distribution<double> n01(0.0, 1.0);
    Vec4 v;
    do {
        v = Vec4(n01(rng), n01(rng), n01(rng), n01(rng));
    } while (v.norm() <= 1e-12);
    return quat_normalize(v);
}

}  // namespace dgs
