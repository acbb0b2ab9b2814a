#pragma once

#include <cmath>

#include "dgsplat/errors.hpp"
#include "dgsplat/types.hpp"

namespace dgs {

// Real spherical harmonics, degrees 0..3, in the ordering and sign convention
// of splatting renderers. 16 basis functions, 48 coefficients per primitive
// (16 x 3 color channels). The basis count is fixed here; see ShConfig in the
// decoder for the per-channel coefficient layout.
inline constexpr int kShBasisCount = 16;
inline constexpr int kShCoeffCount = kShBasisCount * 3;

namespace sh_detail {
inline constexpr double kC0 = 0.28209479177387814;
inline constexpr double kC1 = 0.4886025119029199;
inline constexpr double kC2[5] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005,
                                  -1.0925484305920792, 0.5462742152960396};
inline constexpr double kC3[7] = {-0.5900435899266435, 2.890611442640554, -0.4570457994644658,
                                  0.3731763325901154, -0.4570457994644658, 1.445305721320277,
                                  -0.5900435899266435};
}  // namespace sh_detail

using ShBasis = Eigen::Matrix<double, kShBasisCount, 1>;
using ShBasisGrad = Eigen::Matrix<double, kShBasisCount, 3>;  // d(basis)/d(x,y,z)

inline void sh_check_unit(const Vec3& dir) {
    if (std::abs(dir.norm() - 1.0) > 1e-6)
        throw NonUnitDirectionError("sh_eval: direction must be unit length");
}

inline ShBasis sh_eval(const Vec3& dir) {
    sh_check_unit(dir);
    using namespace sh_detail;
    const double x = dir[0], y = dir[1], z = dir[2];
    const double xx = x * x, yy = y * y, zz = z * z;
    ShBasis b;
    b[0] = kC0;
    b[1] = -kC1 * y;
    b[2] = kC1 * z;
    b[3] = -kC1 * x;
    b[4] = kC2[0] * x * y;
    b[5] = kC2[1] * y * z;
    b[6] = kC2[2] * (2.0 * zz - xx - yy);
    b[7] = kC2[3] * x * z;
    b[8] = kC2[4] * (xx - yy);
    b[9] = kC3[0] * y * (3.0 * xx - yy);
    b[10] = kC3[1] * x * y * z;
    b[11] = kC3[2] * y * (4.0 * zz - xx - yy);
    b[12] = kC3[3] * z * (2.0 * zz - 3.0 * xx - 3.0 * yy);
    b[13] = kC3[4] * x * (4.0 * zz - xx - yy);
    b[14] = kC3[5] * z * (xx - yy);
    b[15] = kC3[6] * x * (xx - 3.0 * yy);
    return b;
}

// Basis plus its jacobian w.r.t. the (unit) direction components.
inline ShBasis sh_eval(const Vec3& dir, ShBasisGrad& grad) {
    const ShBasis b = sh_eval(dir);
    using namespace sh_detail;
    const double x = dir[0], y = dir[1], z = dir[2];
    const double xx = x * x, yy = y * y, zz = z * z;
    grad.setZero();
    grad.row(1) = Vec3(0, -kC1, 0);
    grad.row(2) = Vec3(0, 0, kC1);
    grad.row(3) = Vec3(-kC1, 0, 0);
    grad.row(4) = kC2[0] * Vec3(y, x, 0);
    grad.row(5) = kC2[1] * Vec3(0, z, y);
    grad.row(6) = kC2[2] * Vec3(-2 * x, -2 * y, 4 * z);
    grad.row(7) = kC2[3] * Vec3(z, 0, x);
    grad.row(8) = kC2[4] * Vec3(2 * x, -2 * y, 0);
    grad.row(9) = kC3[0] * Vec3(6 * x * y, 3 * xx - 3 * yy, 0);
    grad.row(10) = kC3[1] * Vec3(y * z, x * z, x * y);
    grad.row(11) = kC3[2] * Vec3(-2 * x * y, 4 * zz - xx - 3 * yy, 8 * y * z);
    grad.row(12) = kC3[3] * Vec3(-6 * x * z, -6 * y * z, 6 * zz - 3 * xx - 3 * yy);
    grad.row(13) = kC3[4] * Vec3(4 * zz - 3 * xx - yy, -2 * x * y, 8 * x * z);
    grad.row(14) = kC3[5] * Vec3(2 * x * z, -2 * y * z, xx - yy);
    grad.row(15) = kC3[6] * Vec3(3 * xx - 3 * yy, -6 * x * y, 0);
    return b;
}

using ShCoeffs = Eigen::Matrix<double, kShCoeffCount, 1>;  // layout Y[b*3 + channel]

// Per channel: clamp(sum_b Y[b,c] basis_b + 0.5, 0, 1).
inline Vec3 colors_from_sh(const ShCoeffs& Y, const Vec3& view_dir) {
    const ShBasis b = sh_eval(view_dir);
    Vec3 rgb;
    for (int c = 0; c < 3; ++c) {
        double v = 0.5;
        for (int k = 0; k < kShBasisCount; ++k) v += Y[k * 3 + c] * b[k];
        rgb[c] = std::clamp(v, 0.0, 1.0);
    }
    return rgb;
}

// Gradients of colors_from_sh. Clamp passes gradient only strictly inside
// (0, 1); saturated channels contribute nothing upstream.
inline Vec3 colors_from_sh_backward(const ShCoeffs& Y, const Vec3& view_dir, const Vec3& dL_drgb,
                                    ShCoeffs& dL_dY) {
    ShBasisGrad db;
    const ShBasis b = sh_eval(view_dir, db);
    Vec3 dL_ddir = Vec3::Zero();
    dL_dY.setZero();
    for (int c = 0; c < 3; ++c) {
        double v = 0.5;
        for (int k = 0; k < kShBasisCount; ++k) v += Y[k * 3 + c] * b[k];
        if (v <= 0.0 || v >= 1.0) continue;
        for (int k = 0; k < kShBasisCount; ++k) {
            dL_dY[k * 3 + c] = dL_drgb[c] * b[k];
            dL_ddir += dL_drgb[c] * Y[k * 3 + c] * db.row(k).transpose();
        }
    }
    return dL_ddir;
}

}  // namespace dgs
