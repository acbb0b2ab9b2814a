#pragma once

#include <array>
#include <random>
#include <span>
#include <vector>

#include "dgsplat/quat.hpp"
#include "dgsplat/types.hpp"

namespace dgs {

// Single-resolution tri-plane feature container. Three H x W x L grids
// (planes xy, xz, yz) plus the affine box mapping scene coordinates into the
// normalized cube [-1,1]^3. Grid node (i,j) sits at
// uv = (-1 + 2i/(H-1), -1 + 2j/(W-1)); storage index is (i*W + j)*L + c.
struct TriPlane {
    int H = 64, W = 64, L = 32;
    std::array<VecX, 3> planes;  // xy, xz, yz
    Box3 box;

    void init(int h, int w, int l, const Box3& b, std::mt19937& rng);

    double& at(int plane, int i, int j, int c) { return planes[plane][(i * W + j) * L + c]; }
    double at(int plane, int i, int j, int c) const { return planes[plane][(i * W + j) * L + c]; }

    Eigen::Index plane_size() const { return static_cast<Eigen::Index>(H) * W * L; }
    Eigen::Index param_count() const { return 3 * plane_size(); }
};

// Affine map of box onto [-1,1]^3; out-of-box inputs are clamped.
Vec3 normalize_position(const Vec3& x, const Box3& box);

// Chain rule through normalize_position. Clamped components (strictly outside
// the box) pass no gradient; the boundary uses the interior branch.
Vec3 normalize_position_backward(const Vec3& x, const Box3& box, const Vec3& dL_dnorm);

// K rotated copies of x_norm about the origin of the normalized cube,
// clamped back into [-1,1]^3.
std::vector<Vec3> derive_doppelgangers(const Vec3& x_norm, std::span<const Quat> r);

// Bilinear interpolation of channels [c0, c1) at uv in [-1,1]^2.
VecX sample_plane(const VecX& plane, int H, int W, int L, const Vec2& uv, int c0, int c1);

// As above, also producing d(value_c)/d(u,v) per channel.
VecX sample_plane(const VecX& plane, int H, int W, int L, const Vec2& uv, int c0, int c1,
                  MatX& dvalue_duv);

// Eq.-style feature fusion: for each doppelganger k, project onto the three
// factor planes, bilinearly sample its channel block [k*L/K, (k+1)*L/K),
// Hadamard the three short vectors, and concatenate over k.
VecX fuse_feature(const TriPlane& tp, const Vec3& x_norm, std::span<const Quat> r);

// Full backward for fuse_feature. Plane gradients accumulate into
// dL_dplanes (caller-zeroed, same sizes as tp.planes); per-doppelganger
// gradients are tangent-projected 4-vectors at r_k. Returns dL/dx_norm.
Vec3 fuse_feature_backward(const TriPlane& tp, const Vec3& x_norm, std::span<const Quat> r,
                           const VecX& dL_df, std::array<VecX, 3>* dL_dplanes,
                           std::span<Vec4> dL_dr);

struct DilutionReport {
    double occupied_cell_fraction = 0.0;
    double mean_points_per_occupied_cell = 0.0;
    int64_t perpendicular_collision_count = 0;  // points minus occupied cells
};

enum class DilutionMode { kAxisAligned, kDerived };

// Buckets the (optionally per-point-rotated) projections of the points into
// H x W cells on each factor plane and reports how well the storage region is
// used. rotations supplies one quaternion per point in derived mode.
std::array<DilutionReport, 3> dilution_stats(std::span<const Vec3> points, int H, int W,
                                             DilutionMode mode,
                                             std::span<const Quat> rotations = {});

}  // namespace dgs
