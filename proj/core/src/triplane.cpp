#include "dgsplat/triplane.hpp"

#include <cmath>
#include <unordered_map>

#include "dgsplat/errors.hpp"

namespace dgs {

namespace {

// Which position components feed plane p: xy -> (x,y), xz -> (x,z), yz -> (y,z).
constexpr int kPlaneAxes[3][2] = {{0, 1}, {0, 2}, {1, 2}};

struct Bilinear {
    int i0, j0;
    double tu, tv;     // fractional offsets within the cell
    double su, sv;     // d(fractional index)/d(uv)
};

Bilinear locate(int H, int W, const Vec2& uv) {
    Bilinear b;
    b.su = 0.5 * (H - 1);
    b.sv = 0.5 * (W - 1);
    double fi = (uv[0] + 1.0) * b.su;
    double fj = (uv[1] + 1.0) * b.sv;
    fi = std::clamp(fi, 0.0, static_cast<double>(H - 1));
    fj = std::clamp(fj, 0.0, static_cast<double>(W - 1));
    b.i0 = std::min(static_cast<int>(fi), H - 2);
    b.j0 = std::min(static_cast<int>(fj), W - 2);
    b.tu = fi - b.i0;
    b.tv = fj - b.j0;
    return b;
}

}  // namespace

void TriPlane::init(int h, int w, int l, const Box3& b, std::mt19937& rng) {
    H = h;
    W = w;
    L = l;
    box = b;
    // Positive init keeps the Hadamard fusion away from zero at step 0.
    std::uniform_real_distribution<double> u(0.1, 0.5);
    for (auto& p : planes) {
        p.resize(plane_size());
        for (Eigen::Index i = 0; i < p.size(); ++i) p[i] = u(rng);
    }
}

Vec3 normalize_position(const Vec3& x, const Box3& box) {
    const Vec3 ext = box.extent();
    if (ext[0] <= 0.0 || ext[1] <= 0.0 || ext[2] <= 0.0)
        throw DegenerateBoxError("normalize_position: box has non-positive extent");
    Vec3 n;
    for (int c = 0; c < 3; ++c)
        n[c] = std::clamp(2.0 * (x[c] - box.min[c]) / ext[c] - 1.0, -1.0, 1.0);
    return n;
}

Vec3 normalize_position_backward(const Vec3& x, const Box3& box, const Vec3& dL_dnorm) {
    const Vec3 ext = box.extent();
    Vec3 g;
    for (int c = 0; c < 3; ++c) {
        const double raw = 2.0 * (x[c] - box.min[c]) / ext[c] - 1.0;
        g[c] = (raw >= -1.0 && raw <= 1.0) ? dL_dnorm[c] * 2.0 / ext[c] : 0.0;
    }
    return g;
}

std::vector<Vec3> derive_doppelgangers(const Vec3& x_norm, std::span<const Quat> r) {
    std::vector<Vec3> out(r.size());
    for (size_t k = 0; k < r.size(); ++k) {
        Vec3 p = rotate_point(r[k], x_norm);
        for (int c = 0; c < 3; ++c) p[c] = std::clamp(p[c], -1.0, 1.0);
        out[k] = p;
    }
    return out;
}

VecX sample_plane(const VecX& plane, int H, int W, int L, const Vec2& uv, int c0, int c1) {
    if (c0 < 0 || c1 > L || c0 >= c1)
        throw BadChannelRangeError("sample_plane: bad channel range");
    const Bilinear b = locate(H, W, uv);
    const double w00 = (1.0 - b.tu) * (1.0 - b.tv);
    const double w01 = (1.0 - b.tu) * b.tv;
    const double w10 = b.tu * (1.0 - b.tv);
    const double w11 = b.tu * b.tv;
    const Eigen::Index o00 = static_cast<Eigen::Index>(b.i0 * W + b.j0) * L;
    const Eigen::Index o01 = static_cast<Eigen::Index>(b.i0 * W + b.j0 + 1) * L;
    const Eigen::Index o10 = static_cast<Eigen::Index>((b.i0 + 1) * W + b.j0) * L;
    const Eigen::Index o11 = static_cast<Eigen::Index>((b.i0 + 1) * W + b.j0 + 1) * L;
    VecX out(c1 - c0);
    for (int c = c0; c < c1; ++c)
        out[c - c0] = w00 * plane[o00 + c] + w01 * plane[o01 + c] + w10 * plane[o10 + c] +
                      w11 * plane[o11 + c];
    return out;
}

VecX sample_plane(const VecX& plane, int H, int W, int L, const Vec2& uv, int c0, int c1,
                  MatX& dvalue_duv) {
    if (c0 < 0 || c1 > L || c0 >= c1)
        throw BadChannelRangeError("sample_plane: bad channel range");
    const Bilinear b = locate(H, W, uv);
    const double w00 = (1.0 - b.tu) * (1.0 - b.tv);
    const double w01 = (1.0 - b.tu) * b.tv;
    const double w10 = b.tu * (1.0 - b.tv);
    const double w11 = b.tu * b.tv;
    const Eigen::Index o00 = static_cast<Eigen::Index>(b.i0 * W + b.j0) * L;
    const Eigen::Index o01 = static_cast<Eigen::Index>(b.i0 * W + b.j0 + 1) * L;
    const Eigen::Index o10 = static_cast<Eigen::Index>((b.i0 + 1) * W + b.j0) * L;
    const Eigen::Index o11 = static_cast<Eigen::Index>((b.i0 + 1) * W + b.j0 + 1) * L;
    const int n = c1 - c0;
    VecX out(n);
    dvalue_duv.resize(n, 2);
    for (int c = c0; c < c1; ++c) {
        const double p00 = plane[o00 + c], p01 = plane[o01 + c];
        const double p10 = plane[o10 + c], p11 = plane[o11 + c];
        out[c - c0] = w00 * p00 + w01 * p01 + w10 * p10 + w11 * p11;
        const double dtu = (1.0 - b.tv) * (p10 - p00) + b.tv * (p11 - p01);
        const double dtv = (1.0 - b.tu) * (p01 - p00) + b.tu * (p11 - p10);
        dvalue_duv(c - c0, 0) = dtu * b.su;
        dvalue_duv(c - c0, 1) = dtv * b.sv;
    }
    return out;
}

VecX fuse_feature(const TriPlane& tp, const Vec3& x_norm, std::span<const Quat> r) {
    const int K = static_cast<int>(r.size());
    if (K < 1 || tp.L % K != 0)
        throw BadDoppelgangerCountError("fuse_feature: K must divide the channel count");
    const int block = tp.L / K;
    VecX f(tp.L);
    const auto dops = derive_doppelgangers(x_norm, r);
    for (int k = 0; k < K; ++k) {
        const int c0 = k * block, c1 = (k + 1) * block;
        VecX sub;
        for (int p = 0; p < 3; ++p) {
            const Vec2 uv(dops[k][kPlaneAxes[p][0]], dops[k][kPlaneAxes[p][1]]);
            VecX v = sample_plane(tp.planes[p], tp.H, tp.W, tp.L, uv, c0, c1);
            sub = (p == 0) ? std::move(v) : VecX(sub.cwiseProduct(v));
        }
        f.segment(c0, block) = sub;
    }
    return f;
}

Vec3 fuse_feature_backward(const TriPlane& tp, const Vec3& x_norm, std::span<const Quat> r,
                           const VecX& dL_df, std::array<VecX, 3>* dL_dplanes,
                           std::span<Vec4> dL_dr) {
    const int K = static_cast<int>(r.size());
    if (K < 1 || tp.L % K != 0)
        throw BadDoppelgangerCountError("fuse_feature_backward: K must divide the channel count");
    if (!dL_dr.empty() && dL_dr.size() != r.size())
        throw ShapeMismatchError("fuse_feature_backward: dL_dr size mismatch");
    const int block = tp.L / K;
    Vec3 dL_dx = Vec3::Zero();

    for (int k = 0; k < K; ++k) {
        const int c0 = k * block, c1 = (k + 1) * block;
        Vec3 p_rot = rotate_point(r[k], x_norm);
        Vec3 p = p_rot;
        bool inside[3];
        for (int c = 0; c < 3; ++c) {
            inside[c] = (p_rot[c] >= -1.0 && p_rot[c] <= 1.0);
            p[c] = std::clamp(p_rot[c], -1.0, 1.0);
        }

        std::array<VecX, 3> vals;
        std::array<MatX, 3> duv;
        for (int pi = 0; pi < 3; ++pi) {
            const Vec2 uv(p[kPlaneAxes[pi][0]], p[kPlaneAxes[pi][1]]);
            vals[pi] = sample_plane(tp.planes[pi], tp.H, tp.W, tp.L, uv, c0, c1, duv[pi]);
        }

        const VecX up = dL_df.segment(c0, block);
        // Product rule across the three plane samples.
        std::array<VecX, 3> dval;
        dval[0] = up.cwiseProduct(vals[1]).cwiseProduct(vals[2]);
        dval[1] = up.cwiseProduct(vals[0]).cwiseProduct(vals[2]);
        dval[2] = up.cwiseProduct(vals[0]).cwiseProduct(vals[1]);

        Vec3 dL_dp = Vec3::Zero();
        for (int pi = 0; pi < 3; ++pi) {
            const Vec2 uv(p[kPlaneAxes[pi][0]], p[kPlaneAxes[pi][1]]);
            dL_dp[kPlaneAxes[pi][0]] += duv[pi].col(0).dot(dval[pi]);
            dL_dp[kPlaneAxes[pi][1]] += duv[pi].col(1).dot(dval[pi]);

            if (dL_dplanes) {
                // Scatter into the four corner nodes with the sampling weights.
                const Bilinear b = locate(tp.H, tp.W, uv);
                const int i0 = b.i0, j0 = b.j0;
                const double w00 = (1 - b.tu) * (1 - b.tv), w01 = (1 - b.tu) * b.tv;
                const double w10 = b.tu * (1 - b.tv), w11 = b.tu * b.tv;
                VecX& g = (*dL_dplanes)[pi];
                for (int c = c0; c < c1; ++c) {
                    const double d = dval[pi][c - c0];
                    g[static_cast<Eigen::Index>(i0 * tp.W + j0) * tp.L + c] += w00 * d;
                    g[static_cast<Eigen::Index>(i0 * tp.W + j0 + 1) * tp.L + c] += w01 * d;
                    g[static_cast<Eigen::Index>((i0 + 1) * tp.W + j0) * tp.L + c] += w10 * d;
                    g[static_cast<Eigen::Index>((i0 + 1) * tp.W + j0 + 1) * tp.L + c] += w11 * d;
                }
            }
        }

        for (int c = 0; c < 3; ++c)
            if (!inside[c]) dL_dp[c] = 0.0;

        const Mat3 R = quat_to_rotmat(r[k]);
        dL_dx += R.transpose() * dL_dp;
        if (!dL_dr.empty()) {
            const Eigen::Matrix<double, 3, 4> Jq = rotate_point_quat_jacobian(r[k], x_norm);
            dL_dr[k] = tangent_project(Jq.transpose() * dL_dp, r[k]);
        }
    }
    return dL_dx;
}

std::array<DilutionReport, 3> dilution_stats(std::span<const Vec3> points, int H, int W,
                                             DilutionMode mode, std::span<const Quat> rotations) {
    if (mode == DilutionMode::kDerived && rotations.size() != points.size())
        throw ShapeMismatchError("dilution_stats: derived mode needs one rotation per point");
    std::array<DilutionReport, 3> reports;
    const int64_t n = static_cast<int64_t>(points.size());
    for (int pi = 0; pi < 3; ++pi) {
        std::unordered_map<int64_t, int64_t> cells;
        for (size_t idx = 0; idx < points.size(); ++idx) {
            Vec3 p = points[idx];
            if (mode == DilutionMode::kDerived) {
                p = rotate_point(rotations[idx], p);
                for (int c = 0; c < 3; ++c) p[c] = std::clamp(p[c], -1.0, 1.0);
            }
            const double u = p[kPlaneAxes[pi][0]], v = p[kPlaneAxes[pi][1]];
            const int i = std::min(static_cast<int>((u + 1.0) * 0.5 * H), H - 1);
            const int j = std::min(static_cast<int>((v + 1.0) * 0.5 * W), W - 1);
            ++cells[static_cast<int64_t>(i) * W + j];
        }
        DilutionReport& r = reports[pi];
        const int64_t occupied = static_cast<int64_t>(cells.size());
        r.occupied_cell_fraction = static_cast<double>(occupied) / (static_cast<double>(H) * W);
        r.mean_points_per_occupied_cell =
            occupied > 0 ? static_cast<double>(n) / static_cast<double>(occupied) : 0.0;
        r.perpendicular_collision_count = n - occupied;
    }
    return reports;
}

}  // namespace dgs
