#pragma once

#include "dgsplat/errors.hpp"
#include "dgsplat/types.hpp"

namespace dgs {

// Pinhole camera. view maps world to camera coordinates, +z forward.
// Pixel centers sit at integer coordinates; cx, cy are in the same frame.
struct Camera {
    double fx = 100.0, fy = 100.0;
    double cx = 0.0, cy = 0.0;
    int width = 0, height = 0;
    Mat4 view = Mat4::Identity();
    double near = 0.2;

    Mat3 rotation() const { return view.topLeftCorner<3, 3>(); }
    Vec3 translation() const { return view.topRightCorner<3, 1>(); }
    Vec3 position() const { return -rotation().transpose() * translation(); }

    Vec3 to_camera(const Vec3& x) const { return rotation() * x + translation(); }

    void validate() const {
        if (fx <= 0.0 || fy <= 0.0) throw ConfigError("camera: focal lengths must be positive");
        const Mat3 R = rotation();
        if ((R * R.transpose() - Mat3::Identity()).norm() > 1e-5)
            throw ConfigError("camera: view rotation block is not orthonormal");
    }

    // Rigid look-at with +z pointing from eye toward target.
    static Camera look_at(const Vec3& eye, const Vec3& target, const Vec3& up_hint, double fx_,
                          double fy_, int width_, int height_) {
        Camera cam;
        cam.fx = fx_;
        cam.fy = fy_;
        cam.width = width_;
        cam.height = height_;
        cam.cx = 0.5 * (width_ - 1);
        cam.cy = 0.5 * (height_ - 1);
        const Vec3 fwd = (target - eye).normalized();
        Vec3 right = fwd.cross(up_hint).normalized();
        if (!right.allFinite() || right.norm() < 1e-9) right = fwd.cross(Vec3(0, 0, 1)).normalized();
        const Vec3 down = fwd.cross(right);
        Mat3 R;
        R.row(0) = right;
        R.row(1) = down;
        R.row(2) = fwd;
        cam.view.setIdentity();
        cam.view.topLeftCorner<3, 3>() = R;
        cam.view.topRightCorner<3, 1>() = -R * eye;
        return cam;
    }
};

}  // namespace dgs
