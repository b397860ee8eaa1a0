#pragma once

#include <Eigen/Core>

namespace gazesynth {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Zero-skew pinhole intrinsics. Image u points right, v down, camera z into the scene.
class CameraIntrinsics
{
public:
    CameraIntrinsics(double fx, double fy, double cx, double cy);

    double fx() const { return fx_; }
    double fy() const { return fy_; }
    double cx() const { return cx_; }
    double cy() const { return cy_; }

    Mat3 matrix() const;
    Mat3 inverse() const;

private:
    double fx_, fy_, cx_, cy_;
};

struct HomogeneousPixel
{
    double u = 0.0;
    double v = 0.0;
    double w = 1.0;

    static HomogeneousPixel affine(double u, double v) { return {u, v, 1.0}; }
    static HomogeneousPixel affine(const Vec2& p) { return {p.x(), p.y(), 1.0}; }

    /// Throws InvalidArgument when w == 0.
    Vec2 dehomogenize() const;
};

/**
 * Crop-and-resize from original-image pixels to face-patch pixels.
 *
 * The box is given by its center and size in the original image; the patch is
 * the box resized by (scale_x, scale_y). As a matrix:
 *
 *     [ sx  0  -sx (box_cx - box_w / 2) ]
 *     [ 0  sy  -sy (box_cy - box_h / 2) ]
 *     [ 0   0   1                       ]
 *
 * so the box's top-left corner maps to patch (0, 0).
 */
class CropTransform
{
public:
    CropTransform(double box_cx, double box_cy, double box_w, double box_h, double scale_x,
                  double scale_y);

    /// Square-patch helper: scale chosen so that the box becomes `patch_size` pixels wide and high.
    static CropTransform for_patch(double box_cx, double box_cy, double box_w, double box_h,
                                   double patch_size);

    double box_cx() const { return box_cx_; }
    double box_cy() const { return box_cy_; }
    double box_w() const { return box_w_; }
    double box_h() const { return box_h_; }
    double scale_x() const { return scale_x_; }
    double scale_y() const { return scale_y_; }
    double patch_w() const { return scale_x_ * box_w_; }
    double patch_h() const { return scale_y_ * box_h_; }

    Mat3 matrix() const;

    /// p = T p_o
    HomogeneousPixel original_to_patch(const HomogeneousPixel& p_o) const;
    /// p_o = T^-1 p
    HomogeneousPixel patch_to_original(const HomogeneousPixel& p) const;

private:
    double box_cx_, box_cy_, box_w_, box_h_, scale_x_, scale_y_;
};

/// Perspective projection of a camera-frame point (mm) to pixels. Throws BehindCamera for z <= 0.
Vec2 project(const CameraIntrinsics& camera, const Vec3& point);

/// Unit direction of C^-1 p_o, oriented with positive z.
Vec3 back_project_ray(const CameraIntrinsics& camera, const HomogeneousPixel& p_o);

inline HomogeneousPixel patch_to_original(const CropTransform& crop, const HomogeneousPixel& p)
{
    return crop.patch_to_original(p);
}

} // namespace gazesynth
