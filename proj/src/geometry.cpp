#include "gazesynth/geometry.hpp"
#include "gazesynth/error.hpp"

#include <cmath>
#include <string>

namespace gazesynth {

const char* to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::BehindCamera: return "behind camera";
    case ErrorCode::DegenerateLandmarks: return "degenerate landmarks";
    case ErrorCode::MalformedLandmarks: return "malformed landmarks";
    case ErrorCode::DegenerateConfiguration: return "degenerate configuration";
    case ErrorCode::FaceBehindCamera: return "face behind camera";
    case ErrorCode::ProfileDegenerate: return "profile degenerate";
    case ErrorCode::SelfIntersectingOutline: return "self-intersecting outline";
    case ErrorCode::SamplerExhausted: return "sampler exhausted";
    case ErrorCode::Parse: return "parse error";
    case ErrorCode::Io: return "io error";
    case ErrorCode::Config: return "config error";
    }
    return "error";
}

CameraIntrinsics::CameraIntrinsics(double fx, double fy, double cx, double cy)
    : fx_(fx), fy_(fy), cx_(cx), cy_(cy)
{
    if (!(fx > 0.0) || !(fy > 0.0) || !std::isfinite(fx) || !std::isfinite(fy)) {
        throw Error(ErrorCode::InvalidArgument, "focal lengths must be positive and finite");
    }
    if (!std::isfinite(cx) || !std::isfinite(cy)) {
        throw Error(ErrorCode::InvalidArgument, "principal point must be finite");
    }
}

Mat3 CameraIntrinsics::matrix() const
{
    Mat3 m;
    m << fx_, 0.0, cx_, 0.0, fy_, cy_, 0.0, 0.0, 1.0;
    return m;
}

Mat3 CameraIntrinsics::inverse() const
{
    Mat3 m;
    m << 1.0 / fx_, 0.0, -cx_ / fx_, 0.0, 1.0 / fy_, -cy_ / fy_, 0.0, 0.0, 1.0;
    return m;
}

Vec2 HomogeneousPixel::dehomogenize() const
{
    if (w == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "pixel at infinity (w == 0)");
    }
    return {u / w, v / w};
}

CropTransform::CropTransform(double box_cx, double box_cy, double box_w, double box_h,
                             double scale_x, double scale_y)
    : box_cx_(box_cx), box_cy_(box_cy), box_w_(box_w), box_h_(box_h), scale_x_(scale_x),
      scale_y_(scale_y)
{
    if (!(box_w > 0.0) || !(box_h > 0.0) || !(scale_x > 0.0) || !(scale_y > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "crop box size and scale must be positive");
    }
}

CropTransform CropTransform::for_patch(double box_cx, double box_cy, double box_w, double box_h,
                                       double patch_size)
{
    return CropTransform(box_cx, box_cy, box_w, box_h, patch_size / box_w, patch_size / box_h);
}

Mat3 CropTransform::matrix() const
{
    Mat3 m;
    m << scale_x_, 0.0, -scale_x_ * (box_cx_ - box_w_ / 2.0), 0.0, scale_y_,
        -scale_y_ * (box_cy_ - box_h_ / 2.0), 0.0, 0.0, 1.0;
    return m;
}

HomogeneousPixel CropTransform::original_to_patch(const HomogeneousPixel& p_o) const
{
    const double x0 = box_cx_ - box_w_ / 2.0;
    const double y0 = box_cy_ - box_h_ / 2.0;
    return {scale_x_ * (p_o.u - x0 * p_o.w), scale_y_ * (p_o.v - y0 * p_o.w), p_o.w};
}

HomogeneousPixel CropTransform::patch_to_original(const HomogeneousPixel& p) const
{
    const double x0 = box_cx_ - box_w_ / 2.0;
    const double y0 = box_cy_ - box_h_ / 2.0;
    return {p.u / scale_x_ + x0 * p.w, p.v / scale_y_ + y0 * p.w, p.w};
}

Vec2 project(const CameraIntrinsics& camera, const Vec3& point)
{
    if (!(point.z() > 0.0)) {
        throw Error(ErrorCode::BehindCamera,
                    "point z = " + std::to_string(point.z()) + " is not in front of the camera");
    }
    return {camera.fx() * point.x() / point.z() + camera.cx(),
            camera.fy() * point.y() / point.z() + camera.cy()};
}

Vec3 back_project_ray(const CameraIntrinsics& camera, const HomogeneousPixel& p_o)
{
    const Vec2 p = p_o.dehomogenize();
    const Vec3 ray((p.x() - camera.cx()) / camera.fx(), (p.y() - camera.cy()) / camera.fy(), 1.0);
    return ray.normalized();
}

} // namespace gazesynth
