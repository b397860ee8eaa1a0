#include "gazesynth/viewsynth.hpp"
#include "gazesynth/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gazesynth {

Vec3 mesh_face_center(const MetricMesh& mesh)
{
    SixPoints<3> six;
    const auto ids = select_six(mesh.landmark_map);
    for (std::size_t i = 0; i < 6; ++i) {
        six[i] = mesh.vertices.at(static_cast<std::size_t>(ids[i]));
    }
    return face_center(six);
}

namespace {

Vec3 eye_center(const MetricMesh& mesh, int a, int b)
{
    return 0.5 * (mesh.landmark(a) + mesh.landmark(b));
}

Vec3 face_x_axis(const MetricMesh& mesh)
{
    const Vec3 right = eye_center(mesh, landmark::right_eye_outer, landmark::right_eye_inner);
    const Vec3 left = eye_center(mesh, landmark::left_eye_inner, landmark::left_eye_outer);
    const Vec3 x = left - right;
    if (x.norm() < 1e-9) {
        throw Error(ErrorCode::DegenerateLandmarks, "eye centers coincide");
    }
    return x.normalized();
}

MetricMesh map_vertices(const MetricMesh& mesh, const Mat3& R, const Vec3& t)
{
    MetricMesh out = mesh;
    for (auto& v : out.vertices) {
        v = R * v + t;
    }
    return out;
}

} // namespace

Mat3 face_axes(const MetricMesh& mesh)
{
    const Vec3 x = face_x_axis(mesh);
    const Vec3 mouth = 0.5 * (mesh.landmark(landmark::mouth_right) +
                              mesh.landmark(landmark::mouth_left));
    Vec3 y = mouth - mesh_face_center(mesh);
    y -= y.dot(x) * x;
    if (y.norm() < 1e-9) {
        throw Error(ErrorCode::DegenerateLandmarks, "mouth center lies on the eye axis");
    }
    y.normalize();
    Mat3 axes;
    axes.col(0) = x;
    axes.col(1) = y;
    axes.col(2) = x.cross(y);
    return axes;
}

PosedMesh transform_to_pose(const MetricMesh& mesh, const Vec3& gaze_target,
                            const HeadPose& source, const HeadPose& target)
{
    check_rotation(source.R);
    check_rotation(target.R);
    const Mat3 R = target.R * source.R.transpose();
    const Vec3 t = target.t - R * source.t;
    return {map_vertices(mesh, R, t), R * gaze_target + t};
}

double inplane_roll(const MetricMesh& mesh)
{
    const Vec3 x = face_x_axis(mesh);
    return std::atan2(x.y(), x.x());
}

InplaneResult inplane_correction(const MetricMesh& mesh, const Vec3& gaze_target,
                                 const HeadPose& pose)
{
    const Vec3 x = face_x_axis(mesh);
    if (std::hypot(x.x(), x.y()) < 1e-6) {
        throw Error(ErrorCode::ProfileDegenerate, "face x axis is parallel to the camera z axis");
    }
    const double angle = -std::atan2(x.y(), x.x());
    const Mat3 Rz = rotation_z(angle);
    const Vec3 center = mesh_face_center(mesh);
    const Vec3 t = center - Rz * center;

    InplaneResult r;
    r.mesh = map_vertices(mesh, Rz, t);
    r.gaze_target = Rz * gaze_target + t;
    r.pose.R = Rz * pose.R;
    r.pose.t = Rz * pose.t + t;
    r.angle = angle;
    return r;
}

PitchYaw gaze_to_pitch_yaw(const Vec3& v)
{
    if (!v.allFinite() || std::abs(v.norm() - 1.0) > 1e-6) {
        throw Error(ErrorCode::InvalidArgument, "gaze vector is not unit length");
    }
    return {std::asin(std::clamp(-v.y(), -1.0, 1.0)), std::atan2(-v.x(), -v.z())};
}

Vec3 pitch_yaw_to_gaze(const PitchYaw& a)
{
    return {-std::cos(a.pitch) * std::sin(a.yaw), -std::sin(a.pitch),
            -std::cos(a.pitch) * std::cos(a.yaw)};
}

double angular_error(const Vec3& a, const Vec3& b)
{
    return std::acos(std::clamp(a.dot(b), -1.0, 1.0)) * 180.0 / std::numbers::pi;
}

PosedSample normalize_to_target(const MetricMesh& mesh, const Vec3& gaze_target,
                                const HeadPose& source, double yaw, double pitch,
                                double distance_mm)
{
    // The reference pose origin is the face center; anchoring it at the lifted
    // mesh's own face center puts that center exactly at (0, 0, distance).
    const HeadPose anchored{source.R, mesh_face_center(mesh)};
    const HeadPose target{yaw_pitch_rotation(yaw, pitch), Vec3(0.0, 0.0, distance_mm)};
    PosedMesh posed = transform_to_pose(mesh, gaze_target, anchored, target);
    InplaneResult corrected = inplane_correction(posed.mesh, posed.gaze_target, target);

    PosedSample s;
    s.mesh = std::move(corrected.mesh);
    s.gaze_target = corrected.gaze_target;
    s.head_pose = corrected.pose;
    s.roll_correction = corrected.angle;
    s.gaze_vector = (s.gaze_target - mesh_face_center(s.mesh)).normalized();
    s.gaze = gaze_to_pitch_yaw(s.gaze_vector);
    return s;
}

} // namespace gazesynth
