#pragma once

#include "gazesynth/geometry.hpp"

#include <Eigen/Geometry>

namespace gazesynth {

/// Rotation and translation from the face coordinate system to the camera coordinate system.
struct HeadPose
{
    Mat3 R = Mat3::Identity();
    Vec3 t = Vec3::Zero();

    Vec3 apply(const Vec3& face_point) const { return R * face_point + t; }
};

/// Rotation about the camera y axis (yaw) and x axis (pitch), radians.
Mat3 rotation_y(double angle);
Mat3 rotation_x(double angle);
Mat3 rotation_z(double angle);

/// R = R_y(yaw) R_x(pitch), the zero-roll rotation used for target head poses.
Mat3 yaw_pitch_rotation(double yaw, double pitch);

/// Decomposition R = R_y(yaw) R_x(pitch) R_z(roll), radians.
struct EulerAngles
{
    double pitch = 0.0;
    double yaw = 0.0;
    double roll = 0.0;
};
EulerAngles to_euler(const Mat3& R);

/// Nearest rotation matrix (SVD projection with det = +1).
Mat3 orthonormalize(const Mat3& M);

/// Angle of R_a^T R_b in radians.
double geodesic_angle(const Mat3& a, const Mat3& b);

Mat3 axis_angle_to_matrix(const Vec3& omega);
Vec3 matrix_to_axis_angle(const Mat3& R);

/// Throws InvalidArgument when R is not a proper rotation within `tol`.
void check_rotation(const Mat3& R, double tol = 1e-8);
/// check_rotation plus a finite t in front of the camera (BehindCamera otherwise).
void check_pose(const HeadPose& pose, double tol = 1e-8);

} // namespace gazesynth
