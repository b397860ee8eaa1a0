#include "gazesynth/pose.hpp"
#include "gazesynth/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace gazesynth {

Mat3 rotation_y(double a)
{
    return Eigen::AngleAxisd(a, Vec3::UnitY()).toRotationMatrix();
}

Mat3 rotation_x(double a)
{
    return Eigen::AngleAxisd(a, Vec3::UnitX()).toRotationMatrix();
}

Mat3 rotation_z(double a)
{
    return Eigen::AngleAxisd(a, Vec3::UnitZ()).toRotationMatrix();
}

Mat3 yaw_pitch_rotation(double yaw, double pitch)
{
    return rotation_y(yaw) * rotation_x(pitch);
}

EulerAngles to_euler(const Mat3& R)
{
    // R e_z = (cos p sin y, -sin p, cos p cos y)
    const Vec3 forward = R.col(2);
    EulerAngles e;
    e.pitch = std::asin(std::clamp(-forward.y(), -1.0, 1.0));
    e.yaw = std::atan2(forward.x(), forward.z());
    const Mat3 rz = yaw_pitch_rotation(e.yaw, e.pitch).transpose() * R;
    e.roll = std::atan2(rz(1, 0), rz(0, 0));
    return e;
}

Mat3 orthonormalize(const Mat3& M)
{
    Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Mat3 D = Mat3::Identity();
    if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) {
        D(2, 2) = -1.0;
    }
    return svd.matrixU() * D * svd.matrixV().transpose();
}

double geodesic_angle(const Mat3& a, const Mat3& b)
{
    const Mat3 rel = a.transpose() * b;
    // atan2 form stays accurate near zero, unlike acos((tr - 1) / 2).
    const Vec3 skew(rel(2, 1) - rel(1, 2), rel(0, 2) - rel(2, 0), rel(1, 0) - rel(0, 1));
    return std::atan2(0.5 * skew.norm(), 0.5 * (rel.trace() - 1.0));
}

Mat3 axis_angle_to_matrix(const Vec3& omega)
{
    const double angle = omega.norm();
    if (angle < 1e-300) {
        return Mat3::Identity();
    }
    return Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix();
}

Vec3 matrix_to_axis_angle(const Mat3& R)
{
    const Eigen::AngleAxisd aa(R);
    return aa.angle() * aa.axis();
}

void check_rotation(const Mat3& R, double tol)
{
    if (!R.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "rotation has non-finite entries");
    }
    const double ortho = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
    if (ortho > tol || std::abs(R.determinant() - 1.0) > tol) {
        throw Error(ErrorCode::InvalidArgument, "pose rotation is not a proper rotation");
    }
}

void check_pose(const HeadPose& pose, double tol)
{
    check_rotation(pose.R, tol);
    if (!pose.t.allFinite()) {
        throw Error(ErrorCode::InvalidArgument, "pose translation is not finite");
    }
    if (!(pose.t.z() > 0.0)) {
        throw Error(ErrorCode::BehindCamera, "pose places the face center behind the camera");
    }
}

} // namespace gazesynth
