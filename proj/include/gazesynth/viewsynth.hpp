#pragma once

#include "gazesynth/facemodel.hpp"
#include "gazesynth/geometry.hpp"
#include "gazesynth/mesh.hpp"
#include "gazesynth/pose.hpp"

#include <string>

namespace gazesynth {

/// One source record: intrinsics, crop, detected landmarks and the camera-frame gaze target (mm).
struct GazeSample
{
    std::string id;
    std::string image_path;
    CameraIntrinsics camera;
    CropTransform crop;
    LandmarkSet2D landmarks;
    Vec3 gaze_target;
};

struct PitchYaw
{
    double pitch = 0.0; ///< radians
    double yaw = 0.0;   ///< radians
};

/// A mesh re-posed into the normalized camera frame together with its labels.
struct PosedSample
{
    MetricMesh mesh;
    Vec3 gaze_target;
    Vec3 gaze_vector;
    PitchYaw gaze;
    HeadPose head_pose;
    double roll_correction = 0.0; ///< radians applied about the camera z axis
    std::string source_id;
    int target_pose_id = 0;
};

/// Centroid of the mesh's six eye/mouth-corner landmark vertices.
Vec3 mesh_face_center(const MetricMesh& mesh);

/**
 * Face axes from the mesh landmarks as matrix columns: x from the right to the
 * left eye center, y toward the mouth center orthogonalized against x, z = x × y.
 */
Mat3 face_axes(const MetricMesh& mesh);

struct PosedMesh
{
    MetricMesh mesh;
    Vec3 gaze_target;
};

/// v -> R_t R_s^T (v - t_s) + t_t for every vertex and the gaze target.
PosedMesh transform_to_pose(const MetricMesh& mesh, const Vec3& gaze_target,
                            const HeadPose& source, const HeadPose& target);

struct InplaneResult
{
    MetricMesh mesh;
    Vec3 gaze_target;
    HeadPose pose;
    double angle = 0.0; ///< rotation applied about the camera z axis, radians
};

/**
 * Rotation about the camera z axis through the face center that makes the face
 * x axis (left minus right eye center) horizontal with positive u direction,
 * i.e. its camera-frame y component becomes zero and x component positive.
 * The same rotation is applied to vertices, gaze target and head pose.
 * Throws ProfileDegenerate when the face x axis is parallel to the camera z axis.
 */
InplaneResult inplane_correction(const MetricMesh& mesh, const Vec3& gaze_target,
                                 const HeadPose& pose);

/// In-plane roll of the face x axis, radians.
double inplane_roll(const MetricMesh& mesh);

/// pitch = asin(-v_y), yaw = atan2(-v_x, -v_z). Throws InvalidArgument for non-unit input.
PitchYaw gaze_to_pitch_yaw(const Vec3& v);
Vec3 pitch_yaw_to_gaze(const PitchYaw& angles);

/// Angle between two unit vectors, degrees.
double angular_error(const Vec3& a, const Vec3& b);

/**
 * Full normalization for one target pose: re-anchors the source translation at
 * the mesh face center, applies R_t = R_y(yaw) R_x(pitch) with the face center
 * placed at (0, 0, distance), removes in-plane roll and derives the gaze labels.
 */
PosedSample normalize_to_target(const MetricMesh& mesh, const Vec3& gaze_target,
                                const HeadPose& source, double yaw, double pitch,
                                double distance_mm);

} // namespace gazesynth
