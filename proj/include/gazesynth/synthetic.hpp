#pragma once

#include "gazesynth/facemodel.hpp"
#include "gazesynth/image.hpp"
#include "gazesynth/manifest.hpp"
#include "gazesynth/mesh.hpp"
#include "gazesynth/pose.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gazesynth {

/// Name of the marker vertex placed 100 mm along the gaze ray from the face center.
inline constexpr const char* gaze_marker_name = "gaze_marker";
inline constexpr double gaze_marker_distance_mm = 100.0;

struct SyntheticFaceParams
{
    double interocular_mm = 60.0;
    /// Head ellipsoid semi-axes (mm): half width, half height, depth.
    double head_semi_x = 75.0;
    double head_semi_y = 105.0;
    double head_semi_z = 90.0;
    double checker_period_mm = 12.0;
    std::uint64_t seed = 0;

    int image_width = 640;
    int image_height = 480;
    double focal_px = 800.0;
    double patch_size = 224.0;
    /// Offset added to every patch depth so the six-landmark mean depth is non-zero.
    double depth_offset_px = 50.0;

    void validate() const;
};

struct SyntheticGroundTruth
{
    HeadPose pose;        ///< face frame (reference-model frame) to camera
    double alpha = 0.0;   ///< mm per patch pixel of d
    double beta = 0.0;    ///< lambda = alpha d + beta is exact for every vertex
    Vec3 face_center = Vec3::Zero();
    Vec3 gaze_target = Vec3::Zero();
    MetricMesh metric;    ///< exact camera-frame mesh
    std::vector<unsigned char> back_of_head; ///< vertices on the far side of the head
    int marker_vertex = -1;
};

struct SyntheticFace
{
    RgbImage image;       ///< source view rendered with the source camera
    PatchMesh mesh;
    SourceRecord record;  ///< image/mesh paths left empty
    SyntheticGroundTruth truth;
};

/**
 * Checkerboard half-ellipsoid head carrying the reference landmarks (scaled to the
 * requested interocular distance) at a random near-frontal pose, plus a small
 * marker octahedron centred on the gaze ray. The patch mesh is the exact
 * projection into the crop with d = (|v| - beta) / alpha, so metricization with
 * the recorded alpha and beta reproduces the metric mesh.
 */
SyntheticFace generate_synthetic_face(const SyntheticFaceParams& params,
                                      const ReferenceFaceModel& reference);

/// Writes `count` faces (image, mesh, ground truth) into `out_dir` and returns the manifest path.
std::filesystem::path write_synthetic_dataset(const std::filesystem::path& out_dir, int count,
                                              const SyntheticFaceParams& params,
                                              const ReferenceFaceModel& reference);

} // namespace gazesynth
