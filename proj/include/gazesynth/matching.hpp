#pragma once

#include "gazesynth/facemodel.hpp"
#include "gazesynth/geometry.hpp"
#include "gazesynth/mesh.hpp"
#include "gazesynth/pnp.hpp"
#include "gazesynth/pose.hpp"

namespace gazesynth {

/// Coefficients of lambda = alpha * d + beta, the distance of a vertex along its camera ray.
struct MatchingParams
{
    double alpha = 0.0;  ///< mm per patch pixel
    double beta = 0.0;   ///< mm
    double l_p = 0.0;    ///< eye-center distance in the patch mesh (pixels)
    double l_r = 0.0;    ///< eye-center distance in the reference model (mm)
    double d_bar = 0.0;  ///< mean depth of the six matching landmarks (pixels)
    Vec3 v_bar = Vec3::Zero(); ///< camera-frame centroid of the posed reference landmarks (mm)
    HeadPose source_pose;

    double lambda(double d) const { return alpha * d + beta; }
};

/// Eye-center distance of the mesh landmarks measured in the (u, v) patch plane.
double patch_eye_distance(const PatchMesh& mesh);

/// alpha = l_r / l_p. Throws DegenerateLandmarks when l_p < 1e-6.
double compute_alpha(const PatchMesh& mesh, const ReferenceFaceModel& reference);

/**
 * beta = |v_bar| - alpha * d_bar, with v_bar the centroid of the six reference
 * landmarks under `pose`. Throws FaceBehindCamera if any vertex would get
 * alpha * d + beta <= 0.
 */
double compute_beta(const PatchMesh& mesh, double alpha, const HeadPose& pose,
                    const ReferenceFaceModel& reference);

/// Fills every MatchingParams field for a mesh and a source pose.
MatchingParams matching_params(const PatchMesh& mesh, const HeadPose& pose,
                               const ReferenceFaceModel& reference);

/// v_c = (alpha d + beta) * ray(C, T^-1 (u, v, 1)). Throws FaceBehindCamera naming the vertex.
MetricMesh metricize(const PatchMesh& mesh, const CameraIntrinsics& camera,
                     const CropTransform& crop, const MatchingParams& params);

/// Source head pose from the six detected landmarks against the reference model.
PnPResult estimate_source_pose(const LandmarkSet2D& landmarks, const CameraIntrinsics& camera,
                               const ReferenceFaceModel& reference, const PnPConfig& config = {});

/// Diagnostic: |v_bar| minus the z-depth of v_bar, i.e. how far the ray-distance
/// approximation of beta departs from a depth-based one.
double beta_offaxis_residual(const MatchingParams& params);

} // namespace gazesynth
