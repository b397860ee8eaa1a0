#pragma once

#include "gazesynth/geometry.hpp"
#include "gazesynth/pose.hpp"

#include <optional>
#include <span>

namespace gazesynth {

struct PnPConfig
{
    double gradient_tolerance = 1e-10; ///< infinity norm of J^T r
    double step_tolerance = 1e-12;
    int max_iterations = 200;
    double grid_step_deg = 15.0;  ///< orientation grid used for initialization
    int refine_candidates = 8;    ///< best grid cells refined with LM
};

struct PnPResult
{
    HeadPose pose;
    double rms_reprojection_error = 0.0; ///< pixels
    int iterations = 0;
    bool converged = false;
};

/**
 * Pose minimizing sum |project(C, R X_i + t) - p_i|^2.
 *
 * Without `initial`, candidates come from a yaw/pitch/roll grid with closed-form
 * translation (plus a DLT estimate when the model is clearly non-planar); the best
 * few are refined with Levenberg-Marquardt and the lowest-cost result wins.
 * Throws DegenerateConfiguration for collinear model points, InvalidArgument for
 * mismatched or too few (< 4) correspondences. Non-convergence is reported through
 * `converged`, not an exception.
 */
PnPResult solve_pnp(std::span<const Vec3> model_points, std::span<const Vec2> image_points,
                    const CameraIntrinsics& camera, const PnPConfig& config = {},
                    const std::optional<HeadPose>& initial = std::nullopt);

/// RMS of per-point reprojection residual norms. Throws BehindCamera if any point has z <= 0.
double reprojection_rms(const HeadPose& pose, std::span<const Vec3> model_points,
                        std::span<const Vec2> image_points, const CameraIntrinsics& camera);

} // namespace gazesynth
