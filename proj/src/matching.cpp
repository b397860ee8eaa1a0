#include "gazesynth/matching.hpp"
#include "gazesynth/error.hpp"

#include <algorithm>
#include <string>

namespace gazesynth {

double patch_eye_distance(const PatchMesh& mesh)
{
    const auto ids = select_six(mesh.landmark_map);
    SixPoints<2> uv;
    for (std::size_t i = 0; i < 6; ++i) {
        const Vec3& v = mesh.vertices.at(static_cast<std::size_t>(ids[i]));
        uv[i] = Vec2(v.x(), v.y());
    }
    return eye_center_distance(uv);
}

double compute_alpha(const PatchMesh& mesh, const ReferenceFaceModel& reference)
{
    return reference.eye_distance() / patch_eye_distance(mesh);
}

namespace {

double six_landmark_mean_depth(const PatchMesh& mesh)
{
    double sum = 0.0;
    for (int id : select_six(mesh.landmark_map)) {
        sum += mesh.vertices.at(static_cast<std::size_t>(id)).z();
    }
    return sum / 6.0;
}

Vec3 posed_reference_centroid(const HeadPose& pose, const ReferenceFaceModel& reference)
{
    SixPoints<3> posed;
    const auto six = reference.six();
    for (std::size_t i = 0; i < 6; ++i) {
        posed[i] = pose.apply(six[i]);
    }
    return face_center(posed);
}

void check_in_front(const PatchMesh& mesh, double alpha, double beta)
{
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const double lambda = alpha * mesh.vertices[i].z() + beta;
        if (!(lambda > 0.0)) {
            throw Error(ErrorCode::FaceBehindCamera,
                        "vertex " + std::to_string(i) + " gets lambda = " + std::to_string(lambda));
        }
    }
}

} // namespace

double compute_beta(const PatchMesh& mesh, double alpha, const HeadPose& pose,
                    const ReferenceFaceModel& reference)
{
    check_pose(pose);
    const double beta =
        posed_reference_centroid(pose, reference).norm() - alpha * six_landmark_mean_depth(mesh);
    check_in_front(mesh, alpha, beta);
    return beta;
}

MatchingParams matching_params(const PatchMesh& mesh, const HeadPose& pose,
                               const ReferenceFaceModel& reference)
{
    MatchingParams p;
    p.l_p = patch_eye_distance(mesh);
    p.l_r = reference.eye_distance();
    p.alpha = p.l_r / p.l_p;
    p.d_bar = six_landmark_mean_depth(mesh);
    p.v_bar = posed_reference_centroid(pose, reference);
    p.source_pose = pose;
    p.beta = compute_beta(mesh, p.alpha, pose, reference);
    return p;
}

MetricMesh metricize(const PatchMesh& mesh, const CameraIntrinsics& camera,
                     const CropTransform& crop, const MatchingParams& params)
{
    if (!(params.alpha > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "alpha must be positive");
    }
    MetricMesh out;
    out.vertices.reserve(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        const double lambda = params.lambda(v.z());
        if (!(lambda > 0.0)) {
            throw Error(ErrorCode::FaceBehindCamera,
                        "vertex " + std::to_string(i) + " gets lambda = " + std::to_string(lambda));
        }
        const auto p_o = crop.patch_to_original(HomogeneousPixel::affine(v.x(), v.y()));
        out.vertices.push_back(lambda * back_project_ray(camera, p_o));
    }
    out.triangles = mesh.triangles;
    out.colors = mesh.colors;
    out.landmark_map = mesh.landmark_map;
    out.markers = mesh.markers;
    return out;
}

PnPResult estimate_source_pose(const LandmarkSet2D& landmarks, const CameraIntrinsics& camera,
                               const ReferenceFaceModel& reference, const PnPConfig& config)
{
    const auto six3 = reference.six();
    const auto six2 = select_six(landmarks);
    return solve_pnp(std::span<const Vec3>(six3), std::span<const Vec2>(six2), camera, config);
}

double beta_offaxis_residual(const MatchingParams& params)
{
    return params.v_bar.norm() - params.v_bar.z();
}

} // namespace gazesynth
