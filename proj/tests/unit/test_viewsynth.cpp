#include "gazesynth/error.hpp"
#include "gazesynth/synthetic.hpp"
#include "gazesynth/viewsynth.hpp"

#include "test_support.hpp"

#include <random>

using namespace gazesynth;
using gazesynth::testing::deg;
using gazesynth::testing::random_rotation;
using gazesynth::testing::random_unit;

namespace {

SyntheticFace sample_face(std::uint64_t seed = 1)
{
    SyntheticFaceParams p;
    p.seed = seed;
    return generate_synthetic_face(p, ReferenceFaceModel::generic());
}

HeadPose random_pose(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    return {random_rotation(rng, 1.0), Vec3(50 * u(rng), 50 * u(rng), 600 + 200 * u(rng))};
}

double angle_between(const Vec3& a, const Vec3& b)
{
    return std::atan2(a.cross(b).norm(), a.dot(b));
}

MetricMesh rotate_about_z(const MetricMesh& mesh, double angle, const Vec3& center)
{
    MetricMesh out = mesh;
    const Mat3 R = rotation_z(angle);
    for (auto& v : out.vertices) {
        v = R * (v - center) + center;
    }
    return out;
}

} // namespace

TEST(TransformToPose, SameSourceAndTargetIsIdentity)
{
    const auto face = sample_face();
    std::mt19937_64 rng(1);
    const HeadPose p = random_pose(rng);
    const auto out = transform_to_pose(face.truth.metric, face.truth.gaze_target, p, p);
    for (std::size_t i = 0; i < out.mesh.vertices.size(); ++i) {
        EXPECT_LT((out.mesh.vertices[i] - face.truth.metric.vertices[i]).norm(), 1e-9);
    }
    EXPECT_LT((out.gaze_target - face.truth.gaze_target).norm(), 1e-9);
}

TEST(TransformToPose, IdentitySourceAppliesTarget)
{
    const auto face = sample_face();
    std::mt19937_64 rng(2);
    const HeadPose e = random_pose(rng);
    const auto out = transform_to_pose(face.truth.metric, face.truth.gaze_target,
                                       HeadPose{Mat3::Identity(), Vec3::Zero()}, e);
    for (std::size_t i = 0; i < out.mesh.vertices.size(); i += 97) {
        EXPECT_LT((out.mesh.vertices[i] - (e.R * face.truth.metric.vertices[i] + e.t)).norm(), 1e-9);
    }
}

TEST(TransformToPose, GazeOffsetRotatesWithRelativeRotation)
{
    const auto face = sample_face();
    std::mt19937_64 rng(3);
    for (int i = 0; i < 100; ++i) {
        const HeadPose s = random_pose(rng);
        const HeadPose t = random_pose(rng);
        const auto out = transform_to_pose(face.truth.metric, face.truth.gaze_target, s, t);
        const Vec3 before = face.truth.gaze_target - mesh_face_center(face.truth.metric);
        const Vec3 after = out.gaze_target - mesh_face_center(out.mesh);
        // Oracle: rotate the offset explicitly, component by component.
        const Mat3 rel = t.R * s.R.transpose();
        Vec3 expected = Vec3::Zero();
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) {
                expected[r] += rel(r, c) * before[c];
            }
        }
        EXPECT_LT((after - expected).norm(), 1e-9 * before.norm());
        EXPECT_NEAR(angle_between(before, after), angle_between(before, expected), 1e-9);
    }
}

TEST(TransformToPose, Rigid)
{
    const auto face = sample_face();
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> pick(0, face.truth.metric.vertices.size() - 1);
    const auto out = transform_to_pose(face.truth.metric, face.truth.gaze_target, random_pose(rng),
                                       random_pose(rng));
    for (int k = 0; k < 1000; ++k) {
        const auto a = pick(rng), b = pick(rng);
        const double d0 = (face.truth.metric.vertices[a] - face.truth.metric.vertices[b]).norm();
        const double d1 = (out.mesh.vertices[a] - out.mesh.vertices[b]).norm();
        EXPECT_NEAR(d0, d1, 1e-9);
    }
}

TEST(InplaneCorrection, RollFreeMeshUnchanged)
{
    const auto face = sample_face();
    const HeadPose pose = face.truth.pose;
    const auto once = inplane_correction(face.truth.metric, face.truth.gaze_target, pose);
    const auto twice = inplane_correction(once.mesh, once.gaze_target, once.pose);
    EXPECT_NEAR(twice.angle, 0.0, 1e-9);
    EXPECT_TRUE(twice.pose.R.isApprox(once.pose.R, 1e-9));
    for (std::size_t i = 0; i < once.mesh.vertices.size(); i += 31) {
        EXPECT_LT((twice.mesh.vertices[i] - once.mesh.vertices[i]).norm(), 1e-9);
    }
}

TEST(InplaneCorrection, UndoesKnownRoll)
{
    const auto face = sample_face();
    const auto level = inplane_correction(face.truth.metric, face.truth.gaze_target, face.truth.pose);
    const Vec3 c = mesh_face_center(level.mesh);
    const MetricMesh rolled = rotate_about_z(level.mesh, 10 * deg, c);
    const auto fixed = inplane_correction(rolled, level.gaze_target, level.pose);
    EXPECT_NEAR(fixed.angle, -10 * deg, 1e-12);
    EXPECT_NEAR(inplane_roll(fixed.mesh), 0.0, 1e-12);
    EXPECT_LT((mesh_face_center(fixed.mesh) - c).norm(), 1e-9);
}

TEST(InplaneCorrection, PreservesGazeToHeadAngle)
{
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto face = sample_face(seed);
        const auto before = mesh_face_center(face.truth.metric);
        const Vec3 g0 = (face.truth.gaze_target - before).normalized();
        const double a0 = angle_between(g0, face.truth.pose.R.col(2));
        const auto r = inplane_correction(face.truth.metric, face.truth.gaze_target, face.truth.pose);
        const Vec3 g1 = (r.gaze_target - mesh_face_center(r.mesh)).normalized();
        EXPECT_NEAR(angle_between(g1, r.pose.R.col(2)), a0, 1e-9);
        EXPECT_NEAR(inplane_roll(r.mesh), 0.0, 1e-9);
        const Vec3 x = face_axes(r.mesh).col(0);
        EXPECT_GT(x.x(), 0.0);
    }
}

TEST(InplaneCorrection, ProfileDegenerate)
{
    auto face = sample_face();
    // Turn the head 90 degrees so the eye axis points along the camera z axis.
    const Vec3 c = mesh_face_center(face.truth.metric);
    const Mat3 axes = face_axes(face.truth.metric);
    const Vec3 x = axes.col(0);
    const Mat3 R = Eigen::Quaterniond::FromTwoVectors(x, Vec3(0, 0, 1)).toRotationMatrix();
    for (auto& v : face.truth.metric.vertices) {
        v = R * (v - c) + c;
    }
    try {
        inplane_correction(face.truth.metric, face.truth.gaze_target, face.truth.pose);
        ADD_FAILURE() << "expected ProfileDegenerate";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ProfileDegenerate);
    }
}

TEST(GazeToPitchYaw, LookingAtCamera)
{
    const auto py = gaze_to_pitch_yaw(Vec3(0, 0, -1));
    EXPECT_NEAR(py.pitch, 0.0, 1e-15);
    EXPECT_NEAR(py.yaw, 0.0, 1e-15);
}

TEST(GazeToPitchYaw, PitchOnly)
{
    const double a = 15 * deg;
    const auto py = gaze_to_pitch_yaw(Vec3(0, -std::sin(a), -std::cos(a)));
    EXPECT_NEAR(py.pitch, a, 1e-12);
    EXPECT_NEAR(py.yaw, 0.0, 1e-12);
}

TEST(GazeToPitchYaw, RejectsNonUnit)
{
    EXPECT_THROW(gaze_to_pitch_yaw(Vec3(0, 0, -2)), Error);
}

TEST(GazeToPitchYaw, RoundTripMillionVectors)
{
    std::mt19937_64 rng(99);
    double worst = 0.0;
    int tested = 0;
    while (tested < 1000000) {
        const Vec3 v = random_unit(rng);
        if (std::abs(v.y()) >= std::sin(89 * deg)) {
            continue;
        }
        ++tested;
        worst = std::max(worst, (pitch_yaw_to_gaze(gaze_to_pitch_yaw(v)) - v).norm());
    }
    EXPECT_LT(worst, 1e-9);
}

TEST(AngularError, Examples)
{
    const Vec3 a(0, 0, -1);
    EXPECT_NEAR(angular_error(a, a), 0.0, 1e-12);
    EXPECT_NEAR(angular_error(a, Vec3(1, 0, 0)), 90.0, 1e-12);
    const double t = 10 * deg;
    EXPECT_NEAR(angular_error(a, Vec3(0, -std::sin(t), -std::cos(t))), 10.0, 1e-9);
}

TEST(NormalizeToTarget, PosedSampleInvariants)
{
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto face = sample_face(seed);
        const double yaw = 50 * deg * u(rng), pitch = 40 * deg * u(rng);
        const auto s = normalize_to_target(face.truth.metric, face.truth.gaze_target,
                                           face.truth.pose, yaw, pitch, 300.0);
        EXPECT_LT((mesh_face_center(s.mesh) - Vec3(0, 0, 300)).norm(), 1e-6);
        EXPECT_NEAR(s.gaze_vector.norm(), 1.0, 1e-9);
        EXPECT_LT(std::abs(inplane_roll(s.mesh)), 1e-6);
        EXPECT_LT((pitch_yaw_to_gaze(s.gaze) - s.gaze_vector).norm(), 1e-9);

        // Gaze direction relative to the face is unchanged by the whole transport.
        const Vec3 g0 = (face.truth.gaze_target - mesh_face_center(face.truth.metric)).normalized();
        const Mat3 ax0 = face_axes(face.truth.metric);
        const Mat3 ax1 = face_axes(s.mesh);
        for (int k = 0; k < 3; ++k) {
            EXPECT_NEAR(angle_between(s.gaze_vector, ax1.col(k)), angle_between(g0, ax0.col(k)), 1e-9);
        }
    }
}

TEST(NormalizeToTarget, FrontalTargetKeepsHeadPoseFrontal)
{
    const auto face = sample_face(3);
    const auto s = normalize_to_target(face.truth.metric, face.truth.gaze_target, face.truth.pose,
                                       0.0, 0.0, 300.0);
    EXPECT_NEAR(s.head_pose.t.z(), 300.0, 1e-9);
    const auto e = to_euler(s.head_pose.R);
    EXPECT_NEAR(e.yaw, 0.0, 0.05);
    EXPECT_NEAR(e.pitch, 0.0, 0.05);
}
