#include "gazesynth/error.hpp"
#include "gazesynth/facemodel.hpp"
#include "gazesynth/pnp.hpp"

#include "test_support.hpp"

#include <algorithm>
#include <random>

using namespace gazesynth;
using gazesynth::testing::deg;

namespace {

const CameraIntrinsics cam(960.0, 960.0, 320.0, 240.0);

std::vector<Vec3> six_model()
{
    const auto six = ReferenceFaceModel::generic().six();
    return {six.begin(), six.end()};
}

HeadPose random_pose(std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    HeadPose p;
    p.R = yaw_pitch_rotation(60 * deg * u(rng), 40 * deg * u(rng)) * rotation_z(30 * deg * u(rng));
    const double z = 300.0 + 450.0 * (u(rng) + 1.0);
    p.t = Vec3(0.1 * z * u(rng), 0.1 * z * u(rng), z);
    return p;
}

std::vector<Vec2> project_all(const HeadPose& pose, const std::vector<Vec3>& model)
{
    std::vector<Vec2> out;
    for (const auto& x : model) {
        out.push_back(project(cam, pose.apply(x)));
    }
    return out;
}

} // namespace

TEST(SolvePnP, RecoversForwardProjectedPose)
{
    const auto model = six_model();
    std::mt19937_64 rng(21);
    for (int i = 0; i < 50; ++i) {
        const HeadPose truth = random_pose(rng);
        const auto r = solve_pnp(model, project_all(truth, model), cam);
        EXPECT_TRUE(r.converged);
        EXPECT_LT(geodesic_angle(r.pose.R, truth.R) / deg, 0.01);
        EXPECT_LT((r.pose.t - truth.t).norm(), 0.01);
        EXPECT_LT(r.rms_reprojection_error, 1e-6);
        EXPECT_NO_THROW(check_pose(r.pose));
    }
}

TEST(SolvePnP, IdentityRotation)
{
    const auto model = six_model();
    HeadPose truth;
    truth.t = Vec3(0, 0, 600);
    const auto r = solve_pnp(model, project_all(truth, model), cam);
    EXPECT_LT(geodesic_angle(r.pose.R, Mat3::Identity()) / deg, 0.01);
    EXPECT_LT((r.pose.t - truth.t).norm(), 0.01);
    EXPECT_LT(r.rms_reprojection_error, 1e-6);
}

TEST(SolvePnP, PermutationInvariant)
{
    const auto model = six_model();
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int i = 0; i < 20; ++i) {
        const HeadPose truth = random_pose(rng);
        auto image = project_all(truth, model);
        for (auto& p : image) {
            p += Vec2(noise(rng), noise(rng));
        }
        const auto base = solve_pnp(model, image, cam);
        std::vector<int> order{0, 1, 2, 3, 4, 5};
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<Vec3> m2;
        std::vector<Vec2> i2;
        for (int k : order) {
            m2.push_back(model[k]);
            i2.push_back(image[k]);
        }
        const auto permuted = solve_pnp(m2, i2, cam);
        EXPECT_NEAR(permuted.rms_reprojection_error, base.rms_reprojection_error, 1e-6);
    }
}

TEST(SolvePnP, ReturnedPoseIsFixedPoint)
{
    const auto model = six_model();
    std::mt19937_64 rng(9);
    std::normal_distribution<double> noise(0.0, 0.5);
    for (int i = 0; i < 20; ++i) {
        auto image = project_all(random_pose(rng), model);
        for (auto& p : image) {
            p += Vec2(noise(rng), noise(rng));
        }
        const auto first = solve_pnp(model, image, cam);
        const auto again = solve_pnp(model, image, cam, {}, first.pose);
        EXPECT_LT(std::abs(again.rms_reprojection_error - first.rms_reprojection_error), 1e-9);
    }
}

TEST(SolvePnP, NonPlanarModelWithManyPoints)
{
    const auto& all = ReferenceFaceModel::generic().points();
    const std::vector<Vec3> model(all.begin(), all.end());
    std::mt19937_64 rng(4);
    for (int i = 0; i < 10; ++i) {
        const HeadPose truth = random_pose(rng);
        const auto r = solve_pnp(model, project_all(truth, model), cam);
        EXPECT_LT(geodesic_angle(r.pose.R, truth.R) / deg, 0.01);
        EXPECT_LT((r.pose.t - truth.t).norm(), 0.01);
    }
}

TEST(SolvePnP, RejectsBadInput)
{
    const auto model = six_model();
    HeadPose p;
    p.t = Vec3(0, 0, 600);
    auto image = project_all(p, model);
    image.pop_back();
    EXPECT_THROW(solve_pnp(model, image, cam), Error);

    const std::vector<Vec3> three(model.begin(), model.begin() + 3);
    const std::vector<Vec2> three_img(image.begin(), image.begin() + 3);
    EXPECT_THROW(solve_pnp(three, three_img, cam), Error);

    std::vector<Vec3> line;
    for (int k = 0; k < 6; ++k) {
        line.emplace_back(10.0 * k, 5.0 * k, 0.0);
    }
    try {
        solve_pnp(line, project_all(p, line), cam);
        ADD_FAILURE() << "collinear model accepted";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateConfiguration);
    }
}

TEST(ReprojectionRms, ZeroAtExactPose)
{
    const auto model = six_model();
    std::mt19937_64 rng(1);
    const HeadPose p = random_pose(rng);
    EXPECT_LT(reprojection_rms(p, model, project_all(p, model), cam), 1e-9);
}

TEST(ReprojectionRms, PositiveWhenPerturbed)
{
    const auto model = six_model();
    HeadPose p;
    p.t = Vec3(0, 0, 600);
    const auto image = project_all(p, model);
    p.t.z() += 10.0;
    EXPECT_GT(reprojection_rms(p, model, image, cam), 0.0);
}

TEST(ReprojectionRms, MatchesNaiveLoop)
{
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const HeadPose p = random_pose(rng);
        std::vector<Vec3> model;
        std::vector<Vec2> image;
        for (int k = 0; k < 8; ++k) {
            model.emplace_back(60 * u(rng), 60 * u(rng), 40 * u(rng));
            image.emplace_back(320 + 300 * u(rng), 240 + 200 * u(rng));
        }
        double sum = 0.0;
        for (int k = 0; k < 8; ++k) {
            double x = p.t[0], y = p.t[1], z = p.t[2];
            for (int j = 0; j < 3; ++j) {
                x += p.R(0, j) * model[k][j];
                y += p.R(1, j) * model[k][j];
                z += p.R(2, j) * model[k][j];
            }
            const double du = 960.0 * x / z + 320.0 - image[k][0];
            const double dv = 960.0 * y / z + 240.0 - image[k][1];
            sum += du * du + dv * dv;
        }
        const double oracle = std::sqrt(sum / 8.0);
        EXPECT_NEAR(reprojection_rms(p, model, image, cam), oracle, 1e-12 * std::max(1.0, oracle));
    }
}

TEST(Pose, EulerRoundTrip)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double yaw = 170 * deg * u(rng), pitch = 85 * deg * u(rng), roll = 170 * deg * u(rng);
        const Mat3 R = rotation_y(yaw) * rotation_x(pitch) * rotation_z(roll);
        const auto e = to_euler(R);
        EXPECT_NEAR(e.yaw, yaw, 1e-9);
        EXPECT_NEAR(e.pitch, pitch, 1e-9);
        EXPECT_NEAR(e.roll, roll, 1e-9);
    }
}

TEST(Pose, AxisAngleRoundTrip)
{
    std::mt19937_64 rng(6);
    for (int i = 0; i < 500; ++i) {
        const Mat3 R = gazesynth::testing::random_rotation(rng, 3.0);
        EXPECT_TRUE(axis_angle_to_matrix(matrix_to_axis_angle(R)).isApprox(R, 1e-12));
    }
    EXPECT_TRUE(axis_angle_to_matrix(Vec3::Zero()).isIdentity(0.0));
}

TEST(Pose, CheckPoseRejectsReflection)
{
    HeadPose p;
    p.t = Vec3(0, 0, 500);
    EXPECT_NO_THROW(check_pose(p));
    p.R(0, 0) = -1.0;
    EXPECT_THROW(check_pose(p), Error);
    p.R = Mat3::Identity();
    p.t.z() = -1.0;
    EXPECT_THROW(check_pose(p), Error);
}
