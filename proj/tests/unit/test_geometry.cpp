#include "gazesynth/error.hpp"
#include "gazesynth/geometry.hpp"

#include "test_support.hpp"

#include <random>

using namespace gazesynth;

namespace {

const CameraIntrinsics cam(960.0, 960.0, 224.0, 224.0);

} // namespace

TEST(Project, PrincipalAxisPoint)
{
    const Vec2 p = project(cam, Vec3(0, 0, 300));
    EXPECT_DOUBLE_EQ(p.x(), 224.0);
    EXPECT_DOUBLE_EQ(p.y(), 224.0);
}

TEST(Project, OffAxisPoint)
{
    const Vec2 p = project(cam, Vec3(30, 0, 300));
    EXPECT_NEAR(p.x(), 960.0 * 30.0 / 300.0 + 224.0, 1e-12);
    EXPECT_NEAR(p.y(), 224.0, 1e-12);
}

TEST(Project, RejectsPointsNotInFront)
{
    EXPECT_THROW(project(cam, Vec3(1, 2, 0)), Error);
    EXPECT_THROW(project(cam, Vec3(1, 2, -5)), Error);
    try {
        project(cam, Vec3(0, 0, 0));
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::BehindCamera);
    }
}

TEST(CameraIntrinsics, RejectsNonPositiveFocal)
{
    EXPECT_THROW(CameraIntrinsics(0.0, 1.0, 0, 0), Error);
    EXPECT_THROW(CameraIntrinsics(1.0, -1.0, 0, 0), Error);
}

TEST(CameraIntrinsics, InverseIsInverse)
{
    const CameraIntrinsics c(812.5, 790.0, 301.0, 222.5);
    EXPECT_TRUE((c.matrix() * c.inverse()).isIdentity(1e-14));
}

TEST(BackProjectRay, PrincipalPoint)
{
    const Vec3 r = back_project_ray(cam, HomogeneousPixel::affine(224, 224));
    EXPECT_NEAR((r - Vec3(0, 0, 1)).norm(), 0.0, 1e-15);
}

TEST(BackProjectRay, FortyFiveDegrees)
{
    const Vec3 r = back_project_ray(cam, HomogeneousPixel::affine(1184, 224));
    const double h = std::sqrt(0.5);
    EXPECT_NEAR(r.x(), h, 1e-12);
    EXPECT_NEAR(r.y(), 0.0, 1e-12);
    EXPECT_NEAR(r.z(), h, 1e-12);
}

TEST(BackProjectRay, UnitLengthAndReprojects)
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pix(-500.0, 1500.0);
    std::uniform_real_distribution<double> lam(1.0, 5000.0);
    std::uniform_real_distribution<double> w(0.2, 4.0);
    for (int i = 0; i < 2000; ++i) {
        const double s = w(rng);
        const HomogeneousPixel p{pix(rng) * s, pix(rng) * s, s};
        const Vec3 r = back_project_ray(cam, p);
        EXPECT_NEAR(r.norm(), 1.0, 1e-12);
        const Vec2 back = project(cam, lam(rng) * r);
        EXPECT_NEAR((back - p.dehomogenize()).norm(), 0.0, 1e-6);
    }
}

TEST(HomogeneousPixel, DehomogenizeRejectsPointAtInfinity)
{
    EXPECT_THROW((HomogeneousPixel{1, 2, 0}.dehomogenize()), Error);
    const Vec2 p = HomogeneousPixel{4, 6, 2}.dehomogenize();
    EXPECT_DOUBLE_EQ(p.x(), 2.0);
    EXPECT_DOUBLE_EQ(p.y(), 3.0);
}

TEST(CropTransform, CenteredUnitScaleIsIdentity)
{
    // A box covering the whole 448x448 image, centered on its middle.
    const CropTransform t(224, 224, 448, 448, 1.0, 1.0);
    EXPECT_TRUE(t.matrix().isIdentity(1e-15));
}

TEST(CropTransform, CornerAndCenterMapping)
{
    const CropTransform t(300, 200, 200, 200, 1.12, 1.12);
    EXPECT_NEAR(t.patch_w(), 224.0, 1e-12);
    const Vec2 corner = t.patch_to_original(HomogeneousPixel::affine(0, 0)).dehomogenize();
    EXPECT_NEAR(corner.x(), 200.0, 1e-12);
    EXPECT_NEAR(corner.y(), 100.0, 1e-12);
    const Vec2 center = t.patch_to_original(HomogeneousPixel::affine(112, 112)).dehomogenize();
    EXPECT_NEAR(center.x(), 300.0, 1e-12);
    EXPECT_NEAR(center.y(), 200.0, 1e-12);
    const Vec2 far = t.patch_to_original(HomogeneousPixel::affine(224, 224)).dehomogenize();
    EXPECT_NEAR(far.x(), 400.0, 1e-12);
    EXPECT_NEAR(far.y(), 300.0, 1e-12);
}

TEST(CropTransform, ForPatchScale)
{
    const CropTransform t = CropTransform::for_patch(300, 200, 200, 200, 224);
    EXPECT_NEAR(t.scale_x(), 1.12, 1e-15);
    EXPECT_NEAR(t.scale_y(), 1.12, 1e-15);
}

TEST(CropTransform, RejectsDegenerateBoxes)
{
    EXPECT_THROW(CropTransform(0, 0, 0, 10, 1, 1), Error);
    EXPECT_THROW(CropTransform(0, 0, 10, 10, 0, 1), Error);
}

TEST(CropTransform, RoundTrip)
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> c(0.0, 1000.0);
    std::uniform_real_distribution<double> s(10.0, 600.0);
    std::uniform_real_distribution<double> k(0.1, 4.0);
    for (int i = 0; i < 1000; ++i) {
        const CropTransform t(c(rng), c(rng), s(rng), s(rng), k(rng), k(rng));
        const Vec2 p_o(c(rng) - 200.0, c(rng) - 200.0);
        const auto p = t.original_to_patch(HomogeneousPixel::affine(p_o));
        const Vec2 back = patch_to_original(t, p).dehomogenize();
        EXPECT_NEAR((back - p_o).norm(), 0.0, 1e-9);
    }
}
