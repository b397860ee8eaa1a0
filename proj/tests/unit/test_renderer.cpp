#include "gazesynth/error.hpp"
#include "gazesynth/image.hpp"
#include "gazesynth/renderer.hpp"
#include "gazesynth/synthetic.hpp"

#include "test_support.hpp"

#include <limits>
#include <random>

using namespace gazesynth;
using gazesynth::testing::TempDir;

namespace {

const VirtualCamera small_cam{CameraIntrinsics(64.0, 64.0, 32.0, 32.0), 64, 64};

/// Camera-frame point that projects to pixel (u, v) at depth z under `small_cam`.
Vec3 at_pixel(double u, double v, double z)
{
    return {(u - 32.0) * z / 64.0, (v - 32.0) * z / 64.0, z};
}

void add_triangle(MetricMesh& m, const Vec3& a, const Vec3& b, const Vec3& c, const Color& color)
{
    const int base = static_cast<int>(m.vertices.size());
    for (const auto& v : {a, b, c}) {
        m.vertices.push_back(v);
        m.colors.push_back(color);
    }
    m.triangles.push_back({base, base + 1, base + 2});
}

std::array<std::uint8_t, 3> quantized(const Color& c, double ambient = 1.0)
{
    return {quantize(ambient * c[0]), quantize(ambient * c[1]), quantize(ambient * c[2])};
}

std::size_t covered(const GrayImage& g)
{
    return static_cast<std::size_t>(std::count(g.data.begin(), g.data.end(), 255));
}

} // namespace

TEST(Rasterize, ConstantColorTriangle)
{
    MetricMesh m;
    const Color c(0.8, 0.3, 0.1);
    add_triangle(m, at_pixel(5, 5, 400), at_pixel(60, 10, 450), at_pixel(20, 58, 500), c);
    const auto out = rasterize(m, small_cam, 1.0);
    const auto q = quantized(c);
    ASSERT_GT(covered(out.coverage), 500u);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            if (out.coverage.at(x, y)) {
                for (int ch = 0; ch < 3; ++ch) {
                    EXPECT_EQ(out.color.at(x, y, ch), q[ch]);
                }
                EXPECT_TRUE(std::isfinite(out.depth[y * 64 + x]));
            } else {
                EXPECT_EQ(out.color.at(x, y, 0), 0);
                EXPECT_TRUE(std::isinf(out.depth[y * 64 + x]));
            }
        }
    }
}

TEST(Rasterize, HalfAmbient)
{
    MetricMesh m;
    const Color c(0.8, 0.3, 0.1);
    add_triangle(m, at_pixel(5, 5, 400), at_pixel(60, 10, 450), at_pixel(20, 58, 500), c);
    const auto out = rasterize(m, small_cam, 0.5);
    const auto q = quantized(c, 0.5);
    for (std::size_t p = 0; p < out.coverage.data.size(); ++p) {
        if (out.coverage.data[p]) {
            for (std::size_t ch = 0; ch < 3; ++ch) {
                EXPECT_EQ(out.color.data[p * 3 + ch], q[ch]);
            }
        }
    }
}

TEST(Rasterize, NearerTriangleWins)
{
    for (bool near_first : {false, true}) {
        MetricMesh m;
        const Color far_c(1, 0, 0), near_c(0, 0, 1);
        auto far_tri = [&] { add_triangle(m, at_pixel(0, 0, 500), at_pixel(50, 0, 500), at_pixel(0, 50, 500), far_c); };
        auto near_tri = [&] { add_triangle(m, at_pixel(10, 10, 400), at_pixel(60, 10, 400), at_pixel(10, 60, 400), near_c); };
        if (near_first) {
            near_tri();
            far_tri();
        } else {
            far_tri();
            near_tri();
        }
        const auto out = rasterize(m, small_cam, 1.0);
        EXPECT_EQ(out.color.at(20, 20, 2), 255);
        EXPECT_EQ(out.color.at(20, 20, 0), 0);
        EXPECT_NEAR(out.depth[20 * 64 + 20], 400.0, 1e-9);
        EXPECT_EQ(out.color.at(3, 3, 0), 255);
    }
}

TEST(Rasterize, SharedEdgeCoveredExactlyOnce)
{
    // Square split along a diagonal that passes through pixel centers.
    MetricMesh a, b;
    add_triangle(a, at_pixel(8, 8, 300), at_pixel(24, 8, 300), at_pixel(24, 24, 300), Color(1, 1, 1));
    add_triangle(b, at_pixel(8, 8, 300), at_pixel(24, 24, 300), at_pixel(8, 24, 300), Color(1, 1, 1));
    const auto ra = rasterize(a, small_cam, 1.0);
    const auto rb = rasterize(b, small_cam, 1.0);
    std::size_t both = 0, either = 0;
    for (std::size_t p = 0; p < ra.coverage.data.size(); ++p) {
        both += ra.coverage.data[p] && rb.coverage.data[p];
        either += ra.coverage.data[p] || rb.coverage.data[p];
    }
    EXPECT_EQ(both, 0u);
    EXPECT_EQ(either, 256u);
}

TEST(Rasterize, WindingDoesNotMatter)
{
    MetricMesh cw, ccw;
    const Vec3 p0 = at_pixel(3, 4, 350), p1 = at_pixel(50, 12, 420), p2 = at_pixel(17, 55, 380);
    add_triangle(cw, p0, p1, p2, Color(0.2, 0.6, 0.9));
    add_triangle(ccw, p0, p2, p1, Color(0.2, 0.6, 0.9));
    const auto a = rasterize(cw, small_cam, 1.0);
    const auto b = rasterize(ccw, small_cam, 1.0);
    EXPECT_EQ(a.color, b.color);
    EXPECT_EQ(a.coverage, b.coverage);
}

TEST(Rasterize, PerspectiveCorrectInterpolation)
{
    // A slanted triangle with one red and two black vertices: the color at a pixel
    // equals the red barycentric weight of the 3D ray hit point.
    MetricMesh m;
    const Vec3 a = at_pixel(4, 4, 200), b = at_pixel(60, 8, 900), c = at_pixel(10, 60, 500);
    m.vertices = {a, b, c};
    m.colors = {Color(1, 0, 0), Color(0, 0, 0), Color(0, 0, 0)};
    m.triangles = {{0, 1, 2}};
    const auto out = rasterize(m, small_cam, 1.0);
    const Vec3 n = (b - a).cross(c - a);
    for (int y = 0; y < 64; y += 3) {
        for (int x = 0; x < 64; x += 3) {
            if (!out.coverage.at(x, y)) {
                continue;
            }
            const Vec3 ray((x + 0.5 - 32.0) / 64.0, (y + 0.5 - 32.0) / 64.0, 1.0);
            const Vec3 hit = ray * (n.dot(a) / n.dot(ray));
            const double wa = (b - hit).cross(c - hit).norm() / n.norm();
            EXPECT_NEAR(out.color.at(x, y, 0), 255.0 * wa, 0.5 + 1e-9);
            EXPECT_NEAR(out.depth[y * 64 + x], hit.z(), 1e-9 * hit.z());
        }
    }
}

TEST(Rasterize, EmptyMeshAndErrors)
{
    const auto out = rasterize(MetricMesh{}, small_cam, 1.0);
    EXPECT_EQ(covered(out.coverage), 0u);

    MetricMesh m;
    add_triangle(m, at_pixel(5, 5, 400), at_pixel(60, 10, 450), at_pixel(20, 58, 500), Color(1, 1, 1));
    EXPECT_THROW(rasterize(m, small_cam, 0.0), Error);
    EXPECT_THROW(rasterize(m, small_cam, 1.5), Error);
    m.vertices[1].x() = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(rasterize(m, small_cam, 1.0), Error);
    m.vertices[1] = Vec3(0, 0, -10);
    EXPECT_THROW(rasterize(m, small_cam, 1.0), Error);
}

TEST(Rasterize, LightLinearity)
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> px(-10.0, 74.0), z(300.0, 800.0), col(0.0, 1.0);
    MetricMesh m;
    for (int t = 0; t < 20; ++t) {
        const int base = static_cast<int>(m.vertices.size());
        for (int k = 0; k < 3; ++k) {
            m.vertices.push_back(at_pixel(px(rng), px(rng), z(rng)));
            m.colors.emplace_back(col(rng), col(rng), col(rng));
        }
        m.triangles.push_back({base, base + 1, base + 2});
    }
    const auto full = rasterize(m, small_cam, 1.0);
    for (double a : {0.25, 0.4, 0.5, 0.75}) {
        const auto dim = rasterize(m, small_cam, a);
        EXPECT_EQ(dim.coverage, full.coverage);
        for (std::size_t i = 0; i < full.color.data.size(); ++i) {
            EXPECT_LE(std::abs(dim.color.data[i] - a * full.color.data[i]), 1.0);
        }
    }
}

TEST(Composite, EmptyCoverageShowsBackground)
{
    const auto out = rasterize(MetricMesh{}, small_cam, 1.0);
    Background bg;
    bg.kind = BackgroundKind::Solid;
    bg.rgb = {255, 0, 0};
    const auto img = composite_background(out, bg);
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            EXPECT_EQ(img.at(x, y, 0), 255);
            EXPECT_EQ(img.at(x, y, 1), 0);
        }
    }
}

TEST(Composite, FullCoverageIgnoresBackground)
{
    MetricMesh m;
    add_triangle(m, at_pixel(-200, -200, 300), at_pixel(400, -200, 300), at_pixel(-200, 400, 300), Color(0.1, 0.9, 0.4));
    const auto out = rasterize(m, small_cam, 1.0);
    ASSERT_EQ(covered(out.coverage), 64u * 64u);
    Background bg;
    bg.kind = BackgroundKind::Solid;
    bg.rgb = {255, 0, 0};
    EXPECT_EQ(composite_background(out, bg), out.color);
}

TEST(Composite, SceneWithoutBlurIsCopied)
{
    TempDir dir;
    RgbImage scene(64, 64);
    std::mt19937_64 rng(1);
    for (auto& v : scene.data) {
        v = static_cast<std::uint8_t>(rng() & 0xff);
    }
    write_png(scene, dir / "scene.png");
    Background bg;
    bg.kind = BackgroundKind::Scene;
    bg.scene = dir / "scene.png";
    bg.blur_sigma = 0.0;
    EXPECT_EQ(make_background(bg, 64, 64), scene);
    bg.scene = dir / "missing.png";
    EXPECT_THROW(make_background(bg, 64, 64), Error);
}

TEST(FaceRegion, NoseTipKeptAndDeepVertexRemoved)
{
    const auto face = generate_synthetic_face({}, ReferenceFaceModel::generic());
    PatchMesh mesh = face.mesh;
    const int nose = mesh.landmark_map.at(landmark::nose_tip);
    const double d_chin = mesh.vertices[mesh.landmark_map.at(landmark::chin)].z();
    Vec3 deep = mesh.vertices[nose];
    deep.z() = d_chin + 1.0;
    mesh.vertices.push_back(deep);
    mesh.colors.emplace_back(1, 1, 1);
    const auto flags = face_region_vertices(mesh);
    EXPECT_EQ(flags[nose], 1);
    EXPECT_EQ(flags.back(), 0);
}

TEST(FaceRegion, BackOfHeadRemoved)
{
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SyntheticFaceParams p;
        p.seed = seed;
        const auto face = generate_synthetic_face(p, ReferenceFaceModel::generic());
        const auto flags = face_region_vertices(face.mesh);
        std::size_t back = 0, back_kept = 0;
        for (std::size_t i = 0; i < flags.size(); ++i) {
            if (face.truth.back_of_head[i]) {
                ++back;
                back_kept += flags[i];
            }
        }
        EXPECT_GT(back, 0u);
        EXPECT_EQ(back_kept, 0u);
    }
}

TEST(FaceRegion, SelfIntersectingOutlineThrows)
{
    auto face = generate_synthetic_face({}, ReferenceFaceModel::generic());
    auto& v = face.mesh.vertices;
    std::swap(v[face.mesh.landmark_map.at(3)], v[face.mesh.landmark_map.at(13)]);
    try {
        face_region_vertices(face.mesh);
        ADD_FAILURE() << "expected SelfIntersectingOutline";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::SelfIntersectingOutline);
    }
}

TEST(RenderMask, AllAndNone)
{
    MetricMesh m;
    add_triangle(m, at_pixel(5, 5, 400), at_pixel(60, 10, 450), at_pixel(20, 58, 500), Color(1, 1, 1));
    add_triangle(m, at_pixel(40, 2, 380), at_pixel(62, 40, 420), at_pixel(30, 30, 300), Color(1, 1, 1));
    const auto out = rasterize(m, small_cam, 1.0);
    m.face_region.assign(m.vertices.size(), 1);
    EXPECT_EQ(render_mask(m, small_cam), out.coverage);
    m.face_region.assign(m.vertices.size(), 0);
    EXPECT_EQ(covered(render_mask(m, small_cam)), 0u);
    m.face_region.clear();
    EXPECT_THROW(render_mask(m, small_cam), Error);
}

TEST(RenderMask, SubsetOfCoverage)
{
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> px(-10.0, 74.0), z(300.0, 800.0);
    std::bernoulli_distribution keep(0.6);
    for (int trial = 0; trial < 50; ++trial) {
        MetricMesh m;
        for (int t = 0; t < 15; ++t) {
            add_triangle(m, at_pixel(px(rng), px(rng), z(rng)), at_pixel(px(rng), px(rng), z(rng)),
                         at_pixel(px(rng), px(rng), z(rng)), Color(1, 1, 1));
        }
        for (std::size_t i = 0; i < m.vertices.size(); ++i) {
            m.face_region.push_back(keep(rng) ? 1 : 0);
        }
        const auto cov = rasterize(m, small_cam, 1.0).coverage;
        const auto mask = render_mask(m, small_cam);
        for (std::size_t p = 0; p < cov.data.size(); ++p) {
            EXPECT_TRUE(mask.data[p] == 0 || cov.data[p] == 255);
        }
    }
}

TEST(Downscale, ConstantImage)
{
    RgbImage img(8, 6, 77);
    const auto small = downscale(img);
    EXPECT_EQ(small.width, 4);
    EXPECT_EQ(small.height, 3);
    EXPECT_EQ(small, RgbImage(4, 3, 77));
}

TEST(Downscale, RoundHalfUp)
{
    GrayImage img(2, 2);
    img.data = {0, 0, 255, 255};
    EXPECT_EQ(downscale(img).data[0], 128);
}

TEST(Downscale, CheckerboardBecomesMidGray)
{
    GrayImage img(16, 16);
    for (int y = 0; y < 16; ++y) {
        for (int x = 0; x < 16; ++x) {
            img.at(x, y) = ((x + y) % 2) ? 255 : 0;
        }
    }
    EXPECT_EQ(downscale(img), GrayImage(8, 8, 128));
    EXPECT_THROW(downscale(GrayImage(3, 4)), Error);
}

TEST(Downscale, MaskRebinarized)
{
    GrayImage m(4, 2);
    m.data = {255, 0, 255, 0,
              0, 0, 255, 0};
    const auto s = downscale_mask(m);
    EXPECT_EQ(s.data[0], 0);   // one of four
    EXPECT_EQ(s.data[1], 255); // two of four
}

TEST(VirtualCamera, Defaults)
{
    const auto cam = VirtualCamera::normalized();
    EXPECT_EQ(cam.width, 448);
    EXPECT_DOUBLE_EQ(cam.intrinsics.fx(), 960.0);
    EXPECT_DOUBLE_EQ(cam.intrinsics.cx(), 224.0);
    EXPECT_STREQ(to_string(BackgroundKind::Solid), "color");
}
