#pragma once

#include "gazesynth/geometry.hpp"
#include "gazesynth/image.hpp"
#include "gazesynth/mesh.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

namespace gazesynth {

/// Normalized rendering camera: principal point at the image center.
struct VirtualCamera
{
    CameraIntrinsics intrinsics{960.0, 960.0, 224.0, 224.0};
    int width = 448;
    int height = 448;

    static VirtualCamera normalized(double focal = 960.0, int size = 448);
};

enum class BackgroundKind { Black, Solid, Scene };

const char* to_string(BackgroundKind kind);

struct Background
{
    BackgroundKind kind = BackgroundKind::Black;
    std::array<std::uint8_t, 3> rgb{0, 0, 0};   ///< Solid
    std::filesystem::path scene;                ///< Scene
    double blur_sigma = 4.0;                    ///< Scene, pixels at render resolution
};

struct RenderConfig
{
    Background background;
    double ambient = 1.0; ///< (0, 1]
};

struct RenderOutput
{
    RgbImage color;        ///< face pixels; uncovered pixels are black
    GrayImage coverage;    ///< 255 where any triangle covers the pixel center
    std::vector<double> depth; ///< camera z (mm), +inf where uncovered
    GrayImage face_mask;   ///< 255 where face-region triangles cover; empty if not rendered
};

/**
 * Z-buffered rasterization with pixel centers at (x + 0.5, y + 0.5), a top-left
 * fill rule, no back-face culling and perspective-correct color interpolation.
 * Output color = ambient * interpolated vertex color, quantized once (round half up).
 * An empty mesh yields empty coverage. Throws InvalidArgument for non-finite
 * vertices and BehindCamera for z <= 0.
 */
RenderOutput rasterize(const MetricMesh& mesh, const VirtualCamera& camera, double ambient);

/// Background image of the given size; a scene is resized then blurred. Throws Io naming the path.
RgbImage make_background(const Background& background, int width, int height);

/// Covered pixels keep the rendered color, the rest take the background (hard compositing).
RgbImage composite_background(const RenderOutput& fg, const RgbImage& background);
RgbImage composite_background(const RenderOutput& fg, const Background& background);

/**
 * Face-region vertex flags. A vertex is kept when its (u, v) lies inside the
 * polygon jawline 0..16 followed by brows 26..17, and its d is not larger than
 * that of the chin landmark. Throws SelfIntersectingOutline when the polygon
 * crosses itself.
 */
std::vector<unsigned char> face_region_vertices(const PatchMesh& mesh);

/// Binary mask (0/255) of triangles whose three vertices are in `mesh.face_region`.
GrayImage render_mask(const MetricMesh& mesh, const VirtualCamera& camera);

/// 2x2 box filter, round half up. Throws InvalidArgument on odd dimensions.
RgbImage downscale(const RgbImage& image);
GrayImage downscale(const GrayImage& image);
/// Box-filtered mask re-binarized at 0.5 (two of four covered pixels count as covered).
GrayImage downscale_mask(const GrayImage& mask);

} // namespace gazesynth
