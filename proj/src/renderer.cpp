#include "gazesynth/renderer.hpp"
#include "gazesynth/error.hpp"
#include "gazesynth/facemodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace gazesynth {

VirtualCamera VirtualCamera::normalized(double focal, int size)
{
    return {CameraIntrinsics(focal, focal, size / 2.0, size / 2.0), size, size};
}

const char* to_string(BackgroundKind kind)
{
    switch (kind) {
    case BackgroundKind::Black: return "black";
    case BackgroundKind::Solid: return "color";
    case BackgroundKind::Scene: return "scene";
    }
    return "unknown";
}

namespace {

struct ScreenVertex
{
    double x, y, z;
};

double edge(const ScreenVertex& a, const ScreenVertex& b, double px, double py)
{
    return (b.x - a.x) * (py - a.y) - (b.y - a.y) * (px - a.x);
}

// For positive-area triangles under `edge`, top edges run in +x with dy == 0 and
// left edges have dy < 0 (y points down).
bool is_top_left(const ScreenVertex& a, const ScreenVertex& b)
{
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    return (dy == 0.0 && dx > 0.0) || dy < 0.0;
}

std::vector<ScreenVertex> project_all(const MetricMesh& mesh, const VirtualCamera& camera)
{
    std::vector<ScreenVertex> out;
    out.reserve(mesh.vertices.size());
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        if (!v.allFinite()) {
            throw Error(ErrorCode::InvalidArgument, "vertex " + std::to_string(i) + " is not finite");
        }
        const Vec2 p = project(camera.intrinsics, v);
        out.push_back({p.x(), p.y(), v.z()});
    }
    return out;
}

/// Calls shade(pixel_index, b0, b1, b2) for every covered pixel center of the triangle;
/// barycentrics are given in the caller's vertex order.
template <typename Shade>
void scan_triangle(ScreenVertex v0, ScreenVertex v1, ScreenVertex v2, int width, int height,
                   Shade&& shade)
{
    double area = edge(v0, v1, v2.x, v2.y);
    bool swapped = false;
    if (area < 0.0) {
        std::swap(v1, v2);
        area = -area;
        swapped = true;
    }
    if (!(area > 0.0)) {
        return;
    }
    const int x_min = std::max(0, static_cast<int>(std::floor(std::min({v0.x, v1.x, v2.x}) - 0.5)));
    const int x_max =
        std::min(width - 1, static_cast<int>(std::ceil(std::max({v0.x, v1.x, v2.x}) - 0.5)));
    const int y_min = std::max(0, static_cast<int>(std::floor(std::min({v0.y, v1.y, v2.y}) - 0.5)));
    const int y_max =
        std::min(height - 1, static_cast<int>(std::ceil(std::max({v0.y, v1.y, v2.y}) - 0.5)));
    const bool tl0 = is_top_left(v1, v2);
    const bool tl1 = is_top_left(v2, v0);
    const bool tl2 = is_top_left(v0, v1);
    for (int y = y_min; y <= y_max; ++y) {
        const double py = y + 0.5;
        for (int x = x_min; x <= x_max; ++x) {
            const double px = x + 0.5;
            const double w0 = edge(v1, v2, px, py);
            const double w1 = edge(v2, v0, px, py);
            const double w2 = edge(v0, v1, px, py);
            const bool inside = (w0 > 0.0 || (w0 == 0.0 && tl0)) &&
                                (w1 > 0.0 || (w1 == 0.0 && tl1)) &&
                                (w2 > 0.0 || (w2 == 0.0 && tl2));
            if (inside) {
                const std::size_t p = static_cast<std::size_t>(y) * width + x;
                if (swapped) {
                    shade(p, w0 / area, w2 / area, w1 / area);
                } else {
                    shade(p, w0 / area, w1 / area, w2 / area);
                }
            }
        }
    }
}

} // namespace

RenderOutput rasterize(const MetricMesh& mesh, const VirtualCamera& camera, double ambient)
{
    if (!(ambient > 0.0) || ambient > 1.0) {
        throw Error(ErrorCode::InvalidArgument, "ambient must lie in (0, 1]");
    }
    const int W = camera.width;
    const int H = camera.height;
    const auto screen = project_all(mesh, camera);
    const std::size_t npix = static_cast<std::size_t>(W) * H;
    std::vector<double> depth(npix, std::numeric_limits<double>::infinity());
    std::vector<Color> color(npix, Color::Zero());

    for (const auto& tri : mesh.triangles) {
        const ScreenVertex& s0 = screen[static_cast<std::size_t>(tri[0])];
        const ScreenVertex& s1 = screen[static_cast<std::size_t>(tri[1])];
        const ScreenVertex& s2 = screen[static_cast<std::size_t>(tri[2])];
        const Color& c0 = mesh.colors[static_cast<std::size_t>(tri[0])];
        const Color& c1 = mesh.colors[static_cast<std::size_t>(tri[1])];
        const Color& c2 = mesh.colors[static_cast<std::size_t>(tri[2])];
        const double iz0 = 1.0 / s0.z;
        const double iz1 = 1.0 / s1.z;
        const double iz2 = 1.0 / s2.z;
        scan_triangle(s0, s1, s2, W, H, [&](std::size_t p, double b0, double b1, double b2) {
            const double inv_z = b0 * iz0 + b1 * iz1 + b2 * iz2;
            const double z = 1.0 / inv_z;
            if (z < depth[p]) {
                depth[p] = z;
                // Offsets from c0 keep constant-color triangles exact.
                const double q1 = b1 * iz1 * z;
                const double q2 = b2 * iz2 * z;
                color[p] = c0 + q1 * (c1 - c0) + q2 * (c2 - c0);
            }
        });
    }

    RenderOutput out;
    out.color = RgbImage(W, H);
    out.coverage = GrayImage(W, H);
    for (std::size_t p = 0; p < npix; ++p) {
        if (std::isfinite(depth[p])) {
            out.coverage.data[p] = 255;
            for (int c = 0; c < 3; ++c) {
                out.color.data[p * 3 + static_cast<std::size_t>(c)] = quantize(ambient * color[p][c]);
            }
        }
    }
    out.depth = std::move(depth);
    return out;
}

GrayImage render_mask(const MetricMesh& mesh, const VirtualCamera& camera)
{
    if (mesh.face_region.size() != mesh.vertices.size()) {
        throw Error(ErrorCode::InvalidArgument, "face region has not been computed for this mesh");
    }
    const auto screen = project_all(mesh, camera);
    GrayImage mask(camera.width, camera.height);
    for (const auto& tri : mesh.triangles) {
        if (!mesh.face_region[static_cast<std::size_t>(tri[0])] ||
            !mesh.face_region[static_cast<std::size_t>(tri[1])] ||
            !mesh.face_region[static_cast<std::size_t>(tri[2])]) {
            continue;
        }
        scan_triangle(screen[static_cast<std::size_t>(tri[0])],
                      screen[static_cast<std::size_t>(tri[1])],
                      screen[static_cast<std::size_t>(tri[2])], camera.width, camera.height,
                      [&](std::size_t p, double, double, double) { mask.data[p] = 255; });
    }
    return mask;
}

RgbImage make_background(const Background& background, int width, int height)
{
    switch (background.kind) {
    case BackgroundKind::Black:
        return RgbImage(width, height, 0);
    case BackgroundKind::Solid: {
        RgbImage img(width, height);
        for (std::size_t p = 0; p < img.data.size(); p += 3) {
            img.data[p] = background.rgb[0];
            img.data[p + 1] = background.rgb[1];
            img.data[p + 2] = background.rgb[2];
        }
        return img;
    }
    case BackgroundKind::Scene: {
        const RgbImage scene = read_rgb(background.scene);
        return gaussian_blur(resize_bilinear(scene, width, height), background.blur_sigma);
    }
    }
    throw Error(ErrorCode::InvalidArgument, "unknown background kind");
}

RgbImage composite_background(const RenderOutput& fg, const RgbImage& background)
{
    if (background.width != fg.color.width || background.height != fg.color.height) {
        throw Error(ErrorCode::InvalidArgument, "background size differs from the render");
    }
    RgbImage out = background;
    const std::size_t npix = fg.coverage.data.size();
    for (std::size_t p = 0; p < npix; ++p) {
        if (fg.coverage.data[p] != 0) {
            for (std::size_t c = 0; c < 3; ++c) {
                out.data[p * 3 + c] = fg.color.data[p * 3 + c];
            }
        }
    }
    return out;
}

RgbImage composite_background(const RenderOutput& fg, const Background& background)
{
    return composite_background(fg, make_background(background, fg.color.width, fg.color.height));
}

namespace {

bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d)
{
    auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return (q.x() - p.x()) * (r.y() - p.y()) - (q.y() - p.y()) * (r.x() - p.x());
    };
    auto on_segment = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        return std::min(p.x(), q.x()) <= r.x() && r.x() <= std::max(p.x(), q.x()) &&
               std::min(p.y(), q.y()) <= r.y() && r.y() <= std::max(p.y(), q.y());
    };
    const double o1 = orient(a, b, c);
    const double o2 = orient(a, b, d);
    const double o3 = orient(c, d, a);
    const double o4 = orient(c, d, b);
    if (((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0))) {
        return true;
    }
    return (o1 == 0 && on_segment(a, b, c)) || (o2 == 0 && on_segment(a, b, d)) ||
           (o3 == 0 && on_segment(c, d, a)) || (o4 == 0 && on_segment(c, d, b));
}

bool inside_polygon(const std::vector<Vec2>& poly, const Vec2& p)
{
    bool inside = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Vec2& a = poly[i];
        const Vec2& b = poly[j];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (p.x() < x) {
                inside = !inside;
            }
        }
    }
    return inside;
}

} // namespace

std::vector<unsigned char> face_region_vertices(const PatchMesh& mesh)
{
    auto uv_of = [&](int semantic) {
        const auto it = mesh.landmark_map.find(semantic);
        if (it == mesh.landmark_map.end()) {
            throw Error(ErrorCode::MalformedLandmarks,
                        "outline landmark " + std::to_string(semantic) + " is not mapped");
        }
        const Vec3& v = mesh.vertices.at(static_cast<std::size_t>(it->second));
        return Vec2(v.x(), v.y());
    };
    std::vector<Vec2> outline;
    for (int i = 0; i <= 16; ++i) {
        outline.push_back(uv_of(i));
    }
    for (int i = 26; i >= 17; --i) {
        outline.push_back(uv_of(i));
    }
    const std::size_t n = outline.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // Skip edges sharing a vertex.
            if (j == i + 1 || (i == 0 && j == n - 1)) {
                continue;
            }
            if (segments_cross(outline[i], outline[(i + 1) % n], outline[j], outline[(j + 1) % n])) {
                throw Error(ErrorCode::SelfIntersectingOutline,
                            "outline edges " + std::to_string(i) + " and " + std::to_string(j) +
                                " cross");
            }
        }
    }
    const double chin_depth =
        mesh.vertices.at(static_cast<std::size_t>(mesh.landmark_map.at(landmark::chin))).z();
    std::vector<unsigned char> keep(mesh.vertices.size(), 0);
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const Vec3& v = mesh.vertices[i];
        keep[i] = (v.z() <= chin_depth && inside_polygon(outline, Vec2(v.x(), v.y()))) ? 1 : 0;
    }
    return keep;
}

namespace {

template <int Channels>
Image8<Channels> box_downscale(const Image8<Channels>& image)
{
    if (image.width % 2 != 0 || image.height % 2 != 0 || image.width == 0 || image.height == 0) {
        throw Error(ErrorCode::InvalidArgument, "downscale needs even, non-zero dimensions");
    }
    Image8<Channels> out(image.width / 2, image.height / 2);
    for (int y = 0; y < out.height; ++y) {
        for (int x = 0; x < out.width; ++x) {
            for (int c = 0; c < Channels; ++c) {
                const int sum = image.at(2 * x, 2 * y, c) + image.at(2 * x + 1, 2 * y, c) +
                                image.at(2 * x, 2 * y + 1, c) + image.at(2 * x + 1, 2 * y + 1, c);
                out.at(x, y, c) = static_cast<std::uint8_t>((sum + 2) / 4);
            }
        }
    }
    return out;
}

} // namespace

RgbImage downscale(const RgbImage& image)
{
    return box_downscale(image);
}

GrayImage downscale(const GrayImage& image)
{
    return box_downscale(image);
}

GrayImage downscale_mask(const GrayImage& mask)
{
    GrayImage out = box_downscale(mask);
    for (auto& v : out.data) {
        v = v >= 128 ? 255 : 0;
    }
    return out;
}

} // namespace gazesynth
