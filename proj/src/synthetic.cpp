#include "gazesynth/synthetic.hpp"
#include "gazesynth/error.hpp"
#include "gazesynth/renderer.hpp"
#include "gazesynth/sampler.hpp"
#include "gazesynth/viewsynth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

namespace gazesynth {

void SyntheticFaceParams::validate() const
{
    if (!(interocular_mm > 0.0 && head_semi_x > 0.0 && head_semi_y > 0.0 && head_semi_z > 0.0 &&
          checker_period_mm > 0.0 && focal_px > 0.0 && patch_size > 0.0) ||
        image_width <= 0 || image_height <= 0) {
        throw Error(ErrorCode::InvalidArgument, "synthetic face parameters must be positive");
    }
}

namespace {

constexpr double deg = std::numbers::pi / 180.0;

const Color skin_light(0.86, 0.67, 0.52);
const Color skin_dark(0.38, 0.26, 0.20);
const Color marker_color(1.0, 0.0, 1.0);

Color checker(const Vec3& p, double period)
{
    const auto ix = static_cast<long long>(std::floor(p.x() / period));
    const auto iy = static_cast<long long>(std::floor(p.y() / period));
    return ((ix + iy) % 2 == 0) ? skin_light : skin_dark;
}

} // namespace

SyntheticFace generate_synthetic_face(const SyntheticFaceParams& params,
                                      const ReferenceFaceModel& reference)
{
    params.validate();
    std::mt19937_64 rng(params.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);

    // Face-frame geometry: x toward the subject's left eye, y down, z away from the viewer.
    const double scale = params.interocular_mm / reference.eye_distance();
    std::vector<Vec3> face;
    std::vector<Color> colors;
    std::vector<Triangle> triangles;
    std::vector<unsigned char> back;

    const double a = params.head_semi_x * scale;
    const double b = params.head_semi_y * scale;
    const double c = params.head_semi_z * scale;
    const Vec3 center(0.0, -5.0 * scale, c - 8.0 * scale);
    const int lon_steps = 96; // -120..120 degrees about y
    const int lat_steps = 60; // -70..80 degrees
    for (int j = 0; j <= lat_steps; ++j) {
        const double phi = (-70.0 + 150.0 * j / lat_steps) * deg;
        for (int i = 0; i <= lon_steps; ++i) {
            const double theta = (-120.0 + 240.0 * i / lon_steps) * deg;
            const Vec3 p = center + Vec3(a * std::sin(theta) * std::cos(phi), b * std::sin(phi),
                                         -c * std::cos(theta) * std::cos(phi));
            face.push_back(p);
            colors.push_back(checker(p, params.checker_period_mm));
            back.push_back(std::abs(theta) > 90.0 * deg + 1e-9 ? 1 : 0);
        }
    }
    const int row = lon_steps + 1;
    for (int j = 0; j < lat_steps; ++j) {
        for (int i = 0; i < lon_steps; ++i) {
            const int v00 = j * row + i;
            const int v01 = v00 + 1;
            const int v10 = v00 + row;
            const int v11 = v10 + 1;
            triangles.push_back({v00, v01, v11});
            triangles.push_back({v00, v11, v10});
        }
    }

    // Landmarks are extra vertices at the (scaled) reference positions.
    std::map<int, int> landmark_map;
    for (int k = 0; k < landmark::count; ++k) {
        landmark_map[k] = static_cast<int>(face.size());
        face.push_back(scale * reference[k]);
        colors.push_back(checker(face.back(), params.checker_period_mm));
        back.push_back(0);
    }

    // Source pose: nearly frontal, as reconstruction sources usually are.
    HeadPose pose;
    pose.R = yaw_pitch_rotation(15.0 * deg * unit(rng), 12.0 * deg * unit(rng)) *
             rotation_z(8.0 * deg * unit(rng));
    pose.t = Vec3(40.0 * unit(rng), 30.0 * unit(rng), 600.0 + 100.0 * unit(rng));

    std::vector<Vec3> camera_pts;
    camera_pts.reserve(face.size() + 7);
    for (const auto& p : face) {
        camera_pts.push_back(pose.apply(p));
    }
    const Vec3 face_center_cam = pose.t; // reference model origin is the face center

    const PitchYaw gaze_angles{20.0 * deg * unit(rng), 25.0 * deg * unit(rng)};
    const Vec3 gaze_dir = pitch_yaw_to_gaze(gaze_angles);
    const double gaze_distance = 550.0 + 150.0 * unit(rng);
    const Vec3 gaze_target = face_center_cam + gaze_distance * gaze_dir;

    // Marker: an isolated center vertex plus a small octahedron around it.
    const Vec3 marker = face_center_cam + gaze_marker_distance_mm * gaze_dir;
    const int marker_vertex = static_cast<int>(camera_pts.size());
    camera_pts.push_back(marker);
    colors.push_back(marker_color);
    back.push_back(0);
    const double r = 3.0;
    const int oct = static_cast<int>(camera_pts.size());
    const Vec3 axes[6] = {{r, 0, 0}, {-r, 0, 0}, {0, r, 0}, {0, -r, 0}, {0, 0, r}, {0, 0, -r}};
    for (const auto& off : axes) {
        camera_pts.push_back(marker + off);
        colors.push_back(marker_color);
        back.push_back(0);
    }
    const Triangle oct_tris[8] = {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4},
                                  {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}};
    for (const auto& t : oct_tris) {
        triangles.push_back({oct + t[0], oct + t[1], oct + t[2]});
    }

    const CameraIntrinsics camera(params.focal_px, params.focal_px, params.image_width / 2.0,
                                  params.image_height / 2.0);
    std::vector<Vec2> lm2d;
    for (int k = 0; k < landmark::count; ++k) {
        lm2d.push_back(project(camera, camera_pts[static_cast<std::size_t>(landmark_map[k])]));
    }
    Vec2 lo = lm2d[0];
    Vec2 hi = lm2d[0];
    for (const auto& p : lm2d) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const Vec2 box_center = 0.5 * (lo + hi);
    const double box_size = 1.5 * (hi - lo).maxCoeff();
    const CropTransform crop = CropTransform::for_patch(box_center.x(), box_center.y(), box_size,
                                                        box_size, params.patch_size);

    // Patch mesh: exact projection into the crop, d linear in ray distance.
    PatchMesh mesh;
    mesh.colors = colors;
    mesh.triangles = triangles;
    mesh.landmark_map = landmark_map;
    mesh.markers[gaze_marker_name] = marker_vertex;
    std::vector<Vec2> patch_uv;
    for (const auto& p : camera_pts) {
        const auto uv = crop.original_to_patch(HomogeneousPixel::affine(project(camera, p)));
        patch_uv.emplace_back(uv.u, uv.v);
    }
    SixPoints<2> six_uv;
    for (std::size_t i = 0; i < 6; ++i) {
        six_uv[i] = patch_uv[static_cast<std::size_t>(landmark_map[landmark::six[i]])];
    }
    const double alpha = params.interocular_mm / eye_center_distance(six_uv);
    const double beta = face_center_cam.norm() - alpha * params.depth_offset_px;
    for (std::size_t i = 0; i < camera_pts.size(); ++i) {
        const double d = (camera_pts[i].norm() - beta) / alpha;
        mesh.vertices.emplace_back(patch_uv[i].x(), patch_uv[i].y(), d);
    }
    mesh.validate();

    SyntheticFace out;
    out.mesh = std::move(mesh);
    out.truth.pose = pose;
    out.truth.alpha = alpha;
    out.truth.beta = beta;
    out.truth.face_center = face_center_cam;
    out.truth.gaze_target = gaze_target;
    out.truth.metric.vertices = camera_pts;
    out.truth.metric.triangles = triangles;
    out.truth.metric.colors = colors;
    out.truth.metric.landmark_map = landmark_map;
    out.truth.metric.markers = out.mesh.markers;
    out.truth.back_of_head = std::move(back);
    out.truth.marker_vertex = marker_vertex;

    const VirtualCamera source_view{camera, params.image_width, params.image_height};
    Background gray;
    gray.kind = BackgroundKind::Solid;
    gray.rgb = {96, 96, 96};
    out.image = composite_background(rasterize(out.truth.metric, source_view, 1.0), gray);

    out.record.camera = camera;
    out.record.crop = crop;
    out.record.landmarks = LandmarkSet2D(lm2d);
    out.record.gaze_target = gaze_target;
    return out;
}

std::filesystem::path write_synthetic_dataset(const std::filesystem::path& out_dir, int count,
                                              const SyntheticFaceParams& params,
                                              const ReferenceFaceModel& reference)
{
    if (count < 1) {
        throw Error(ErrorCode::InvalidArgument, "synthetic dataset needs at least one face");
    }
    std::filesystem::create_directories(out_dir);
    const auto manifest_path = out_dir / "manifest.jsonl";
    std::ofstream manifest(manifest_path);
    std::ofstream truth_file(out_dir / "ground_truth.jsonl");
    if (!manifest || !truth_file) {
        throw Error(ErrorCode::Io, "cannot write into " + out_dir.string());
    }
    for (int i = 0; i < count; ++i) {
        char id_buf[32];
        std::snprintf(id_buf, sizeof id_buf, "synth%03d", i);
        const std::string id = id_buf;
        SyntheticFaceParams p = params;
        p.seed = derive_seed(params.seed, id);
        SyntheticFace face = generate_synthetic_face(p, reference);
        face.record.id = id;
        face.record.subject = "synthetic";
        face.record.image = out_dir / (id + ".png");
        face.record.mesh = out_dir / (id + ".mesh");
        write_png(face.image, face.record.image);
        write_patch_mesh(face.mesh, face.record.mesh);
        manifest << to_json(face.record, out_dir).dump() << '\n';

        const auto& t = face.truth;
        nlohmann::json R = nlohmann::json::array();
        for (int r = 0; r < 3; ++r) {
            R.push_back({t.pose.R(r, 0), t.pose.R(r, 1), t.pose.R(r, 2)});
        }
        int back_count = 0;
        for (auto f : t.back_of_head) {
            back_count += f;
        }
        truth_file << nlohmann::json{{"id", id},
                                     {"alpha", t.alpha},
                                     {"beta", t.beta},
                                     {"R", R},
                                     {"t", {t.pose.t.x(), t.pose.t.y(), t.pose.t.z()}},
                                     {"face_center",
                                      {t.face_center.x(), t.face_center.y(), t.face_center.z()}},
                                     {"gaze_target",
                                      {t.gaze_target.x(), t.gaze_target.y(), t.gaze_target.z()}},
                                     {"back_of_head_vertices", back_count},
                                     {"interocular_mm", p.interocular_mm}}
                          .dump()
                   << '\n';
    }
    return manifest_path;
}

} // namespace gazesynth
