#include "gazesynth/facemodel.hpp"

#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace gazesynth {

LandmarkSet2D::LandmarkSet2D(std::vector<Vec2> points) : points_(std::move(points))
{
    if (points_.size() != landmark::count) {
        throw Error(ErrorCode::MalformedLandmarks,
                    "expected 68 landmarks, got " + std::to_string(points_.size()));
    }
    for (const auto& p : points_) {
        if (!p.allFinite()) {
            throw Error(ErrorCode::MalformedLandmarks, "non-finite landmark coordinate");
        }
    }
}

SixPoints<2> select_six(std::span<const Vec2> landmarks)
{
    if (landmarks.size() != landmark::count) {
        throw Error(ErrorCode::MalformedLandmarks,
                    "expected 68 landmarks, got " + std::to_string(landmarks.size()));
    }
    SixPoints<2> out;
    for (std::size_t i = 0; i < 6; ++i) {
        out[i] = landmarks[static_cast<std::size_t>(landmark::six[i])];
    }
    return out;
}

SixPoints<2> select_six(const LandmarkSet2D& landmarks)
{
    return select_six(std::span<const Vec2>(landmarks.points()));
}

std::array<int, 6> select_six(const std::map<int, int>& landmark_map)
{
    std::array<int, 6> ids{};
    for (std::size_t i = 0; i < 6; ++i) {
        const auto it = landmark_map.find(landmark::six[i]);
        if (it == landmark_map.end()) {
            throw Error(ErrorCode::MalformedLandmarks,
                        "landmark " + std::to_string(landmark::six[i]) + " is not mapped");
        }
        ids[i] = it->second;
    }
    return ids;
}

ReferenceFaceModel::ReferenceFaceModel(std::vector<Vec3> points) : points_(std::move(points))
{
    if (points_.size() != landmark::count) {
        throw Error(ErrorCode::MalformedLandmarks,
                    "reference model needs 68 points, got " + std::to_string(points_.size()));
    }
    const Vec3 center = face_center(six());
    for (auto& p : points_) {
        p -= center;
    }
    eye_distance_ = eye_center_distance(six());
}

SixPoints<3> ReferenceFaceModel::six() const
{
    SixPoints<3> out;
    for (std::size_t i = 0; i < 6; ++i) {
        out[i] = points_[static_cast<std::size_t>(landmark::six[i])];
    }
    return out;
}

ReferenceFaceModel ReferenceFaceModel::generic(double interocular_mm)
{
    if (!(interocular_mm > 0.0)) {
        throw Error(ErrorCode::InvalidArgument, "interocular distance must be positive");
    }
    constexpr double pi = std::numbers::pi;
    std::vector<Vec3> p(landmark::count);

    // Template proportions for a 60 mm eye-center distance; scaled at the end.
    // Jawline 0-16: temple to temple through the chin.
    for (int i = 0; i <= 16; ++i) {
        const double theta = pi * i / 16.0;
        const double s = std::sin(theta);
        p[i] = Vec3(-68.0 * std::cos(theta), -5.0 + 95.0 * s, 10.0 + 75.0 * (1.0 - s));
    }
    // Brows 17-21 (right) and 22-26 (left, mirrored).
    const double brow_x[5] = {-58.0, -47.0, -36.0, -25.0, -14.0};
    const double brow_y[5] = {-22.0, -29.0, -31.0, -29.0, -25.0};
    const double brow_z[5] = {16.0, 6.0, 0.0, -4.0, -6.0};
    for (int i = 0; i < 5; ++i) {
        p[17 + i] = Vec3(brow_x[i], brow_y[i], brow_z[i]);
        p[26 - i] = Vec3(-brow_x[i], brow_y[i], brow_z[i]);
    }
    // Nose bridge 27-30 down to the tip, nose base 31-35.
    for (int i = 0; i < 4; ++i) {
        p[27 + i] = Vec3(0.0, -12.0 + 11.0 * i, -8.0 - 8.0 * i);
    }
    const double base_x[5] = {-15.0, -8.0, 0.0, 8.0, 15.0};
    const double base_z[5] = {-10.0, -16.0, -20.0, -16.0, -10.0};
    for (int i = 0; i < 5; ++i) {
        p[31 + i] = Vec3(base_x[i], 38.0 - (i == 2 ? 2.0 : 0.0), base_z[i]);
    }
    // Eyes: 36 outer, 37-38 upper lid, 39 inner, 40-41 lower lid; left eye mirrored as 42-47.
    const Vec3 right_eye[6] = {{-45.0, 0.0, 12.0}, {-37.0, -5.0, 4.0}, {-23.0, -5.0, 1.0},
                               {-15.0, 0.0, 2.0},  {-23.0, 4.0, 3.0},  {-37.0, 4.0, 6.0}};
    for (int i = 0; i < 6; ++i) {
        p[36 + i] = right_eye[i];
    }
    // Mirror with the same winding: 42 inner, 43-44 upper, 45 outer, 46-47 lower.
    const int left_order[6] = {3, 2, 1, 0, 5, 4};
    for (int i = 0; i < 6; ++i) {
        const Vec3& q = right_eye[left_order[i]];
        p[42 + i] = Vec3(-q.x(), q.y(), q.z());
    }
    // Outer lips 48-59, inner lips 60-67.
    const Vec3 outer[12] = {{-25.0, 62.0, 6.0},  {-16.0, 55.0, -3.0}, {-6.0, 52.0, -8.0},
                            {0.0, 53.0, -9.0},   {6.0, 52.0, -8.0},   {16.0, 55.0, -3.0},
                            {25.0, 62.0, 6.0},   {16.0, 70.0, -2.0},  {7.0, 73.0, -6.0},
                            {0.0, 74.0, -7.0},   {-7.0, 73.0, -6.0},  {-16.0, 70.0, -2.0}};
    for (int i = 0; i < 12; ++i) {
        p[48 + i] = outer[i];
    }
    const Vec3 inner[8] = {{-21.0, 62.0, 4.0}, {-8.0, 59.0, -5.0}, {0.0, 60.0, -6.0},
                           {8.0, 59.0, -5.0},  {21.0, 62.0, 4.0},  {8.0, 65.0, -5.0},
                           {0.0, 66.0, -6.0},  {-8.0, 65.0, -5.0}};
    for (int i = 0; i < 8; ++i) {
        p[60 + i] = inner[i];
    }

    const double scale = interocular_mm / 60.0;
    for (auto& q : p) {
        q *= scale;
    }
    return ReferenceFaceModel(std::move(p));
}

ReferenceFaceModel ReferenceFaceModel::load(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open reference model " + path.string());
    }
    std::string line;
    int line_no = 0;
    bool have_header = false;
    int count = 0;
    double stored_lr = 0.0;
    std::vector<Vec3> points;
    std::vector<bool> seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::istringstream ls(line);
        if (!have_header) {
            if (!(ls >> count >> stored_lr) || count != landmark::count) {
                throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) +
                                                  ": expected header '68 <l_r>'");
            }
            points.assign(static_cast<std::size_t>(count), Vec3::Zero());
            seen.assign(static_cast<std::size_t>(count), false);
            have_header = true;
            continue;
        }
        int index = -1;
        double x, y, z;
        if (!(ls >> index >> x >> y >> z) || index < 0 || index >= count ||
            seen[static_cast<std::size_t>(index)]) {
            throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) +
                                              ": expected 'index x y z' with a new index");
        }
        points[static_cast<std::size_t>(index)] = Vec3(x, y, z);
        seen[static_cast<std::size_t>(index)] = true;
    }
    if (!have_header) {
        throw Error(ErrorCode::Parse, path.string() + ": missing header");
    }
    for (int i = 0; i < count; ++i) {
        if (!seen[static_cast<std::size_t>(i)]) {
            throw Error(ErrorCode::Parse, path.string() + ": missing point " + std::to_string(i));
        }
    }
    ReferenceFaceModel model(std::move(points));
    if (std::abs(model.eye_distance() - stored_lr) > 1e-6) {
        throw Error(ErrorCode::Parse, path.string() + ": header l_r " + std::to_string(stored_lr) +
                                          " disagrees with points (" +
                                          std::to_string(model.eye_distance()) + ")");
    }
    return model;
}

void ReferenceFaceModel::save(const std::filesystem::path& path) const
{
    std::ofstream out(path);
    if (!out) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    char buf[160];
    out << "# 68-point reference face, mm, origin at the face center\n";
    std::snprintf(buf, sizeof buf, "%d %.17g\n", landmark::count, eye_distance_);
    out << buf;
    for (int i = 0; i < landmark::count; ++i) {
        const Vec3& q = points_[static_cast<std::size_t>(i)];
        std::snprintf(buf, sizeof buf, "%d %.17g %.17g %.17g\n", i, q.x(), q.y(), q.z());
        out << buf;
    }
}

std::filesystem::path shipped_reference_model_path()
{
    return std::filesystem::path(GAZESYNTH_DATA_DIR) / "reference_face_68.txt";
}

} // namespace gazesynth
