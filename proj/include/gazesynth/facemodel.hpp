#pragma once

#include "gazesynth/error.hpp"
#include "gazesynth/geometry.hpp"

#include <array>
#include <cmath>
#include <filesystem>
#include <map>
#include <span>
#include <vector>

namespace gazesynth {

/// Indices in the 68-point landmark scheme.
namespace landmark {
inline constexpr int count = 68;
inline constexpr int chin = 8;
inline constexpr int right_eye_outer = 36;
inline constexpr int right_eye_inner = 39;
inline constexpr int left_eye_inner = 42;
inline constexpr int left_eye_outer = 45;
inline constexpr int mouth_right = 48;
inline constexpr int mouth_left = 54;
inline constexpr int nose_tip = 30;
/// Fixed order used by every six-point routine: eye corners, then mouth corners.
inline constexpr std::array<int, 6> six = {right_eye_outer, right_eye_inner, left_eye_inner,
                                           left_eye_outer,  mouth_right,     mouth_left};
} // namespace landmark

template <int Dim>
using SixPoints = std::array<Eigen::Matrix<double, Dim, 1>, 6>;

/// Distance between the midpoints of the right-eye (first two) and left-eye (next two) corners.
/// Throws DegenerateLandmarks when the eye centers coincide.
template <int Dim>
double eye_center_distance(const SixPoints<Dim>& six)
{
    const auto right = 0.5 * (six[0] + six[1]);
    const auto left = 0.5 * (six[2] + six[3]);
    const double dist = (left - right).norm();
    if (!(dist >= 1e-6)) {
        throw Error(ErrorCode::DegenerateLandmarks, "eye centers coincide");
    }
    return dist;
}

inline Vec3 face_center(const SixPoints<3>& six)
{
    Vec3 sum = Vec3::Zero();
    for (const auto& p : six) {
        sum += p;
    }
    return sum / 6.0;
}

/// 68 detected landmarks in original-image pixels.
class LandmarkSet2D
{
public:
    /// Throws MalformedLandmarks unless exactly 68 finite points are given.
    explicit LandmarkSet2D(std::vector<Vec2> points);

    const std::vector<Vec2>& points() const { return points_; }
    const Vec2& operator[](int index) const { return points_[static_cast<std::size_t>(index)]; }

private:
    std::vector<Vec2> points_;
};

/// Six landmarks in the fixed order of `landmark::six`. Throws MalformedLandmarks on a short input.
SixPoints<2> select_six(std::span<const Vec2> landmarks);
SixPoints<2> select_six(const LandmarkSet2D& landmarks);
/// Vertex ids for the six landmarks from a semantic-index -> vertex-index map.
std::array<int, 6> select_six(const std::map<int, int>& landmark_map);

/**
 * 68-point reference face in millimetres, expressed in a face-local frame whose
 * origin is the face center (x toward the subject's left eye, y down, z away from
 * the viewer for a frontal face).
 */
class ReferenceFaceModel
{
public:
    /// Re-centers `points` on their face center. Throws MalformedLandmarks unless 68 entries.
    explicit ReferenceFaceModel(std::vector<Vec3> points);

    const std::vector<Vec3>& points() const { return points_; }
    const Vec3& operator[](int index) const { return points_[static_cast<std::size_t>(index)]; }
    SixPoints<3> six() const;
    /// Eye-center distance l_r in mm.
    double eye_distance() const { return eye_distance_; }

    /// Procedural generic face with the given interocular (eye-center) distance.
    static ReferenceFaceModel generic(double interocular_mm = 60.0);

    /**
     * Text format: a header line "<count> <l_r>", then one "index x y z" line per
     * point (mm). Lines starting with '#' are comments. Throws Parse on malformed
     * input or when the stored l_r disagrees with the points by more than 1e-6 mm.
     */
    static ReferenceFaceModel load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

private:
    std::vector<Vec3> points_;
    double eye_distance_;
};

/// Path of the model file shipped in the repository's data directory.
std::filesystem::path shipped_reference_model_path();

} // namespace gazesynth
