#pragma once

#include "gazesynth/geometry.hpp"

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace gazesynth {

using Triangle = std::array<int, 3>;
using Color = Eigen::Vector3d; ///< linear RGB in [0, 1]

/**
 * Reconstructed face in face-patch units: (u, v) are patch pixels, d is depth in
 * the same pixel unit and increases away from the camera.
 */
struct PatchMesh
{
    std::vector<Vec3> vertices; ///< (u, v, d)
    std::vector<Triangle> triangles;
    std::vector<Color> colors;
    std::map<int, int> landmark_map;          ///< 68-scheme index -> vertex index
    std::map<std::string, int> markers;       ///< named auxiliary vertices (e.g. test markers)

    /// Throws InvalidArgument / MalformedLandmarks on broken invariants.
    void validate() const;
};

/// The same surface in the camera frame, millimetres.
struct MetricMesh
{
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    std::vector<Color> colors;
    std::map<int, int> landmark_map;
    std::map<std::string, int> markers;
    /// Per-vertex face-region flag used for mask rendering; empty means "not computed".
    std::vector<unsigned char> face_region;

    const Vec3& landmark(int semantic_index) const;
};

/// Landmark indices every ingested mesh must map: six matching landmarks, chin and outline 0-26.
std::vector<int> required_mesh_landmarks();

/**
 * Text interchange format (normative). Sections appear in this order, each
 * introduced by "<name> <count>":
 *
 *     patchmesh 1
 *     vertices N      then N lines "u v d"
 *     colors N        then N lines "r g b" in [0, 1]
 *     triangles M     then M lines "i j k" (0-based)
 *     landmarks K     then K lines "semantic_index vertex_index"
 *     markers L       optional; L lines "name vertex_index"
 *
 * Blank lines and lines starting with '#' are ignored.
 */
PatchMesh read_patch_mesh(const std::filesystem::path& path);
void write_patch_mesh(const PatchMesh& mesh, const std::filesystem::path& path);

} // namespace gazesynth
