#pragma once

#include "gazesynth/facemodel.hpp"
#include "gazesynth/geometry.hpp"

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace gazesynth {

/**
 * One manifest line (JSON object):
 *
 *     {"id": "s000", "subject": "p00", "image": "s000.png", "mesh": "s000.mesh",
 *      "intrinsics": {"fx": .., "fy": .., "cx": .., "cy": ..},
 *      "crop": {"cx": .., "cy": .., "w": .., "h": .., "scale_x": .., "scale_y": ..},
 *      "landmarks": [[u, v], ... 68 entries], "gaze_target": [x, y, z]}
 *
 * Paths are relative to the manifest's directory. Unknown keys are ignored.
 */
struct SourceRecord
{
    int line = 0;
    std::string id;
    std::string subject;
    std::filesystem::path image; ///< resolved
    std::filesystem::path mesh;  ///< resolved
    CameraIntrinsics camera{1.0, 1.0, 0.0, 0.0};
    CropTransform crop{0.0, 0.0, 1.0, 1.0, 1.0, 1.0};
    LandmarkSet2D landmarks{std::vector<Vec2>(landmark::count, Vec2::Zero())};
    Vec3 gaze_target = Vec3::Zero();
};

struct ManifestEntry
{
    int line = 0;
    std::string id;
    std::optional<SourceRecord> record; ///< set iff the entry passed
    std::vector<std::string> reasons;

    bool ok() const { return record.has_value(); }
};

struct ManifestReport
{
    std::filesystem::path path;
    std::vector<ManifestEntry> entries;

    std::size_t passed() const;
    bool all_ok() const { return passed() == entries.size(); }
    std::vector<SourceRecord> valid_records() const;
};

/**
 * Per-record pass/fail: missing or malformed fields, landmark count != 68,
 * non-invertible intrinsics, invalid crop, missing files, duplicate ids.
 * Throws Parse (with the line number) when a line is not a JSON object, and Io
 * when the manifest cannot be read.
 */
ManifestReport validate_manifest(const std::filesystem::path& manifest);

/// Human-readable report, one line per record.
std::string format_report(const ManifestReport& report);

/// Manifest JSON for a record; paths are written relative to `base_dir`.
nlohmann::json to_json(const SourceRecord& record, const std::filesystem::path& base_dir);

} // namespace gazesynth
