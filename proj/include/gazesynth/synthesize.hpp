#pragma once

#include "gazesynth/augment.hpp"
#include "gazesynth/image.hpp"
#include "gazesynth/manifest.hpp"
#include "gazesynth/pnp.hpp"
#include "gazesynth/pose.hpp"
#include "gazesynth/renderer.hpp"
#include "gazesynth/sampler.hpp"
#include "gazesynth/viewsynth.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace gazesynth {

struct SynthesisConfig
{
    PoseSamplerConfig sampler;
    std::vector<SampledPose> target_poses; ///< used in target-list mode
    AugmentationSchedule schedule;
    double focal_px = 960.0;
    double distance_mm = 300.0;
    int render_size = 448; ///< output images are render_size / 2
    std::uint64_t seed = 0;
    int workers = 1;
    double max_failure_fraction = 0.1;
    std::filesystem::path reference_model; ///< empty: the shipped model
    PnPConfig pnp;

    void validate() const;
};

/// One synthesized image and its labels (a line of labels.jsonl).
struct OutputRecord
{
    std::string image;  ///< relative to the output directory
    std::string mask;
    PitchYaw gaze;
    Vec3 gaze_vector = Vec3::Zero();
    EulerAngles head;   ///< R = R_y(yaw) R_x(pitch) R_z(roll)
    Mat3 head_R = Mat3::Identity();
    Vec3 head_t = Vec3::Zero();
    std::string source_id;
    int target_pose_id = 0;
    SampledPose target_pose;
    BackgroundKind background = BackgroundKind::Black;
    std::string scene; ///< scene file name, scene backgrounds only
    double ambient = 1.0;
    double roll_correction = 0.0;
    std::vector<Vec2> landmarks_2d;      ///< output-image pixels
    std::map<std::string, Vec2> markers; ///< output-image pixels of named mesh markers
};

nlohmann::json to_json(const OutputRecord& record);
OutputRecord output_record_from_json(const nlohmann::json& j);
/// CSV header and row mirroring the scalar fields of the JSON record.
std::string csv_header();
std::string csv_row(const OutputRecord& record);

/// Everything produced for one (source, pose) job, for in-process inspection.
struct JobView
{
    const OutputRecord& record;
    const PosedSample& posed;
    const RenderOutput& render; ///< render-resolution output incl. face_mask
    const RgbImage& image;      ///< output-resolution composited image
    const GrayImage& mask;      ///< output-resolution binary mask
};

struct SynthesisSummary
{
    std::size_t sources = 0;
    std::size_t failed_sources = 0;
    std::size_t outputs = 0;
    std::vector<std::string> failures; ///< "id: reason"
    double wall_seconds = 0.0;
    bool aborted = false; ///< failure fraction exceeded the limit
};

/**
 * Runs the full per-source chain (PnP, alpha/beta, metricize, face region) and,
 * for each sampled pose, normalization, rendering, compositing, downscaling and
 * mask rendering. Writes images/, masks/, labels.jsonl and labels.csv under
 * `out_dir`. Per-source failures are logged and skipped; `aborted` is set when
 * they exceed `max_failure_fraction`. Output is identical for any worker count.
 * The observer, if given, is called for each job (possibly from worker threads,
 * never concurrently).
 */
SynthesisSummary synthesize(const std::filesystem::path& manifest, const SynthesisConfig& config,
                            const std::filesystem::path& out_dir,
                            const std::function<void(const JobView&)>& observer = {});

/// Reads labels.jsonl back.
std::vector<OutputRecord> read_labels(const std::filesystem::path& labels_jsonl);

} // namespace gazesynth
