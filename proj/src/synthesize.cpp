#include "gazesynth/synthesize.hpp"
#include "gazesynth/error.hpp"
#include "gazesynth/matching.hpp"
#include "gazesynth/mesh.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

namespace gazesynth {

using nlohmann::json;

void SynthesisConfig::validate() const
{
    sampler.validate();
    schedule.validate();
    if (sampler.mode == SamplerMode::TargetList && target_poses.empty()) {
        throw Error(ErrorCode::Config, "target-list sampling needs a non-empty pose list");
    }
    if (!(focal_px > 0.0) || !(distance_mm > 0.0)) {
        throw Error(ErrorCode::Config, "focal length and distance must be positive");
    }
    if (render_size < 2 || render_size % 2 != 0) {
        throw Error(ErrorCode::Config, "render size must be a positive even number");
    }
    if (workers < 1) {
        throw Error(ErrorCode::Config, "worker count must be at least 1");
    }
    if (!(max_failure_fraction >= 0.0 && max_failure_fraction <= 1.0)) {
        throw Error(ErrorCode::Config, "failure fraction must lie in [0, 1]");
    }
}

namespace {

json vec_json(const Vec3& v)
{
    return json::array({v.x(), v.y(), v.z()});
}

Vec3 json_vec3(const json& j)
{
    return {j.at(0).get<double>(), j.at(1).get<double>(), j.at(2).get<double>()};
}

BackgroundKind kind_from_string(const std::string& s)
{
    if (s == "black") {
        return BackgroundKind::Black;
    }
    if (s == "color") {
        return BackgroundKind::Solid;
    }
    if (s == "scene") {
        return BackgroundKind::Scene;
    }
    throw Error(ErrorCode::Parse, "unknown background kind '" + s + "'");
}

} // namespace

json to_json(const OutputRecord& r)
{
    json R = json::array();
    for (int i = 0; i < 3; ++i) {
        R.push_back({r.head_R(i, 0), r.head_R(i, 1), r.head_R(i, 2)});
    }
    json lm = json::array();
    for (const auto& p : r.landmarks_2d) {
        lm.push_back({p.x(), p.y()});
    }
    json markers = json::object();
    for (const auto& [name, p] : r.markers) {
        markers[name] = {p.x(), p.y()};
    }
    return json{{"image", r.image},
                {"mask", r.mask},
                {"gaze_pitch", r.gaze.pitch},
                {"gaze_yaw", r.gaze.yaw},
                {"gaze_vector", vec_json(r.gaze_vector)},
                {"head_pitch", r.head.pitch},
                {"head_yaw", r.head.yaw},
                {"head_roll", r.head.roll},
                {"head_R", R},
                {"head_t", vec_json(r.head_t)},
                {"source_id", r.source_id},
                {"target_pose_id", r.target_pose_id},
                {"target_yaw_deg", r.target_pose.yaw_deg},
                {"target_pitch_deg", r.target_pose.pitch_deg},
                {"background", to_string(r.background)},
                {"scene", r.scene},
                {"ambient", r.ambient},
                {"roll_correction", r.roll_correction},
                {"landmarks_2d", lm},
                {"markers", markers}};
}

OutputRecord output_record_from_json(const json& j)
{
    OutputRecord r;
    r.image = j.at("image").get<std::string>();
    r.mask = j.at("mask").get<std::string>();
    r.gaze = {j.at("gaze_pitch").get<double>(), j.at("gaze_yaw").get<double>()};
    r.gaze_vector = json_vec3(j.at("gaze_vector"));
    r.head = {j.at("head_pitch").get<double>(), j.at("head_yaw").get<double>(),
              j.at("head_roll").get<double>()};
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            r.head_R(i, k) = j.at("head_R").at(i).at(k).get<double>();
        }
    }
    r.head_t = json_vec3(j.at("head_t"));
    r.source_id = j.at("source_id").get<std::string>();
    r.target_pose_id = j.at("target_pose_id").get<int>();
    r.target_pose = {j.at("target_yaw_deg").get<double>(), j.at("target_pitch_deg").get<double>()};
    r.background = kind_from_string(j.at("background").get<std::string>());
    r.scene = j.at("scene").get<std::string>();
    r.ambient = j.at("ambient").get<double>();
    r.roll_correction = j.at("roll_correction").get<double>();
    for (const auto& p : j.at("landmarks_2d")) {
        r.landmarks_2d.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
    }
    for (const auto& [name, p] : j.at("markers").items()) {
        r.markers[name] = Vec2(p.at(0).get<double>(), p.at(1).get<double>());
    }
    return r;
}

std::string csv_header()
{
    return "image,mask,gaze_pitch,gaze_yaw,gaze_x,gaze_y,gaze_z,head_pitch,head_yaw,head_roll,"
           "head_tx,head_ty,head_tz,source_id,target_pose_id,target_yaw_deg,target_pitch_deg,"
           "background,scene,ambient";
}

std::string csv_row(const OutputRecord& r)
{
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "%s,%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s,%d,"
                  "%.17g,%.17g,%s,%s,%.17g",
                  r.image.c_str(), r.mask.c_str(), r.gaze.pitch, r.gaze.yaw, r.gaze_vector.x(),
                  r.gaze_vector.y(), r.gaze_vector.z(), r.head.pitch, r.head.yaw, r.head.roll,
                  r.head_t.x(), r.head_t.y(), r.head_t.z(), r.source_id.c_str(), r.target_pose_id,
                  r.target_pose.yaw_deg, r.target_pose.pitch_deg, to_string(r.background),
                  r.scene.c_str(), r.ambient);
    return buf;
}

std::vector<OutputRecord> read_labels(const std::filesystem::path& labels_jsonl)
{
    std::ifstream in(labels_jsonl);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open " + labels_jsonl.string());
    }
    std::vector<OutputRecord> out;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) {
            continue;
        }
        try {
            out.push_back(output_record_from_json(json::parse(line)));
        } catch (const json::exception& e) {
            throw Error(ErrorCode::Parse,
                        labels_jsonl.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

namespace {

constexpr double deg = std::numbers::pi / 180.0;

struct LiftedSource
{
    MetricMesh mesh;
    HeadPose source_pose;
    std::vector<SampledPose> poses;
};

LiftedSource lift_source(const SourceRecord& record, const SynthesisConfig& config,
                         const ReferenceFaceModel& reference)
{
    const PatchMesh patch = read_patch_mesh(record.mesh);
    const PnPResult pnp = estimate_source_pose(record.landmarks, record.camera, reference, config.pnp);
    if (!pnp.converged) {
        throw Error(ErrorCode::DegenerateConfiguration,
                    "PnP did not converge (rms " + std::to_string(pnp.rms_reprojection_error) + " px)");
    }
    const MatchingParams params = matching_params(patch, pnp.pose, reference);
    LiftedSource out;
    out.mesh = metricize(patch, record.camera, record.crop, params);
    out.mesh.face_region = face_region_vertices(patch);
    out.source_pose = pnp.pose;

    PoseSamplerConfig sampler = config.sampler;
    sampler.seed = derive_seed(config.seed, "poses:" + record.id);
    out.poses = sample_poses(sampler, config.target_poses);
    return out;
}

std::string job_name(const std::string& source_id, int pose_id)
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "_%02d", pose_id);
    return source_id + buf;
}

OutputRecord run_job(const LiftedSource& src, const SourceRecord& record, int pose_id,
                     const AugmentationEntry& aug, const SynthesisConfig& config,
                     const std::filesystem::path& out_dir,
                     const std::function<void(const JobView&)>& observer, std::mutex& observer_mutex)
{
    const SampledPose& target = src.poses[static_cast<std::size_t>(pose_id)];
    PosedSample posed = normalize_to_target(src.mesh, record.gaze_target, src.source_pose,
                                            target.yaw_deg * deg, target.pitch_deg * deg,
                                            config.distance_mm);
    posed.source_id = record.id;
    posed.target_pose_id = pose_id;

    const VirtualCamera camera = VirtualCamera::normalized(config.focal_px, config.render_size);
    RenderOutput render = rasterize(posed.mesh, camera, aug.ambient);
    render.face_mask = render_mask(posed.mesh, camera);
    const RgbImage composited = composite_background(render, aug.background);
    const RgbImage image = downscale(composited);
    const GrayImage mask = downscale_mask(render.face_mask);

    const std::string name = job_name(record.id, pose_id);
    OutputRecord rec;
    rec.image = "images/" + name + ".png";
    rec.mask = "masks/" + name + ".png";
    write_png(image, out_dir / rec.image);
    write_png(mask, out_dir / rec.mask);

    rec.gaze = posed.gaze;
    rec.gaze_vector = posed.gaze_vector;
    rec.head = to_euler(posed.head_pose.R);
    rec.head_R = posed.head_pose.R;
    rec.head_t = posed.head_pose.t;
    rec.source_id = record.id;
    rec.target_pose_id = pose_id;
    rec.target_pose = target;
    rec.background = aug.background.kind;
    if (aug.background.kind == BackgroundKind::Scene) {
        rec.scene = aug.background.scene.filename().string();
    }
    rec.ambient = aug.ambient;
    rec.roll_correction = posed.roll_correction;

    // Output pixels are half the render pixels (2x2 box filter, shared pixel-center grid).
    const CameraIntrinsics out_cam(config.focal_px / 2.0, config.focal_px / 2.0,
                                   config.render_size / 4.0, config.render_size / 4.0);
    for (int k = 0; k < landmark::count; ++k) {
        rec.landmarks_2d.push_back(project(out_cam, posed.mesh.landmark(k)));
    }
    for (const auto& [marker_name, vertex] : posed.mesh.markers) {
        rec.markers[marker_name] =
            project(out_cam, posed.mesh.vertices.at(static_cast<std::size_t>(vertex)));
    }

    if (observer) {
        std::lock_guard<std::mutex> lock(observer_mutex);
        observer(JobView{rec, posed, render, image, mask});
    }
    return rec;
}

} // namespace

SynthesisSummary synthesize(const std::filesystem::path& manifest, const SynthesisConfig& config,
                            const std::filesystem::path& out_dir,
                            const std::function<void(const JobView&)>& observer)
{
    const auto start = std::chrono::steady_clock::now();
    config.validate();
    const ManifestReport report = validate_manifest(manifest);
    const ReferenceFaceModel reference = ReferenceFaceModel::load(
        config.reference_model.empty() ? shipped_reference_model_path() : config.reference_model);

    std::filesystem::create_directories(out_dir / "images");
    std::filesystem::create_directories(out_dir / "masks");

    const std::size_t n_sources = report.entries.size();
    const auto poses_per_source = static_cast<std::size_t>(config.sampler.poses_per_source);
    AugmentationSchedule schedule = config.schedule;
    schedule.seed = derive_seed(config.seed, "schedule");
    const auto augmentations = schedule_augmentations(n_sources * poses_per_source, schedule);

    std::vector<std::vector<OutputRecord>> per_source(n_sources);
    std::vector<std::string> failure(n_sources);
    std::mutex observer_mutex;
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        for (std::size_t i = next++; i < n_sources; i = next++) {
            const ManifestEntry& entry = report.entries[i];
            if (!entry.ok()) {
                std::string reasons;
                for (const auto& r : entry.reasons) {
                    reasons += (reasons.empty() ? "" : "; ") + r;
                }
                failure[i] = "invalid record: " + reasons;
                continue;
            }
            try {
                const LiftedSource src = lift_source(*entry.record, config, reference);
                std::vector<OutputRecord> records;
                for (std::size_t j = 0; j < poses_per_source; ++j) {
                    records.push_back(run_job(src, *entry.record, static_cast<int>(j),
                                              augmentations[i * poses_per_source + j], config,
                                              out_dir, observer, observer_mutex));
                }
                per_source[i] = std::move(records);
            } catch (const std::exception& e) {
                failure[i] = e.what();
                per_source[i].clear();
            }
        }
    };
    const int n_workers =
        std::max(1, std::min<int>(config.workers, static_cast<int>(std::max<std::size_t>(1, n_sources))));
    std::vector<std::thread> threads;
    for (int w = 1; w < n_workers; ++w) {
        threads.emplace_back(worker);
    }
    worker();
    for (auto& t : threads) {
        t.join();
    }

    SynthesisSummary summary;
    summary.sources = n_sources;
    std::ofstream jsonl(out_dir / "labels.jsonl");
    std::ofstream csv(out_dir / "labels.csv");
    if (!jsonl || !csv) {
        throw Error(ErrorCode::Io, "cannot write labels into " + out_dir.string());
    }
    csv << csv_header() << '\n';
    for (std::size_t i = 0; i < n_sources; ++i) {
        if (!failure[i].empty()) {
            ++summary.failed_sources;
            const std::string id = report.entries[i].id.empty()
                                       ? "line " + std::to_string(report.entries[i].line)
                                       : report.entries[i].id;
            summary.failures.push_back(id + ": " + failure[i]);
            std::cerr << "skipping " << id << ": " << failure[i] << '\n';
            continue;
        }
        for (const auto& rec : per_source[i]) {
            jsonl << to_json(rec).dump() << '\n';
            csv << csv_row(rec) << '\n';
            ++summary.outputs;
        }
    }
    summary.aborted = n_sources > 0 && static_cast<double>(summary.failed_sources) >
                                           config.max_failure_fraction * static_cast<double>(n_sources);
    summary.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return summary;
}

} // namespace gazesynth
