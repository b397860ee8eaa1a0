#include "gazesynth/run_config.hpp"
#include "gazesynth/error.hpp"

namespace gazesynth {

void RunConfig::validate() const
{
    if (manifest.empty() || output.empty()) {
        throw Error(ErrorCode::Config, "manifest and output directory are required");
    }
    if (sampler != "gaussian" && sampler != "targets") {
        throw Error(ErrorCode::Config, "sampler must be 'gaussian' or 'targets', got '" + sampler + "'");
    }
    if (sampler == "gaussian" && !target_poses.empty()) {
        throw Error(ErrorCode::Config, "a target pose list conflicts with gaussian sampling");
    }
    if (sampler == "targets" && target_poses.empty()) {
        throw Error(ErrorCode::Config, "target sampling needs --target-poses");
    }
    if (poses_per_source < 1) {
        throw Error(ErrorCode::Config, "poses per source must be at least 1");
    }
    if (ratio_scene > 0.0 && scene_dir.empty()) {
        throw Error(ErrorCode::Config, "scene backgrounds need --scene-dir (or a zero scene ratio)");
    }
}

SynthesisConfig RunConfig::to_synthesis_config() const
{
    validate();
    SynthesisConfig c;
    c.sampler.mode = sampler == "targets" ? SamplerMode::TargetList : SamplerMode::Gaussian;
    c.sampler.sigma_deg = sigma_deg;
    c.sampler.poses_per_source = poses_per_source;
    c.sampler.rejection_norm_deg = rejection_norm_deg;
    if (c.sampler.mode == SamplerMode::TargetList) {
        c.target_poses = read_target_poses(target_poses);
    }
    c.schedule.ratio = {ratio_black, ratio_color, ratio_scene};
    c.schedule.weak_fraction = weak_fraction;
    c.schedule.weak_min = weak_min;
    c.schedule.weak_max = weak_max;
    c.schedule.scene_dir = scene_dir;
    c.schedule.blur_sigma = blur_sigma;
    c.focal_px = focal_px;
    c.distance_mm = distance_mm;
    c.render_size = render_size;
    c.seed = seed;
    c.workers = workers;
    c.max_failure_fraction = max_failure_fraction;
    c.reference_model = reference_model;
    c.validate();
    return c;
}

nlohmann::json RunConfig::to_json() const
{
    return {{"manifest", manifest.string()},
            {"output", output.string()},
            {"sampler", sampler},
            {"target_poses", target_poses.string()},
            {"sigma_deg", sigma_deg},
            {"poses_per_source", poses_per_source},
            {"rejection_norm_deg", rejection_norm_deg},
            {"scene_dir", scene_dir.string()},
            {"ratio", {ratio_black, ratio_color, ratio_scene}},
            {"weak_fraction", weak_fraction},
            {"weak_ambient", {weak_min, weak_max}},
            {"blur_sigma", blur_sigma},
            {"focal_px", focal_px},
            {"distance_mm", distance_mm},
            {"render_size", render_size},
            {"seed", seed},
            {"workers", workers},
            {"max_failure_fraction", max_failure_fraction},
            {"reference_model", reference_model.string()}};
}

} // namespace gazesynth
