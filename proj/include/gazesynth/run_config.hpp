#pragma once

#include "gazesynth/synthesize.hpp"

#include "json.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace gazesynth {

/// Options of a synthesis run as given on the command line or in a config file.
struct RunConfig
{
    std::filesystem::path manifest;
    std::filesystem::path output;
    std::string sampler = "gaussian"; ///< "gaussian" or "targets"
    std::filesystem::path target_poses;
    double sigma_deg = 20.0;
    int poses_per_source = 16;
    double rejection_norm_deg = 80.0;
    std::filesystem::path scene_dir;
    double ratio_black = 1.0;
    double ratio_color = 1.0;
    double ratio_scene = 3.0;
    double weak_fraction = 0.5;
    double weak_min = 0.25;
    double weak_max = 0.75;
    double blur_sigma = 4.0;
    double focal_px = 960.0;
    double distance_mm = 300.0;
    int render_size = 448;
    std::uint64_t seed = 0;
    int workers = 1;
    double max_failure_fraction = 0.1;
    std::filesystem::path reference_model;

    /// Throws Error(Config) on inconsistent options.
    void validate() const;
    /// Reads the target pose list if needed.
    SynthesisConfig to_synthesis_config() const;
    nlohmann::json to_json() const;
};

} // namespace gazesynth
