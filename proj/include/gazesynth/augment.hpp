#pragma once

#include "gazesynth/renderer.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace gazesynth {

struct AugmentationSchedule
{
    std::array<double, 3> ratio{1.0, 1.0, 3.0}; ///< black : color : scene
    double weak_fraction = 0.5;
    double weak_min = 0.25;
    double weak_max = 0.75;
    std::filesystem::path scene_dir;
    double blur_sigma = 4.0;
    std::uint64_t seed = 0;

    /// Throws Config on negative/all-zero ratios, fraction outside [0, 1] or a range outside (0, 1].
    void validate() const;
};

struct AugmentationEntry
{
    Background background;
    double ambient = 1.0;
    bool weak_light = false;
};

/// Sorted PNG/JPEG files directly inside `dir`.
std::vector<std::filesystem::path> list_scene_images(const std::filesystem::path& dir);

/// Largest-remainder split of n over non-negative weights; ties go to the lower index.
std::vector<std::size_t> apportion(std::size_t n, std::span<const double> weights);

/**
 * n entries whose background kinds follow the ratio exactly (largest-remainder
 * rounding) and of which round(n * weak_fraction) get an ambient value uniform in
 * [weak_min, weak_max]; the rest use ambient 1. Kinds and light levels are each
 * shuffled with the schedule seed. Throws Config if a scene background is
 * scheduled and the scene directory holds no images.
 */
std::vector<AugmentationEntry> schedule_augmentations(std::size_t n,
                                                      const AugmentationSchedule& schedule);

} // namespace gazesynth
