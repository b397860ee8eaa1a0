#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace gazesynth {

enum class SamplerMode { TargetList, Gaussian };

struct PoseSamplerConfig
{
    SamplerMode mode = SamplerMode::Gaussian;
    double sigma_deg = 20.0;
    int poses_per_source = 16;
    double rejection_norm_deg = 80.0;
    std::uint64_t seed = 0;

    /// Throws Config on sigma < 0, poses_per_source < 1 or rejection_norm <= 0.
    void validate() const;
};

/// Target head pose in degrees.
struct SampledPose
{
    double yaw_deg = 0.0;
    double pitch_deg = 0.0;

    double norm() const;
    bool operator==(const SampledPose&) const = default;
};

inline constexpr long long max_sampler_draws = 1'000'000;

/**
 * Exactly `poses_per_source` poses with sqrt(yaw^2 + pitch^2) <= rejection_norm.
 * Gaussian mode draws yaw and pitch independently from N(0, sigma^2); target-list
 * mode draws entries uniformly with replacement. Rejected draws are redrawn.
 * Throws InvalidArgument for an empty target list, SamplerExhausted when no target
 * is within the bound or the loop exceeds `max_sampler_draws`.
 */
std::vector<SampledPose> sample_poses(const PoseSamplerConfig& config,
                                      std::span<const SampledPose> targets = {});

/// Target pose list: one "pitch yaw" pair in degrees per line; '#' comments allowed.
std::vector<SampledPose> read_target_poses(const std::filesystem::path& path);

/// Per-unit seed from a global seed and a stable key (FNV-1a, then splitmix64).
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key);

} // namespace gazesynth
