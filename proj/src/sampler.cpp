#include "gazesynth/sampler.hpp"
#include "gazesynth/error.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace gazesynth {

void PoseSamplerConfig::validate() const
{
    if (!(sigma_deg >= 0.0)) {
        throw Error(ErrorCode::Config, "sigma must be non-negative");
    }
    if (poses_per_source < 1) {
        throw Error(ErrorCode::Config, "poses per source must be at least 1");
    }
    if (!(rejection_norm_deg > 0.0)) {
        throw Error(ErrorCode::Config, "rejection norm must be positive");
    }
}

double SampledPose::norm() const
{
    return std::hypot(yaw_deg, pitch_deg);
}

std::vector<SampledPose> sample_poses(const PoseSamplerConfig& config,
                                      std::span<const SampledPose> targets)
{
    config.validate();
    std::mt19937_64 rng(config.seed);
    std::vector<SampledPose> out;
    out.reserve(static_cast<std::size_t>(config.poses_per_source));
    long long draws = 0;

    if (config.mode == SamplerMode::TargetList) {
        if (targets.empty()) {
            throw Error(ErrorCode::InvalidArgument, "target pose list is empty");
        }
        bool any_valid = false;
        for (const auto& t : targets) {
            any_valid = any_valid || t.norm() <= config.rejection_norm_deg;
        }
        if (!any_valid) {
            throw Error(ErrorCode::SamplerExhausted, "no target pose lies within the rejection norm");
        }
        std::uniform_int_distribution<std::size_t> pick(0, targets.size() - 1);
        while (static_cast<int>(out.size()) < config.poses_per_source) {
            if (++draws > max_sampler_draws) {
                throw Error(ErrorCode::SamplerExhausted, "rejection loop exceeded draw limit");
            }
            const SampledPose& cand = targets[pick(rng)];
            if (cand.norm() <= config.rejection_norm_deg) {
                out.push_back(cand);
            }
        }
        return out;
    }

    std::normal_distribution<double> normal(0.0, 1.0);
    while (static_cast<int>(out.size()) < config.poses_per_source) {
        if (++draws > max_sampler_draws) {
            throw Error(ErrorCode::SamplerExhausted, "rejection loop exceeded draw limit");
        }
        const SampledPose cand{config.sigma_deg * normal(rng), config.sigma_deg * normal(rng)};
        if (cand.norm() <= config.rejection_norm_deg) {
            out.push_back(cand);
        }
    }
    return out;
}

std::vector<SampledPose> read_target_poses(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::Io, "cannot open target pose list " + path.string());
    }
    std::vector<SampledPose> poses;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        std::istringstream ls(line);
        double pitch, yaw;
        if (!(ls >> pitch >> yaw)) {
            throw Error(ErrorCode::Parse,
                        path.string() + ":" + std::to_string(line_no) + ": expected 'pitch yaw'");
        }
        poses.push_back({yaw, pitch});
    }
    return poses;
}

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view key)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    std::uint64_t z = global_seed ^ h;
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace gazesynth
