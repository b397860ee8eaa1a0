#include "gazesynth/augment.hpp"
#include "gazesynth/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <random>

namespace gazesynth {

void AugmentationSchedule::validate() const
{
    double sum = 0.0;
    for (double r : ratio) {
        if (!(r >= 0.0) || !std::isfinite(r)) {
            throw Error(ErrorCode::Config, "background ratio components must be non-negative");
        }
        sum += r;
    }
    if (!(sum > 0.0)) {
        throw Error(ErrorCode::Config, "background ratio must not be all zero");
    }
    if (!(weak_fraction >= 0.0 && weak_fraction <= 1.0)) {
        throw Error(ErrorCode::Config, "weak-light fraction must lie in [0, 1]");
    }
    if (!(weak_min > 0.0 && weak_min <= weak_max && weak_max <= 1.0)) {
        throw Error(ErrorCode::Config, "weak-light ambient range must lie within (0, 1]");
    }
    if (!(blur_sigma >= 0.0)) {
        throw Error(ErrorCode::Config, "blur sigma must be non-negative");
    }
}

std::vector<std::filesystem::path> list_scene_images(const std::filesystem::path& dir)
{
    std::vector<std::filesystem::path> out;
    if (dir.empty() || !std::filesystem::is_directory(dir)) {
        return out;
    }
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file()) {
            continue;
        }
        std::string ext = entry.path().extension().string();
        std::transform(ext.begin(), ext.end(), ext.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (ext == ".png" || ext == ".jpg" || ext == ".jpeg") {
            out.push_back(entry.path());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::size_t> apportion(std::size_t n, std::span<const double> weights)
{
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    std::vector<std::size_t> counts(weights.size(), 0);
    std::vector<double> remainder(weights.size(), 0.0);
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
        const double quota = static_cast<double>(n) * weights[k] / total;
        counts[k] = static_cast<std::size_t>(std::floor(quota));
        remainder[k] = quota - static_cast<double>(counts[k]);
        assigned += counts[k];
    }
    std::vector<std::size_t> order(weights.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) {
        ++counts[order[i % order.size()]];
    }
    return counts;
}

std::vector<AugmentationEntry> schedule_augmentations(std::size_t n,
                                                      const AugmentationSchedule& schedule)
{
    schedule.validate();
    const auto counts = apportion(n, schedule.ratio);
    std::vector<std::filesystem::path> scenes;
    if (counts[2] > 0) {
        scenes = list_scene_images(schedule.scene_dir);
        if (scenes.empty()) {
            throw Error(ErrorCode::Config, "scene backgrounds scheduled but no images found in '" +
                                               schedule.scene_dir.string() + "'");
        }
    }

    std::mt19937_64 rng(schedule.seed);
    std::vector<BackgroundKind> kinds;
    kinds.reserve(n);
    kinds.insert(kinds.end(), counts[0], BackgroundKind::Black);
    kinds.insert(kinds.end(), counts[1], BackgroundKind::Solid);
    kinds.insert(kinds.end(), counts[2], BackgroundKind::Scene);
    std::shuffle(kinds.begin(), kinds.end(), rng);

    const auto weak_count =
        static_cast<std::size_t>(std::floor(static_cast<double>(n) * schedule.weak_fraction + 0.5));
    std::vector<char> weak(n, 0);
    std::fill_n(weak.begin(), std::min(weak_count, n), 1);
    std::shuffle(weak.begin(), weak.end(), rng);

    std::uniform_int_distribution<int> channel(0, 255);
    std::uniform_real_distribution<double> ambient(schedule.weak_min, schedule.weak_max);
    std::uniform_int_distribution<std::size_t> scene_pick(0, scenes.empty() ? 0 : scenes.size() - 1);

    std::vector<AugmentationEntry> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        AugmentationEntry& e = out[i];
        e.background.kind = kinds[i];
        e.background.blur_sigma = schedule.blur_sigma;
        if (kinds[i] == BackgroundKind::Solid) {
            for (auto& c : e.background.rgb) {
                c = static_cast<std::uint8_t>(channel(rng));
            }
        } else if (kinds[i] == BackgroundKind::Scene) {
            e.background.scene = scenes[scene_pick(rng)];
        }
        e.weak_light = weak[i] != 0;
        e.ambient = e.weak_light ? ambient(rng) : 1.0;
    }
    return out;
}

} // namespace gazesynth
