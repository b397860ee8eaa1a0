#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace gazesynth {

/// Interleaved row-major 8-bit image.
template <int Channels>
struct Image8
{
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> data;

    Image8() = default;
    Image8(int w, int h, std::uint8_t fill = 0)
        : width(w), height(h), data(static_cast<std::size_t>(w) * h * Channels, fill)
    {
    }

    static constexpr int channels = Channels;

    std::uint8_t& at(int x, int y, int c = 0)
    {
        return data[(static_cast<std::size_t>(y) * width + x) * Channels + c];
    }
    std::uint8_t at(int x, int y, int c = 0) const
    {
        return data[(static_cast<std::size_t>(y) * width + x) * Channels + c];
    }

    bool operator==(const Image8&) const = default;
};

using RgbImage = Image8<3>;
using GrayImage = Image8<1>;

/// Round-half-up quantization of a [0, 1] value to 8 bits, clamped.
std::uint8_t quantize(double value);

void write_png(const RgbImage& image, const std::filesystem::path& path);
void write_png(const GrayImage& image, const std::filesystem::path& path);

/// Reads PNG or JPEG (by extension) as 8-bit RGB. Throws Io naming the path on failure.
RgbImage read_rgb(const std::filesystem::path& path);
GrayImage read_gray_png(const std::filesystem::path& path);

/// Bilinear resampling with pixel-center alignment.
RgbImage resize_bilinear(const RgbImage& image, int width, int height);

/// Separable Gaussian blur, edges replicated; sigma == 0 returns the input unchanged.
RgbImage gaussian_blur(const RgbImage& image, double sigma);

} // namespace gazesynth
