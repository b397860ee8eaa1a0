#include "gazesynth/image.hpp"
#include "gazesynth/error.hpp"

#include <png.h>
// jpeglib.h needs FILE and size_t declared first.
#include <cstdio>
#include <jpeglib.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstring>

namespace gazesynth {

std::uint8_t quantize(double value)
{
    const double scaled = std::floor(value * 255.0 + 0.5);
    return static_cast<std::uint8_t>(std::clamp(scaled, 0.0, 255.0));
}

namespace {

template <int Channels>
void write_png_impl(const Image8<Channels>& image, const std::filesystem::path& path,
                    png_uint_32 format)
{
    png_image png;
    std::memset(&png, 0, sizeof png);
    png.version = PNG_IMAGE_VERSION;
    png.width = static_cast<png_uint_32>(image.width);
    png.height = static_cast<png_uint_32>(image.height);
    png.format = format;
    if (png_image_write_to_file(&png, path.string().c_str(), 0, image.data.data(), 0, nullptr) ==
        0) {
        throw Error(ErrorCode::Io, "cannot write " + path.string() + ": " + png.message);
    }
}

template <int Channels>
Image8<Channels> read_png_impl(const std::filesystem::path& path, png_uint_32 format)
{
    png_image png;
    std::memset(&png, 0, sizeof png);
    png.version = PNG_IMAGE_VERSION;
    if (png_image_begin_read_from_file(&png, path.string().c_str()) == 0) {
        throw Error(ErrorCode::Io, "cannot read " + path.string() + ": " + png.message);
    }
    png.format = format;
    Image8<Channels> image(static_cast<int>(png.width), static_cast<int>(png.height));
    if (png_image_finish_read(&png, nullptr, image.data.data(), 0, nullptr) == 0) {
        png_image_free(&png);
        throw Error(ErrorCode::Io, "cannot decode " + path.string() + ": " + png.message);
    }
    return image;
}

struct JpegErrorManager
{
    jpeg_error_mgr base;
    std::jmp_buf jump;
};

void jpeg_error_exit(j_common_ptr info)
{
    std::longjmp(reinterpret_cast<JpegErrorManager*>(info->err)->jump, 1);
}

RgbImage read_jpeg(const std::filesystem::path& path)
{
    std::FILE* file = std::fopen(path.string().c_str(), "rb");
    if (file == nullptr) {
        throw Error(ErrorCode::Io, "cannot open " + path.string());
    }
    jpeg_decompress_struct info;
    JpegErrorManager err;
    info.err = jpeg_std_error(&err.base);
    err.base.error_exit = jpeg_error_exit;
    RgbImage image;
    if (setjmp(err.jump)) {
        jpeg_destroy_decompress(&info);
        std::fclose(file);
        throw Error(ErrorCode::Io, "cannot decode " + path.string());
    }
    jpeg_create_decompress(&info);
    jpeg_stdio_src(&info, file);
    jpeg_read_header(&info, TRUE);
    info.out_color_space = JCS_RGB;
    jpeg_start_decompress(&info);
    image = RgbImage(static_cast<int>(info.output_width), static_cast<int>(info.output_height));
    while (info.output_scanline < info.output_height) {
        JSAMPROW row = image.data.data() + static_cast<std::size_t>(info.output_scanline) *
                                               info.output_width * 3;
        jpeg_read_scanlines(&info, &row, 1);
    }
    jpeg_finish_decompress(&info);
    jpeg_destroy_decompress(&info);
    std::fclose(file);
    return image;
}

std::string lower_extension(const std::filesystem::path& path)
{
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

} // namespace

void write_png(const RgbImage& image, const std::filesystem::path& path)
{
    write_png_impl(image, path, PNG_FORMAT_RGB);
}

void write_png(const GrayImage& image, const std::filesystem::path& path)
{
    write_png_impl(image, path, PNG_FORMAT_GRAY);
}

RgbImage read_rgb(const std::filesystem::path& path)
{
    const std::string ext = lower_extension(path);
    if (ext == ".jpg" || ext == ".jpeg") {
        return read_jpeg(path);
    }
    if (ext == ".png") {
        return read_png_impl<3>(path, PNG_FORMAT_RGB);
    }
    throw Error(ErrorCode::Io, "unsupported image format: " + path.string());
}

GrayImage read_gray_png(const std::filesystem::path& path)
{
    return read_png_impl<1>(path, PNG_FORMAT_GRAY);
}

RgbImage resize_bilinear(const RgbImage& image, int width, int height)
{
    if (image.width == width && image.height == height) {
        return image;
    }
    RgbImage out(width, height);
    const double sx = static_cast<double>(image.width) / width;
    const double sy = static_cast<double>(image.height) / height;
    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, image.height - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, image.height - 1);
        const double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, image.width - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, image.width - 1);
            const double wx = fx - x0;
            for (int c = 0; c < 3; ++c) {
                const double top = (1 - wx) * image.at(x0, y0, c) + wx * image.at(x1, y0, c);
                const double bottom = (1 - wx) * image.at(x0, y1, c) + wx * image.at(x1, y1, c);
                out.at(x, y, c) = quantize(((1 - wy) * top + wy * bottom) / 255.0);
            }
        }
    }
    return out;
}

RgbImage gaussian_blur(const RgbImage& image, double sigma)
{
    if (sigma < 0.0) {
        throw Error(ErrorCode::InvalidArgument, "blur sigma must be non-negative");
    }
    if (sigma == 0.0) {
        return image;
    }
    const int radius = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * i * i / (sigma * sigma));
        kernel[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (auto& w : kernel) {
        w /= sum;
    }
    const int W = image.width;
    const int H = image.height;
    std::vector<double> tmp(static_cast<std::size_t>(W) * H * 3);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int xx = std::clamp(x + k, 0, W - 1);
                    acc += kernel[static_cast<std::size_t>(k + radius)] * image.at(xx, y, c);
                }
                tmp[(static_cast<std::size_t>(y) * W + x) * 3 + c] = acc;
            }
        }
    }
    RgbImage out(W, H);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            for (int c = 0; c < 3; ++c) {
                double acc = 0.0;
                for (int k = -radius; k <= radius; ++k) {
                    const int yy = std::clamp(y + k, 0, H - 1);
                    acc += kernel[static_cast<std::size_t>(k + radius)] *
                           tmp[(static_cast<std::size_t>(yy) * W + x) * 3 + c];
                }
                out.at(x, y, c) = quantize(acc / 255.0);
            }
        }
    }
    return out;
}

} // namespace gazesynth
