#pragma once

#include <cmath>
#include <cstddef>
#include <filesystem>
#include <vector>

namespace cbench {

/// H x W x C image with unit-interval intensities, row-major with channels
/// interleaved. All corruption kernels and the encoder consume this type.
struct ImageBuffer {
    int height = 0;
    int width = 0;
    int channels = 1; // 1 or 3
    std::vector<double> pixels; // length = height * width * channels

    ImageBuffer() = default;
    ImageBuffer(int h, int w, int c, double fill = 0.0)
        : height(h), width(w), channels(c),
          pixels(static_cast<std::size_t>(h) * w * c, fill) {}

    std::size_t size() const { return pixels.size(); }

    double& at(int y, int x, int c) {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }
    double at(int y, int x, int c) const {
        return pixels[(static_cast<std::size_t>(y) * width + x) * channels + c];
    }

    bool same_shape(const ImageBuffer& other) const {
        return height == other.height && width == other.width &&
               channels == other.channels;
    }
};

/// True when every intensity lies in [0,1] and the pixel count matches the
/// declared shape.
bool image_valid(const ImageBuffer& img);

/// Reads an 8-bit grayscale or RGB PNG; intensities are mapped v/255.
/// Throws IoError on missing files, DataError on unsupported formats.
ImageBuffer load_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG. Quantization is round-half-up of v*255, clamped to
/// [0,255], which fixes a bit-exact file contract.
void save_image(const ImageBuffer& img, const std::filesystem::path& path);

/// The byte a unit intensity maps to in save_image.
inline int quantize_intensity(double v) {
    double scaled = std::floor(v * 255.0 + 0.5);
    if (scaled < 0.0) return 0;
    if (scaled > 255.0) return 255;
    return static_cast<int>(scaled);
}

} // namespace cbench
