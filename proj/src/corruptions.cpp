#include "cbench/corruptions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "cbench/error.hpp"
#include "cbench/rng.hpp"

namespace cbench {

namespace {

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

void check_severity(int severity) {
    if (severity < 1 || severity > 5)
        throw DataError("severity must be in [1,5], got " + std::to_string(severity));
}

int reflect_index(int i, int n) {
    // mirror padding with edge duplication: dcba|abcd|dcba
    while (i < 0 || i >= n) {
        if (i < 0) i = -1 - i;
        if (i >= n) i = 2 * n - 1 - i;
    }
    return i;
}

double bilinear(const ImageBuffer& img, double fy, double fx, int c) {
    int y0 = static_cast<int>(std::floor(fy));
    int x0 = static_cast<int>(std::floor(fx));
    double wy = fy - y0;
    double wx = fx - x0;
    auto cy = [&](int y) { return std::clamp(y, 0, img.height - 1); };
    auto cx = [&](int x) { return std::clamp(x, 0, img.width - 1); };
    double v00 = img.at(cy(y0), cx(x0), c);
    double v01 = img.at(cy(y0), cx(x0 + 1), c);
    double v10 = img.at(cy(y0 + 1), cx(x0), c);
    double v11 = img.at(cy(y0 + 1), cx(x0 + 1), c);
    return (1 - wy) * ((1 - wx) * v00 + wx * v01) + wy * ((1 - wx) * v10 + wx * v11);
}

} // namespace

const char* kind_name(CorruptionKind kind) {
    switch (kind) {
        case CorruptionKind::gaussian_noise: return "gaussian_noise";
        case CorruptionKind::impulse_noise: return "impulse_noise";
        case CorruptionKind::motion_blur: return "motion_blur";
        case CorruptionKind::zoom_blur: return "zoom_blur";
        case CorruptionKind::brightness: return "brightness";
        case CorruptionKind::contrast: return "contrast";
        case CorruptionKind::pixelate: return "pixelate";
        case CorruptionKind::block_jpeg: return "block_jpeg";
    }
    return "unknown";
}

std::optional<CorruptionKind> kind_from_name(std::string_view name) {
    for (auto kind : kBenchmarkKinds)
        if (name == kind_name(kind)) return kind;
    if (name == "block_jpeg") return CorruptionKind::block_jpeg;
    return std::nullopt;
}

ImageBuffer apply_gaussian_noise(const ImageBuffer& img, int severity, std::uint64_t seed) {
    check_severity(severity);
    double sigma = SeverityTables::gaussian_sigma[severity - 1];
    CounterRng rng(seed);
    ImageBuffer out = img;
    for (std::size_t i = 0; i < out.pixels.size(); ++i)
        out.pixels[i] = clamp01(out.pixels[i] + sigma * rng.normal(i));
    return out;
}

ImageBuffer apply_impulse_noise(const ImageBuffer& img, int severity, std::uint64_t seed) {
    check_severity(severity);
    double fraction = SeverityTables::impulse_fraction[severity - 1];
    std::size_t n = static_cast<std::size_t>(img.height) * img.width;
    std::size_t count = static_cast<std::size_t>(
        std::llround(fraction * static_cast<double>(n)));
    count = std::min(count, n);

    // partial Fisher-Yates: the first `count` entries are a uniform draw
    // without replacement
    std::vector<std::uint32_t> positions(n);
    std::iota(positions.begin(), positions.end(), 0u);
    CounterRng rng(seed);
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t j = i + static_cast<std::size_t>(rng.below(i, n - i));
        std::swap(positions[i], positions[j]);
    }

    ImageBuffer out = img;
    constexpr std::uint64_t kValueStream = 1ull << 32;
    for (std::size_t i = 0; i < count; ++i) {
        double v = rng.uniform(kValueStream + i) < 0.5 ? 0.0 : 1.0;
        std::size_t base = static_cast<std::size_t>(positions[i]) * img.channels;
        for (int c = 0; c < img.channels; ++c) out.pixels[base + c] = v;
    }
    return out;
}

ImageBuffer apply_motion_blur(const ImageBuffer& img, int severity, std::uint64_t seed) {
    check_severity(severity);
    int length = SeverityTables::motion_length[severity - 1];
    CounterRng rng(seed);
    double angle = rng.uniform(0) * 3.14159265358979323846;
    double dx = std::cos(angle);
    double dy = std::sin(angle);

    // Discrete line kernel: exactly `length` distinct integer offsets along
    // the major axis, weight 1/length each.
    int half = length / 2;
    std::vector<std::pair<int, int>> offsets; // (dy, dx)
    offsets.reserve(length);
    if (std::abs(dx) >= std::abs(dy)) {
        double slope = dy / dx;
        for (int m = -half; m <= half; ++m)
            offsets.emplace_back(static_cast<int>(std::llround(m * slope)), m);
    } else {
        double slope = dx / dy;
        for (int m = -half; m <= half; ++m)
            offsets.emplace_back(m, static_cast<int>(std::llround(m * slope)));
    }

    ImageBuffer out(img.height, img.width, img.channels);
    double w = 1.0 / length;
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (auto [oy, ox] : offsets)
                    acc += img.at(reflect_index(y + oy, img.height),
                                  reflect_index(x + ox, img.width), c);
                out.at(y, x, c) = clamp01(acc * w);
            }
        }
    return out;
}

int zoom_term_count(int severity) {
    check_severity(severity);
    double zoom_max = SeverityTables::zoom_max[severity - 1];
    return static_cast<int>(std::llround((zoom_max - 1.0) * 100.0)) + 1;
}

ImageBuffer apply_zoom_blur(const ImageBuffer& img, int severity, std::uint64_t) {
    check_severity(severity);
    int terms = zoom_term_count(severity);
    double cy = (img.height - 1) / 2.0;
    double cx = (img.width - 1) / 2.0;

    ImageBuffer acc(img.height, img.width, img.channels);
    for (int j = 0; j < terms; ++j) {
        double z = 1.0 + j / 100.0;
        for (int y = 0; y < img.height; ++y)
            for (int x = 0; x < img.width; ++x) {
                double sy = (y - cy) / z + cy;
                double sx = (x - cx) / z + cx;
                for (int c = 0; c < img.channels; ++c)
                    acc.at(y, x, c) += bilinear(img, sy, sx, c);
            }
    }
    for (double& v : acc.pixels) v = clamp01(v / terms);
    return acc;
}

ImageBuffer apply_brightness(const ImageBuffer& img, int severity, std::uint64_t) {
    check_severity(severity);
    double delta = SeverityTables::brightness_delta[severity - 1];
    ImageBuffer out = img;
    for (double& v : out.pixels) v = clamp01(v + delta);
    return out;
}

ImageBuffer apply_contrast(const ImageBuffer& img, int severity, std::uint64_t) {
    check_severity(severity);
    double scale = SeverityTables::contrast_scale[severity - 1];
    std::vector<double> mean(img.channels, 0.0);
    std::size_t n = static_cast<std::size_t>(img.height) * img.width;
    for (std::size_t p = 0; p < n; ++p)
        for (int c = 0; c < img.channels; ++c)
            mean[c] += img.pixels[p * img.channels + c];
    for (double& m : mean) m /= static_cast<double>(n);

    ImageBuffer out = img;
    for (std::size_t p = 0; p < n; ++p)
        for (int c = 0; c < img.channels; ++c) {
            double& v = out.pixels[p * img.channels + c];
            v = clamp01((v - mean[c]) * scale + mean[c]);
        }
    return out;
}

ImageBuffer apply_pixelate(const ImageBuffer& img, int severity, std::uint64_t) {
    check_severity(severity);
    double fraction = SeverityTables::pixelate_fraction[severity - 1];
    int h2 = static_cast<int>(std::ceil(fraction * img.height));
    int w2 = static_cast<int>(std::ceil(fraction * img.width));
    h2 = std::max(1, h2);
    w2 = std::max(1, w2);

    // box downscale over the partition the nearest-neighbor upscale inverts:
    // cell ty holds exactly the rows y with floor(y*h2/H) == ty
    auto cell_begin = [](int t, int full, int reduced) {
        return (t * full + reduced - 1) / reduced;
    };
    ImageBuffer small(h2, w2, img.channels);
    for (int ty = 0; ty < h2; ++ty) {
        int y0 = cell_begin(ty, img.height, h2);
        int y1 = cell_begin(ty + 1, img.height, h2);
        for (int tx = 0; tx < w2; ++tx) {
            int x0 = cell_begin(tx, img.width, w2);
            int x1 = cell_begin(tx + 1, img.width, w2);
            for (int c = 0; c < img.channels; ++c) {
                double acc = 0.0;
                for (int y = y0; y < y1; ++y)
                    for (int x = x0; x < x1; ++x) acc += img.at(y, x, c);
                small.at(ty, tx, c) = acc / ((y1 - y0) * (x1 - x0));
            }
        }
    }

    // nearest-neighbor upscale
    ImageBuffer out(img.height, img.width, img.channels);
    for (int y = 0; y < img.height; ++y) {
        int ty = y * h2 / img.height;
        for (int x = 0; x < img.width; ++x) {
            int tx = x * w2 / img.width;
            for (int c = 0; c < img.channels; ++c)
                out.at(y, x, c) = small.at(ty, tx, c);
        }
    }
    return out;
}

namespace {

// Standard JPEG luminance quantization table, scaled by quality the way
// libjpeg does. Quantization rounds half away from zero; the reconstruction
// error of any coefficient is bounded by half its step.
constexpr int kLuminanceTable[64] = {
    16, 11, 10, 16, 24,  40,  51,  61,  //
    12, 12, 14, 19, 26,  58,  60,  55,  //
    14, 13, 16, 24, 40,  57,  69,  56,  //
    14, 17, 22, 29, 51,  87,  80,  62,  //
    18, 22, 37, 56, 68,  109, 103, 77,  //
    24, 35, 55, 64, 81,  104, 113, 92,  //
    49, 64, 78, 87, 103, 121, 120, 101, //
    72, 92, 95, 98, 112, 100, 103, 99,
};

struct Dct8 {
    double m[8][8]; // orthonormal DCT-II matrix
    Dct8() {
        for (int k = 0; k < 8; ++k) {
            double a = k == 0 ? std::sqrt(1.0 / 8.0) : std::sqrt(2.0 / 8.0);
            for (int n = 0; n < 8; ++n)
                m[k][n] = a * std::cos((2 * n + 1) * k * 3.14159265358979323846 / 16.0);
        }
    }
};

} // namespace

ImageBuffer apply_block_jpeg_quality(const ImageBuffer& img, int quality) {
    if (quality < 1 || quality > 100)
        throw DataError("quality must lie in [1,100]");
    double scale = quality < 50 ? 5000.0 / quality : 200.0 - 2.0 * quality;
    double steps[64];
    for (int i = 0; i < 64; ++i) {
        double q = std::floor((kLuminanceTable[i] * scale + 50.0) / 100.0);
        steps[i] = std::clamp(q, 1.0, 255.0);
    }

    static const Dct8 dct;
    ImageBuffer out = img;
    int bh = (img.height + 7) / 8;
    int bw = (img.width + 7) / 8;
    for (int c = 0; c < img.channels; ++c)
        for (int by = 0; by < bh; ++by)
            for (int bx = 0; bx < bw; ++bx) {
                double block[8][8];
                for (int y = 0; y < 8; ++y)
                    for (int x = 0; x < 8; ++x) {
                        int sy = std::min(by * 8 + y, img.height - 1);
                        int sx = std::min(bx * 8 + x, img.width - 1);
                        block[y][x] = img.at(sy, sx, c) * 255.0 - 128.0;
                    }
                // 2-D DCT: rows then columns
                double t[8][8], coeff[8][8];
                for (int y = 0; y < 8; ++y)
                    for (int k = 0; k < 8; ++k) {
                        double s = 0;
                        for (int x = 0; x < 8; ++x) s += dct.m[k][x] * block[y][x];
                        t[y][k] = s;
                    }
                for (int k = 0; k < 8; ++k)
                    for (int u = 0; u < 8; ++u) {
                        double s = 0;
                        for (int y = 0; y < 8; ++y) s += dct.m[u][y] * t[y][k];
                        double q = steps[u * 8 + k];
                        double r = s / q;
                        coeff[u][k] = (r < 0 ? -std::floor(-r + 0.5) : std::floor(r + 0.5)) * q;
                    }
                // inverse
                for (int y = 0; y < 8; ++y)
                    for (int k = 0; k < 8; ++k) {
                        double s = 0;
                        for (int u = 0; u < 8; ++u) s += dct.m[u][y] * coeff[u][k];
                        t[y][k] = s;
                    }
                for (int y = 0; y < 8; ++y)
                    for (int x = 0; x < 8; ++x) {
                        int sy = by * 8 + y;
                        int sx = bx * 8 + x;
                        if (sy >= img.height || sx >= img.width) continue;
                        double s = 0;
                        for (int k = 0; k < 8; ++k) s += dct.m[k][x] * t[y][k];
                        out.at(sy, sx, c) = clamp01((s + 128.0) / 255.0);
                    }
            }
    return out;
}

ImageBuffer apply_block_jpeg(const ImageBuffer& img, int severity, std::uint64_t) {
    check_severity(severity);
    return apply_block_jpeg_quality(img, SeverityTables::jpeg_quality[severity - 1]);
}

ImageBuffer apply_corruption(const ImageBuffer& img, const CorruptionSpec& spec) {
    switch (spec.kind) {
        case CorruptionKind::gaussian_noise:
            return apply_gaussian_noise(img, spec.severity, spec.seed);
        case CorruptionKind::impulse_noise:
            return apply_impulse_noise(img, spec.severity, spec.seed);
        case CorruptionKind::motion_blur:
            return apply_motion_blur(img, spec.severity, spec.seed);
        case CorruptionKind::zoom_blur:
            return apply_zoom_blur(img, spec.severity, spec.seed);
        case CorruptionKind::brightness:
            return apply_brightness(img, spec.severity, spec.seed);
        case CorruptionKind::contrast:
            return apply_contrast(img, spec.severity, spec.seed);
        case CorruptionKind::pixelate:
            return apply_pixelate(img, spec.severity, spec.seed);
        case CorruptionKind::block_jpeg:
            return apply_block_jpeg(img, spec.severity, spec.seed);
    }
    throw DataError("unknown corruption kind");
}

} // namespace cbench
