#include "cbench/analysis.hpp"

#include <cmath>

#include "cbench/error.hpp"

namespace cbench {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 1-D orthonormal DCT-II basis matrix for length n, cached per size.
std::vector<double> dct_matrix(int n) {
    std::vector<double> m(static_cast<std::size_t>(n) * n);
    for (int k = 0; k < n; ++k) {
        double a = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
        for (int i = 0; i < n; ++i)
            m[static_cast<std::size_t>(k) * n + i] =
                a * std::cos((2 * i + 1) * k * kPi / (2.0 * n));
    }
    return m;
}

} // namespace

ImageBuffer to_luma(const ImageBuffer& img) {
    if (img.channels == 1) return img;
    ImageBuffer out(img.height, img.width, 1);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) {
            double s = 0.0;
            for (int c = 0; c < img.channels; ++c) s += img.at(y, x, c);
            out.at(y, x, 0) = s / img.channels;
        }
    return out;
}

std::vector<double> dct2(const ImageBuffer& img) {
    if (img.channels != 1)
        throw DataError("dct2 expects a single-channel image");
    int h = img.height, w = img.width;
    auto mh = dct_matrix(h);
    auto mw = dct_matrix(w);

    // rows
    std::vector<double> t(static_cast<std::size_t>(h) * w);
    for (int y = 0; y < h; ++y)
        for (int k = 0; k < w; ++k) {
            double s = 0.0;
            for (int x = 0; x < w; ++x)
                s += mw[static_cast<std::size_t>(k) * w + x] * img.at(y, x, 0);
            t[static_cast<std::size_t>(y) * w + k] = s;
        }
    // columns
    std::vector<double> out(static_cast<std::size_t>(h) * w);
    for (int u = 0; u < h; ++u)
        for (int k = 0; k < w; ++k) {
            double s = 0.0;
            for (int y = 0; y < h; ++y)
                s += mh[static_cast<std::size_t>(u) * h + y] *
                     t[static_cast<std::size_t>(y) * w + k];
            out[static_cast<std::size_t>(u) * w + k] = s;
        }
    return out;
}

ImageBuffer idct2(std::span<const double> coeffs, int height, int width) {
    if (coeffs.size() != static_cast<std::size_t>(height) * width)
        throw DataError("idct2: coefficient count does not match shape");
    auto mh = dct_matrix(height);
    auto mw = dct_matrix(width);

    // transpose applications of the orthonormal matrices
    std::vector<double> t(coeffs.size());
    for (int y = 0; y < height; ++y)
        for (int k = 0; k < width; ++k) {
            double s = 0.0;
            for (int u = 0; u < height; ++u)
                s += mh[static_cast<std::size_t>(u) * height + y] *
                     coeffs[static_cast<std::size_t>(u) * width + k];
            t[static_cast<std::size_t>(y) * width + k] = s;
        }
    ImageBuffer out(height, width, 1);
    for (int y = 0; y < height; ++y)
        for (int x = 0; x < width; ++x) {
            double s = 0.0;
            for (int k = 0; k < width; ++k)
                s += mw[static_cast<std::size_t>(k) * width + x] *
                     t[static_cast<std::size_t>(y) * width + k];
            out.at(y, x, 0) = s;
        }
    return out;
}

FrequencyProfile frequency_profile(std::span<const ImageBuffer> imgs) {
    if (imgs.empty()) throw DataError("frequency_profile: empty image list");
    int h = imgs[0].height, w = imgs[0].width;
    for (const auto& img : imgs)
        if (img.height != h || img.width != w)
            throw DataError("frequency_profile: images differ in size");

    FrequencyProfile profile;
    profile.height = h;
    profile.width = w;
    profile.mean_magnitude.assign(static_cast<std::size_t>(h) * w, 0.0);
    for (const auto& img : imgs) {
        auto coeffs = dct2(to_luma(img));
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            profile.mean_magnitude[i] += std::abs(coeffs[i]);
    }
    for (double& v : profile.mean_magnitude) v /= static_cast<double>(imgs.size());

    double low = 0.0, high = 0.0;
    for (int u = 0; u < h; ++u)
        for (int k = 0; k < w; ++k) {
            double fu = h > 1 ? static_cast<double>(u) / (h - 1) : 0.0;
            double fv = w > 1 ? static_cast<double>(k) / (w - 1) : 0.0;
            double e = profile.mean_magnitude[static_cast<std::size_t>(u) * w + k];
            e *= e;
            if (std::sqrt(fu * fu + fv * fv) < kRadialCutoff)
                low += e;
            else
                high += e;
        }
    double total = low + high;
    if (total <= 0.0) {
        profile.low_fraction = 1.0;
        profile.high_fraction = 0.0;
    } else {
        profile.low_fraction = low / total;
        profile.high_fraction = high / total;
    }
    return profile;
}

DensityHistogram pixel_histogram(std::span<const ImageBuffer> imgs) {
    if (imgs.empty()) throw DataError("pixel_histogram: empty image list");
    DensityHistogram hist;
    std::size_t n = 0;
    for (const auto& img : imgs) {
        for (double v : img.pixels) {
            int bin = static_cast<int>(v * 256.0);
            if (bin > 255) bin = 255;
            if (bin < 0) bin = 0;
            hist.mass[bin] += 1.0;
        }
        n += img.pixels.size();
    }
    for (double& m : hist.mass) m /= static_cast<double>(n);
    return hist;
}

} // namespace cbench
