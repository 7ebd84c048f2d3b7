#pragma once

#include <array>
#include <span>
#include <vector>

#include "cbench/image.hpp"

namespace cbench {

/// Dataset-averaged DCT magnitude grid plus the radial low/high energy
/// split at normalized radius 0.25 (0 = DC, 1 = Nyquist on each axis).
struct FrequencyProfile {
    int height = 0;
    int width = 0;
    std::vector<double> mean_magnitude; // H x W, row-major
    double low_fraction = 0.0;
    double high_fraction = 0.0;
};

/// Pooled 256-bin histogram of intensities over [0,1], normalized to unit
/// mass.
struct DensityHistogram {
    std::array<double, 256> mass{};
};

/// Orthonormal 2-D type-II DCT of a single-channel image; Parseval holds.
std::vector<double> dct2(const ImageBuffer& img);

/// Exact inverse of dct2.
ImageBuffer idct2(std::span<const double> coeffs, int height, int width);

/// Averages channels to luma with equal weights; multi-channel images are
/// reduced before the transform.
ImageBuffer to_luma(const ImageBuffer& img);

/// Radial cutoff separating the low and high bands.
constexpr double kRadialCutoff = 0.25;

FrequencyProfile frequency_profile(std::span<const ImageBuffer> imgs);
DensityHistogram pixel_histogram(std::span<const ImageBuffer> imgs);

} // namespace cbench
