#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

namespace cbench::png {

struct RawImage {
    int height = 0;
    int width = 0;
    int channels = 0; // 1 = grayscale, 3 = RGB
    std::vector<std::uint8_t> bytes; // row-major, channels interleaved
};

/// Decodes an 8-bit grayscale or RGB PNG. Rejects palette, alpha, 16-bit
/// and interlaced files with DataError.
RawImage read_png(const std::filesystem::path& path);

/// Writes an 8-bit PNG (color type 0 or 2, filter None on every row).
void write_png(const RawImage& img, const std::filesystem::path& path);

} // namespace cbench::png
