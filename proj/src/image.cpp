#include "cbench/image.hpp"

#include "cbench/error.hpp"
#include "png_io.hpp"

namespace cbench {

bool image_valid(const ImageBuffer& img) {
    if (img.height <= 0 || img.width <= 0) return false;
    if (img.channels != 1 && img.channels != 3) return false;
    if (img.pixels.size() !=
        static_cast<std::size_t>(img.height) * img.width * img.channels)
        return false;
    for (double v : img.pixels)
        if (!(v >= 0.0 && v <= 1.0)) return false;
    return true;
}

ImageBuffer load_image(const std::filesystem::path& path) {
    png::RawImage raw = png::read_png(path);
    ImageBuffer img(raw.height, raw.width, raw.channels);
    for (std::size_t i = 0; i < raw.bytes.size(); ++i)
        img.pixels[i] = raw.bytes[i] / 255.0;
    return img;
}

void save_image(const ImageBuffer& img, const std::filesystem::path& path) {
    if (img.pixels.size() !=
        static_cast<std::size_t>(img.height) * img.width * img.channels)
        throw DataError("save_image: pixel count does not match shape");
    png::RawImage raw;
    raw.height = img.height;
    raw.width = img.width;
    raw.channels = img.channels;
    raw.bytes.resize(img.pixels.size());
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
        raw.bytes[i] = static_cast<std::uint8_t>(quantize_intensity(img.pixels[i]));
    png::write_png(raw, path);
}

} // namespace cbench
