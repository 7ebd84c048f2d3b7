#include "png_io.hpp"

#include <cstring>
#include <fstream>

#include <zlib.h>

#include "cbench/error.hpp"

namespace cbench::png {

namespace {

constexpr std::uint8_t kSignature[8] = {137, 80, 78, 71, 13, 10, 26, 10};

std::uint32_t read_be32(const std::uint8_t* p) {
    return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
           (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> zlib_inflate(const std::vector<std::uint8_t>& in,
                                       std::size_t expected) {
    std::vector<std::uint8_t> out(expected);
    z_stream zs{};
    if (inflateInit(&zs) != Z_OK) throw DataError("png: inflateInit failed");
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != expected)
        throw DataError("png: corrupt or truncated image data");
    return out;
}

std::vector<std::uint8_t> zlib_deflate(const std::vector<std::uint8_t>& in) {
    z_stream zs{};
    if (deflateInit(&zs, 6) != Z_OK) throw IoError("png: deflateInit failed");
    std::vector<std::uint8_t> out(deflateBound(&zs, static_cast<uLong>(in.size())));
    zs.next_in = const_cast<Bytef*>(in.data());
    zs.avail_in = static_cast<uInt>(in.size());
    zs.next_out = out.data();
    zs.avail_out = static_cast<uInt>(out.size());
    int rc = deflate(&zs, Z_FINISH);
    deflateEnd(&zs);
    if (rc != Z_STREAM_END) throw IoError("png: deflate failed");
    out.resize(zs.total_out);
    return out;
}

int paeth(int a, int b, int c) {
    int p = a + b - c;
    int pa = std::abs(p - a), pb = std::abs(p - b), pc = std::abs(p - c);
    if (pa <= pb && pa <= pc) return a;
    if (pb <= pc) return b;
    return c;
}

// Reverses the PNG row filters in place, producing raw scanlines.
void unfilter(std::vector<std::uint8_t>& data, int height, int stride, int bpp) {
    std::vector<std::uint8_t> prev(static_cast<std::size_t>(stride), 0);
    for (int y = 0; y < height; ++y) {
        std::uint8_t* row = data.data() + static_cast<std::size_t>(y) * (stride + 1);
        int filter = row[0];
        std::uint8_t* cur = row + 1;
        switch (filter) {
            case 0:
                break;
            case 1:
                for (int i = bpp; i < stride; ++i) cur[i] = static_cast<std::uint8_t>(cur[i] + cur[i - bpp]);
                break;
            case 2:
                for (int i = 0; i < stride; ++i) cur[i] = static_cast<std::uint8_t>(cur[i] + prev[i]);
                break;
            case 3:
                for (int i = 0; i < stride; ++i) {
                    int left = i >= bpp ? cur[i - bpp] : 0;
                    cur[i] = static_cast<std::uint8_t>(cur[i] + ((left + prev[i]) >> 1));
                }
                break;
            case 4:
                for (int i = 0; i < stride; ++i) {
                    int left = i >= bpp ? cur[i - bpp] : 0;
                    int upleft = i >= bpp ? prev[i - bpp] : 0;
                    cur[i] = static_cast<std::uint8_t>(cur[i] + paeth(left, prev[i], upleft));
                }
                break;
            default:
                throw DataError("png: unknown filter type " + std::to_string(filter));
        }
        std::memcpy(prev.data(), cur, static_cast<std::size_t>(stride));
    }
}

} // namespace

RawImage read_png(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> file((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());
    if (file.size() < 8 || std::memcmp(file.data(), kSignature, 8) != 0)
        throw DataError(path.string() + ": not a PNG file");

    RawImage img;
    int bit_depth = 0, color_type = -1;
    bool seen_ihdr = false, seen_iend = false;
    std::vector<std::uint8_t> idat;

    std::size_t pos = 8;
    while (pos + 8 <= file.size() && !seen_iend) {
        std::uint32_t len = read_be32(file.data() + pos);
        if (pos + 12 + len > file.size())
            throw DataError(path.string() + ": truncated chunk");
        const char* type = reinterpret_cast<const char*>(file.data() + pos + 4);
        const std::uint8_t* payload = file.data() + pos + 8;
        if (std::memcmp(type, "IHDR", 4) == 0) {
            if (len != 13) throw DataError(path.string() + ": bad IHDR");
            img.width = static_cast<int>(read_be32(payload));
            img.height = static_cast<int>(read_be32(payload + 4));
            bit_depth = payload[8];
            color_type = payload[9];
            if (payload[12] != 0)
                throw DataError(path.string() + ": interlaced PNG not supported");
            seen_ihdr = true;
        } else if (std::memcmp(type, "IDAT", 4) == 0) {
            idat.insert(idat.end(), payload, payload + len);
        } else if (std::memcmp(type, "IEND", 4) == 0) {
            seen_iend = true;
        }
        pos += 12 + len;
    }
    if (!seen_ihdr || img.width <= 0 || img.height <= 0)
        throw DataError(path.string() + ": missing or invalid IHDR");
    if (bit_depth != 8)
        throw DataError(path.string() + ": only 8-bit PNGs supported, got depth " +
                        std::to_string(bit_depth));
    if (color_type == 0) img.channels = 1;
    else if (color_type == 2) img.channels = 3;
    else
        throw DataError(path.string() + ": only grayscale and RGB supported, got color type " +
                        std::to_string(color_type));

    int stride = img.width * img.channels;
    std::size_t raw_size = static_cast<std::size_t>(img.height) * (stride + 1);
    auto raw = zlib_inflate(idat, raw_size);
    unfilter(raw, img.height, stride, img.channels);

    img.bytes.resize(static_cast<std::size_t>(img.height) * stride);
    for (int y = 0; y < img.height; ++y) {
        std::memcpy(img.bytes.data() + static_cast<std::size_t>(y) * stride,
                    raw.data() + static_cast<std::size_t>(y) * (stride + 1) + 1,
                    static_cast<std::size_t>(stride));
    }
    return img;
}

void write_png(const RawImage& img, const std::filesystem::path& path) {
    if (img.channels != 1 && img.channels != 3)
        throw DataError("png: channel count must be 1 or 3");
    int stride = img.width * img.channels;

    std::vector<std::uint8_t> raw;
    raw.reserve(static_cast<std::size_t>(img.height) * (stride + 1));
    for (int y = 0; y < img.height; ++y) {
        raw.push_back(0); // filter None
        const std::uint8_t* row = img.bytes.data() + static_cast<std::size_t>(y) * stride;
        raw.insert(raw.end(), row, row + stride);
    }
    auto compressed = zlib_deflate(raw);

    std::vector<std::uint8_t> out(kSignature, kSignature + 8);
    auto chunk = [&out](const char* type, const std::vector<std::uint8_t>& payload) {
        put_be32(out, static_cast<std::uint32_t>(payload.size()));
        std::size_t start = out.size();
        out.insert(out.end(), type, type + 4);
        out.insert(out.end(), payload.begin(), payload.end());
        std::uint32_t crc = static_cast<std::uint32_t>(
            crc32(0, out.data() + start, static_cast<uInt>(out.size() - start)));
        put_be32(out, crc);
    };

    std::vector<std::uint8_t> ihdr;
    put_be32(ihdr, static_cast<std::uint32_t>(img.width));
    put_be32(ihdr, static_cast<std::uint32_t>(img.height));
    ihdr.push_back(8);                                            // bit depth
    ihdr.push_back(img.channels == 1 ? 0 : 2);                    // color type
    ihdr.push_back(0);                                            // compression
    ihdr.push_back(0);                                            // filter
    ihdr.push_back(0);                                            // interlace
    chunk("IHDR", ihdr);
    chunk("IDAT", compressed);
    chunk("IEND", {});

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(out.data()),
            static_cast<std::streamsize>(out.size()));
    if (!f) throw IoError("short write to " + path.string());
}

} // namespace cbench::png
