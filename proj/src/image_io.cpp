#include "lesion/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "lesion/error.hpp"

namespace lesion {

namespace fs = std::filesystem;

namespace {

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open image '" + path.string() + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string lower_ext(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
    return ext;
}

RasterImage decode_png(const std::vector<std::uint8_t>& bytes, const fs::path& path) {
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
        throw DataError("invalid PNG '" + path.string() + "': " + image.message);
    }
    const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
    image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    const int channels = color ? 3 : 1;
    std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
    if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
        const std::string msg = image.message;
        png_image_free(&image);
        throw DataError("cannot decode PNG '" + path.string() + "': " + msg);
    }
    return RasterImage(static_cast<int>(image.width), static_cast<int>(image.height), channels, std::move(data));
}

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t off) {
    return static_cast<std::uint32_t>(b[off]) | (static_cast<std::uint32_t>(b[off + 1]) << 8) |
           (static_cast<std::uint32_t>(b[off + 2]) << 16) | (static_cast<std::uint32_t>(b[off + 3]) << 24);
}
std::uint16_t le16(const std::vector<std::uint8_t>& b, std::size_t off) {
    return static_cast<std::uint16_t>(b[off] | (b[off + 1] << 8));
}

RasterImage decode_bmp(const std::vector<std::uint8_t>& b, const fs::path& path) {
    auto fail = [&](const std::string& why) { return DataError("unsupported BMP '" + path.string() + "': " + why); };
    if (b.size() < 54) {
        throw fail("truncated header");
    }
    const std::uint32_t pixel_off = le32(b, 10);
    const std::uint32_t header_size = le32(b, 14);
    const auto width = static_cast<std::int32_t>(le32(b, 18));
    const auto raw_height = static_cast<std::int32_t>(le32(b, 22));
    const std::uint16_t bpp = le16(b, 28);
    const std::uint32_t compression = le32(b, 30);
    std::uint32_t colors_used = le32(b, 46);
    if (width <= 0 || raw_height == 0) {
        throw fail("bad dimensions");
    }
    if (compression != 0 && !(compression == 3 && bpp == 32)) {
        throw fail("compressed data");
    }
    const bool top_down = raw_height < 0;
    const int height = top_down ? -raw_height : raw_height;

    std::vector<std::array<std::uint8_t, 3>> palette;
    if (bpp <= 8) {
        if (colors_used == 0) {
            colors_used = 1u << bpp;
        }
        const std::size_t pal_off = 14 + header_size;
        if (pal_off + 4 * static_cast<std::size_t>(colors_used) > b.size()) {
            throw fail("truncated palette");
        }
        for (std::uint32_t i = 0; i < colors_used; ++i) {
            const std::size_t o = pal_off + 4 * static_cast<std::size_t>(i);
            palette.push_back({b[o + 2], b[o + 1], b[o]});
        }
    } else if (bpp != 24 && bpp != 32) {
        throw fail("bit depth " + std::to_string(bpp));
    }

    const bool gray = !palette.empty() && std::all_of(palette.begin(), palette.end(), [](const auto& c) {
        return c[0] == c[1] && c[1] == c[2];
    });
    const int channels = gray ? 1 : 3;
    const std::size_t stride = ((static_cast<std::size_t>(width) * bpp + 31) / 32) * 4;
    if (pixel_off + stride * static_cast<std::size_t>(height) > b.size()) {
        throw fail("truncated pixel data");
    }

    RasterImage img(width, height, channels);
    for (int row = 0; row < height; ++row) {
        const int y = top_down ? row : height - 1 - row;
        const std::uint8_t* src = b.data() + pixel_off + stride * static_cast<std::size_t>(row);
        for (int x = 0; x < width; ++x) {
            std::array<std::uint8_t, 3> rgb{};
            if (bpp <= 8) {
                const std::size_t bit = static_cast<std::size_t>(x) * bpp;
                const unsigned byte = src[bit / 8];
                const unsigned shift = 8 - bpp - static_cast<unsigned>(bit % 8);
                const unsigned idx = (byte >> shift) & ((1u << bpp) - 1u);
                if (idx >= palette.size()) {
                    throw fail("palette index out of range");
                }
                rgb = palette[idx];
            } else {
                const std::size_t o = static_cast<std::size_t>(x) * (bpp / 8);
                rgb = {src[o + 2], src[o + 1], src[o]};
            }
            if (channels == 1) {
                img.at(x, y) = rgb[0];
            } else {
                img.at(x, y, 0) = rgb[0];
                img.at(x, y, 1) = rgb[1];
                img.at(x, y, 2) = rgb[2];
            }
        }
    }
    return img;
}

void put32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::uint8_t>((v >> (8 * i)) & 0xFF));
    }
}
void put16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

std::vector<std::uint8_t> encode_bmp(const RasterImage& img) {
    const bool gray = img.channels() == 1;
    const std::uint16_t bpp = gray ? 8 : 24;
    const std::uint32_t palette_bytes = gray ? 256 * 4 : 0;
    const std::size_t stride = ((static_cast<std::size_t>(img.width()) * bpp + 31) / 32) * 4;
    const std::uint32_t pixel_off = 14 + 40 + palette_bytes;
    const auto data_size = static_cast<std::uint32_t>(stride * img.height());

    std::vector<std::uint8_t> out;
    out.reserve(pixel_off + data_size);
    out.push_back('B');
    out.push_back('M');
    put32(out, pixel_off + data_size);
    put32(out, 0);
    put32(out, pixel_off);
    put32(out, 40);
    put32(out, static_cast<std::uint32_t>(img.width()));
    put32(out, static_cast<std::uint32_t>(img.height()));
    put16(out, 1);
    put16(out, bpp);
    put32(out, 0);
    put32(out, data_size);
    put32(out, 2835);
    put32(out, 2835);
    put32(out, gray ? 256 : 0);
    put32(out, 0);
    if (gray) {
        for (int i = 0; i < 256; ++i) {
            const auto v = static_cast<std::uint8_t>(i);
            out.insert(out.end(), {v, v, v, 0});
        }
    }
    for (int y = img.height() - 1; y >= 0; --y) {
        const std::size_t row_start = out.size();
        for (int x = 0; x < img.width(); ++x) {
            if (gray) {
                out.push_back(img.at(x, y));
            } else {
                out.insert(out.end(), {img.at(x, y, 2), img.at(x, y, 1), img.at(x, y, 0)});
            }
        }
        out.resize(row_start + stride, 0);
    }
    return out;
}

}  // namespace

RasterImage load_image(const fs::path& path) {
    const auto bytes = read_bytes(path);
    static constexpr std::array<std::uint8_t, 8> png_sig{0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};
    if (bytes.size() >= 8 && std::equal(png_sig.begin(), png_sig.end(), bytes.begin())) {
        return decode_png(bytes, path);
    }
    if (bytes.size() >= 2 && bytes[0] == 'B' && bytes[1] == 'M') {
        return decode_bmp(bytes, path);
    }
    throw DataError("unrecognized image format '" + path.string() + "' (PNG or BMP expected)");
}

void save_image(const RasterImage& img, const fs::path& path) {
    const std::string ext = lower_ext(path);
    if (ext == ".bmp") {
        const auto bytes = encode_bmp(img);
        std::ofstream out(path, std::ios::binary);
        if (!out) {
            throw DataError("cannot write '" + path.string() + "'");
        }
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        return;
    }
    if (ext != ".png") {
        throw DataError("unsupported output extension '" + ext + "'");
    }
    png_image image;
    std::memset(&image, 0, sizeof(image));
    image.version = PNG_IMAGE_VERSION;
    image.width = static_cast<png_uint_32>(img.width());
    image.height = static_cast<png_uint_32>(img.height());
    image.format = img.channels() == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
    if (!png_image_write_to_file(&image, path.string().c_str(), 0, img.data().data(), 0, nullptr)) {
        throw DataError("cannot write PNG '" + path.string() + "': " + image.message);
    }
}

BinaryMask load_mask(const fs::path& path) { return image_to_mask(to_grayscale(load_image(path))); }

void save_mask(const BinaryMask& m, const fs::path& path) { save_image(mask_to_image(m), path); }

}  // namespace lesion
