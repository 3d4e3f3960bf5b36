#include "pht/preprocess/png_io.hpp"

#include <png.h>

#include <csetjmp>
#include <cstring>

#include "pht/common/errors.hpp"

namespace pht::preprocess {

namespace {

struct ReadCursor {
    std::span<const std::uint8_t> bytes;
    std::size_t pos = 0;
};

void read_callback(png_structp png, png_bytep out, png_size_t count) {
    auto* cur = static_cast<ReadCursor*>(png_get_io_ptr(png));
    if (cur->pos + count > cur->bytes.size()) {
        png_error(png, "truncated PNG stream");
    }
    std::memcpy(out, cur->bytes.data() + cur->pos, count);
    cur->pos += count;
}

void write_callback(png_structp png, png_bytep data, png_size_t count) {
    auto* out = static_cast<std::vector<std::uint8_t>*>(png_get_io_ptr(png));
    out->insert(out->end(), data, data + count);
}

void flush_callback(png_structp) {}

} // namespace

std::vector<std::uint8_t> encode_png(const RawImage& image) {
    image.validate();
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_write_struct(&png, nullptr);
        throw DataError("png_create_info_struct failed");
    }

    std::vector<std::uint8_t> out;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw DataError("PNG encode failed");
    }
    png_set_write_fn(png, &out, write_callback, flush_callback);
    png_set_IHDR(png, info, image.width, image.height, 8, PNG_COLOR_TYPE_RGB,
                 PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::uint32_t y = 0; y < image.height; ++y) {
        png_write_row(png, const_cast<png_bytep>(
            &image.data[std::size_t{y} * image.width * RawImage::kChannels]));
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

RawImage decode_png(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0) {
        throw DataError("blob is not a PNG image");
    }
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!png) throw DataError("png_create_read_struct failed");
    png_infop info = png_create_info_struct(png);
    if (!info) {
        png_destroy_read_struct(&png, nullptr, nullptr);
        throw DataError("png_create_info_struct failed");
    }

    ReadCursor cursor{bytes, 0};
    std::vector<png_bytep> rows;
    RawImage image;
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("PNG decode failed");
    }
    png_set_read_fn(png, &cursor, read_callback);
    png_read_info(png, info);

    // Normalize anything libpng can hand us into 8-bit RGB.
    png_set_palette_to_rgb(png);
    png_set_expand_gray_1_2_4_to_8(png);
    png_set_gray_to_rgb(png);
    png_set_strip_alpha(png);
    png_set_strip_16(png);
    png_read_update_info(png, info);

    image.width = png_get_image_width(png, info);
    image.height = png_get_image_height(png, info);
    if (png_get_channels(png, info) != RawImage::kChannels) {
        png_destroy_read_struct(&png, &info, nullptr);
        throw DataError("PNG did not normalize to RGB");
    }
    image.data.resize(std::size_t{image.width} * image.height * RawImage::kChannels);
    rows.resize(image.height);
    for (std::uint32_t y = 0; y < image.height; ++y) {
        rows[y] = &image.data[std::size_t{y} * image.width * RawImage::kChannels];
    }
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return image;
}

} // namespace pht::preprocess
