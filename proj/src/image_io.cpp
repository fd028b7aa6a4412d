#include "synthforge/image_io.hpp"

#include <png.h>

#include <cstdio>
#include <memory>
#include <vector>

#include "synthforge/errors.hpp"

namespace synthforge {

namespace {

struct FileCloser {
    void operator()(FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<FILE, FileCloser>;

[[noreturn]] void png_fail(png_structp, png_const_charp msg) {
    throw IoError(std::string("png: ") + msg);
}

void png_warn(png_structp, png_const_charp) {}

}  // namespace

void write_png_rgb8(const std::filesystem::path& path, const Image8& img) {
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw IoError("cannot create " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    png_infop info = png_create_info_struct(png);
    try {
        png_init_io(png, f.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                     static_cast<png_uint_32>(img.height), 8, PNG_COLOR_TYPE_RGB,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int y = 0; y < img.height; ++y)
            png_write_row(png, const_cast<png_bytep>(img.at(0, y)));
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
}

void write_png_gray16(const std::filesystem::path& path, const Image16& img) {
    FilePtr f(std::fopen(path.string().c_str(), "wb"));
    if (!f) throw IoError("cannot create " + path.string());

    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
    png_infop info = png_create_info_struct(png);
    std::vector<uint8_t> row(static_cast<size_t>(img.width) * 2);
    try {
        png_init_io(png, f.get());
        png_set_IHDR(png, info, static_cast<png_uint_32>(img.width),
                     static_cast<png_uint_32>(img.height), 16, PNG_COLOR_TYPE_GRAY,
                     PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
        png_write_info(png, info);
        for (int y = 0; y < img.height; ++y) {
            for (int x = 0; x < img.width; ++x) {
                uint16_t v = img.at(x, y);  // PNG is big-endian
                row[static_cast<size_t>(x) * 2] = static_cast<uint8_t>(v >> 8);
                row[static_cast<size_t>(x) * 2 + 1] = static_cast<uint8_t>(v & 0xff);
            }
            png_write_row(png, row.data());
        }
        png_write_end(png, nullptr);
    } catch (...) {
        png_destroy_write_struct(&png, &info);
        throw;
    }
    png_destroy_write_struct(&png, &info);
}

namespace {

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FilePtr file;

    explicit PngReader(const std::filesystem::path& path) {
        file.reset(std::fopen(path.string().c_str(), "rb"));
        if (!file) throw IoError("cannot open " + path.string());
        png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, png_fail, png_warn);
        info = png_create_info_struct(png);
        png_init_io(png, file.get());
    }
    ~PngReader() { png_destroy_read_struct(&png, &info, nullptr); }
};

}  // namespace

Image8 read_png_rgb8(const std::filesystem::path& path) {
    PngReader r(path);
    png_read_info(r.png, r.info);

    png_set_palette_to_rgb(r.png);
    png_set_expand_gray_1_2_4_to_8(r.png);
    png_set_strip_16(r.png);
    png_set_strip_alpha(r.png);
    if (png_get_color_type(r.png, r.info) == PNG_COLOR_TYPE_GRAY ||
        png_get_color_type(r.png, r.info) == PNG_COLOR_TYPE_GRAY_ALPHA)
        png_set_gray_to_rgb(r.png);
    png_read_update_info(r.png, r.info);

    Image8 img(static_cast<int>(png_get_image_width(r.png, r.info)),
               static_cast<int>(png_get_image_height(r.png, r.info)));
    if (png_get_rowbytes(r.png, r.info) != static_cast<size_t>(img.width) * 3)
        throw IoError(path.string() + ": unexpected row size after RGB conversion");
    for (int y = 0; y < img.height; ++y) png_read_row(r.png, img.at(0, y), nullptr);
    return img;
}

Image16 read_png_gray16(const std::filesystem::path& path) {
    PngReader r(path);
    png_read_info(r.png, r.info);

    if (png_get_color_type(r.png, r.info) != PNG_COLOR_TYPE_GRAY)
        throw IoError(path.string() + ": expected grayscale PNG");
    int depth = png_get_bit_depth(r.png, r.info);
    if (depth < 16) png_set_expand_gray_1_2_4_to_8(r.png);
    png_read_update_info(r.png, r.info);

    Image16 img(static_cast<int>(png_get_image_width(r.png, r.info)),
                static_cast<int>(png_get_image_height(r.png, r.info)));
    std::vector<uint8_t> row(png_get_rowbytes(r.png, r.info));
    for (int y = 0; y < img.height; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        for (int x = 0; x < img.width; ++x) {
            if (depth == 16)
                img.at(x, y) = static_cast<uint16_t>((row[static_cast<size_t>(x) * 2] << 8) |
                                                     row[static_cast<size_t>(x) * 2 + 1]);
            else
                img.at(x, y) = row[static_cast<size_t>(x)];
        }
    }
    return img;
}

}  // namespace synthforge
