#pragma once

#include <filesystem>

#include "synthforge/image.hpp"

namespace synthforge {

// PNG codecs (libpng). Readers convert palette/gray/alpha sources to the
// requested layout; writers emit fixed, reproducible encodings.
void write_png_rgb8(const std::filesystem::path& path, const Image8& img);
void write_png_gray16(const std::filesystem::path& path, const Image16& img);

Image8 read_png_rgb8(const std::filesystem::path& path);
Image16 read_png_gray16(const std::filesystem::path& path);

}  // namespace synthforge
