#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace synthforge {

// Interleaved 8-bit RGB image, row-major.
struct Image8 {
    int width = 0, height = 0;
    std::vector<uint8_t> pixels;  // 3 * width * height

    Image8() = default;
    Image8(int w, int h, std::array<uint8_t, 3> fill = {0, 0, 0}) : width(w), height(h) {
        pixels.resize(static_cast<size_t>(w) * h * 3);
        for (size_t i = 0; i < pixels.size(); i += 3) {
            pixels[i] = fill[0];
            pixels[i + 1] = fill[1];
            pixels[i + 2] = fill[2];
        }
    }

    uint8_t* at(int x, int y) { return &pixels[(static_cast<size_t>(y) * width + x) * 3]; }
    const uint8_t* at(int x, int y) const { return &pixels[(static_cast<size_t>(y) * width + x) * 3]; }

    void set(int x, int y, std::array<uint8_t, 3> rgb) {
        uint8_t* p = at(x, y);
        p[0] = rgb[0]; p[1] = rgb[1]; p[2] = rgb[2];
    }
    std::array<uint8_t, 3> get(int x, int y) const {
        const uint8_t* p = at(x, y);
        return {p[0], p[1], p[2]};
    }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width && y < height; }
};

// Single-channel 16-bit image (ids, quantized depth).
struct Image16 {
    int width = 0, height = 0;
    std::vector<uint16_t> pixels;

    Image16() = default;
    Image16(int w, int h, uint16_t fill = 0)
        : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

    uint16_t& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    uint16_t at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

// Single-channel float image (metric depth in meters, 0 = no hit).
struct ImageF {
    int width = 0, height = 0;
    std::vector<float> pixels;

    ImageF() = default;
    ImageF(int w, int h, float fill = 0.f)
        : width(w), height(h), pixels(static_cast<size_t>(w) * h, fill) {}

    float& at(int x, int y) { return pixels[static_cast<size_t>(y) * width + x]; }
    float at(int x, int y) const { return pixels[static_cast<size_t>(y) * width + x]; }
};

}  // namespace synthforge
