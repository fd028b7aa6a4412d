#include "synthforge/procedural.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace synthforge {

namespace {

uint8_t to_u8(double v) {
    return static_cast<uint8_t>(std::clamp(static_cast<int>(std::lround(v * 255.0)), 0, 255));
}

// Deterministic per-cell hash noise in [0,1).
double cell_noise(uint64_t seed, int x, int y) {
    uint64_t z = seed ^ (static_cast<uint64_t>(static_cast<uint32_t>(x)) << 32 |
                         static_cast<uint32_t>(y));
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return static_cast<double>(z >> 11) * 0x1.0p-53;
}

// Bilinear value noise at one octave.
double value_noise(uint64_t seed, double x, double y) {
    int x0 = static_cast<int>(std::floor(x)), y0 = static_cast<int>(std::floor(y));
    double fx = x - x0, fy = y - y0;
    double sx = fx * fx * (3 - 2 * fx), sy = fy * fy * (3 - 2 * fy);
    double v00 = cell_noise(seed, x0, y0), v10 = cell_noise(seed, x0 + 1, y0);
    double v01 = cell_noise(seed, x0, y0 + 1), v11 = cell_noise(seed, x0 + 1, y0 + 1);
    double a = v00 + (v10 - v00) * sx;
    double b = v01 + (v11 - v01) * sx;
    return a + (b - a) * sy;
}

}  // namespace

Image8 procedural_texture(RngStream& rng, int size) {
    Image8 img(size, size);
    double ca[3], cb[3];
    for (double& c : ca) c = rng.uniform(0.05, 0.95);
    for (double& c : cb) c = rng.uniform(0.05, 0.95);
    int cells = static_cast<int>(rng.uniform_int(4, 12));
    uint64_t noise_seed = rng.next_u64();
    double noise_amp = rng.uniform(0.05, 0.35);
    double freq = rng.uniform(4.0, 16.0);

    for (int y = 0; y < size; ++y) {
        for (int x = 0; x < size; ++x) {
            int cxi = x * cells / size, cyi = y * cells / size;
            const double* base = ((cxi + cyi) & 1) ? cb : ca;
            double n = (value_noise(noise_seed, x * freq / size, y * freq / size) - 0.5) * 2.0;
            uint8_t px[3];
            for (int c = 0; c < 3; ++c) px[c] = to_u8(base[c] + noise_amp * n);
            img.set(x, y, {px[0], px[1], px[2]});
        }
    }
    return img;
}

Image8 procedural_backdrop(RngStream& rng, int width, int height) {
    Image8 img(width, height);
    double top[3], bottom[3];
    for (double& c : top) c = rng.uniform(0.15, 0.85);
    for (double& c : bottom) c = rng.uniform(0.05, 0.6);
    uint64_t noise_seed = rng.next_u64();
    double noise_amp = rng.uniform(0.03, 0.2);
    double freq = rng.uniform(3.0, 9.0);

    for (int y = 0; y < height; ++y) {
        double t = static_cast<double>(y) / std::max(height - 1, 1);
        for (int x = 0; x < width; ++x) {
            double n = (value_noise(noise_seed, x * freq / width, y * freq / height) - 0.5) * 2.0;
            uint8_t px[3];
            for (int c = 0; c < 3; ++c)
                px[c] = to_u8(top[c] + (bottom[c] - top[c]) * t + noise_amp * n);
            img.set(x, y, {px[0], px[1], px[2]});
        }
    }
    return img;
}

}  // namespace synthforge
