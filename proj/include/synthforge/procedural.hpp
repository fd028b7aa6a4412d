#pragma once

#include "synthforge/image.hpp"
#include "synthforge/rng.hpp"

namespace synthforge {

// Seeded stand-ins for downloaded texture/backdrop assets: a randomized
// checker board with value noise, and an indoor-ish gradient backdrop.
Image8 procedural_texture(RngStream& rng, int size = 256);
Image8 procedural_backdrop(RngStream& rng, int width = 640, int height = 480);

}  // namespace synthforge
