#pragma once

#include "synthforge/geometry.hpp"
#include "synthforge/image.hpp"
#include "synthforge/scene.hpp"

namespace synthforge {

struct ViewCamera {
    CameraIntrinsics intrinsics;
    RigidTransform world_to_camera;
};

// The four aligned ground-truth buffers of one rendered view. Active
// objects label class_map/instance_map with their ids; floor, backdrop,
// distractors and structure contribute RGB and depth only.
struct FrameSet {
    Image8 rgb;
    ImageF depth;          // camera-frame z in meters, 0 = background
    Image16 class_map;     // category ids, 0 = background
    Image16 instance_map;  // instance ids, 0 = background
    ViewCamera camera;
};

struct RenderOptions {
    double near_plane = 0.01;
    double far_plane = 100.0;
    std::array<uint8_t, 3> clear_color{26, 26, 30};  // used when the scene has no backdrop
    double ambient = 0.35;                           // scale of the constant ambient term
};

// Deterministic perspective rasterization with a z-buffer: nearest fragment
// wins, depth is the winning fragment's camera z, shading is Lambert
// diffuse plus a GGX-style specular lobe under the scene lights, plus a
// constant ambient term (backdrop mean color when a backdrop exists).
FrameSet render(const SceneSpec& scene, const RigidTransform& world_to_camera,
                const CameraIntrinsics& k, const RenderOptions& opts = {});

// Independent verification path: exact nearest ray-triangle intersection
// (Moller-Trumbore) along the pixel-center ray of (px, py). Returns the
// camera-frame z of the nearest hit, or 0 when the ray escapes.
double raycast_depth_oracle(const SceneSpec& scene, const RigidTransform& world_to_camera,
                            const CameraIntrinsics& k, int px, int py,
                            const RenderOptions& opts = {});

}  // namespace synthforge
