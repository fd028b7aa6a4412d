#include "synthforge/render.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "synthforge/errors.hpp"

namespace synthforge {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct ShadePoint {
    Vec3 albedo;
    Vec3 world_pos;
    Vec3 normal;  // unit, flipped toward the camera
};

Vec3 clamp01(const Vec3& v) {
    return {std::clamp(v.x, 0.0, 1.0), std::clamp(v.y, 0.0, 1.0), std::clamp(v.z, 0.0, 1.0)};
}

Vec3 hadamard(const Vec3& a, const Vec3& b) { return {a.x * b.x, a.y * b.y, a.z * b.z}; }

// Irradiance arriving from one light sample; dir_out points toward the light.
struct LightSample {
    Vec3 dir;
    Vec3 irradiance;
};

void light_samples(const LightSpec& light, const Vec3& p, std::vector<LightSample>& out) {
    out.clear();
    switch (light.kind) {
        case LightKind::Sun:
            out.push_back({light.direction, light.color * light.intensity});
            break;
        case LightKind::Point: {
            Vec3 d = light.position - p;
            double r2 = std::max(norm2(d), 1e-6);
            out.push_back({d / std::sqrt(r2), light.color * (light.intensity / r2)});
            break;
        }
        case LightKind::Plane: {
            // 4-sample approximation of the area light
            double h = light.plane_half_extent * 0.5;
            for (int i = 0; i < 4; ++i) {
                Vec3 offset{(i & 1) ? h : -h, (i & 2) ? h : -h, 0.0};
                Vec3 d = light.position + offset - p;
                double r2 = std::max(norm2(d), 1e-6);
                out.push_back({d / std::sqrt(r2), light.color * (0.25 * light.intensity / r2)});
            }
            break;
        }
    }
}

Vec3 shade(const ShadePoint& sp, const Material& mat, const SceneSpec& scene, const Vec3& cam_pos,
           const Vec3& ambient) {
    Vec3 v = normalized(cam_pos - sp.world_pos);
    Vec3 n = sp.normal;

    Vec3 diffuse_albedo = sp.albedo * (1.0 - mat.metalness);
    Vec3 f0 = Vec3{0.08, 0.08, 0.08} * mat.specular * (1.0 - mat.metalness) +
              sp.albedo * mat.metalness;
    double alpha = std::max(mat.roughness * mat.roughness, 1e-3);
    double alpha2 = alpha * alpha;

    Vec3 color = hadamard(ambient, sp.albedo);
    std::vector<LightSample> samples;
    for (const LightSpec& light : scene.lights) {
        light_samples(light, sp.world_pos, samples);
        for (const LightSample& s : samples) {
            double ndotl = dot(n, s.dir);
            if (ndotl <= 0.0) continue;
            Vec3 h = normalized(s.dir + v);
            double ndoth = std::max(dot(n, h), 0.0);
            double ndotv = std::max(dot(n, v), 0.05);
            double denom = ndoth * ndoth * (alpha2 - 1.0) + 1.0;
            double d_ggx = alpha2 / (kPi * denom * denom);
            double vdoth = std::max(dot(v, h), 0.0);
            double fres_w = std::pow(1.0 - vdoth, 5.0);
            Vec3 fresnel = f0 + (Vec3{1, 1, 1} - f0) * fres_w;
            Vec3 spec = fresnel * (d_ggx / (4.0 * ndotv));
            color += hadamard(s.irradiance, diffuse_albedo + spec) * ndotl;
        }
    }
    return clamp01(color);
}

struct RenderItem {
    const Mesh* mesh;
    const RigidTransform* pose;
    const Material* material;
    uint16_t category_id;
    uint16_t instance_id;
    bool textured_floor;
};

uint8_t to_u8(double v) {
    return static_cast<uint8_t>(std::clamp(static_cast<int>(std::lround(v * 255.0)), 0, 255));
}

Vec3 texture_lookup(const Image8& tex, double u, double v) {
    int x = std::clamp(static_cast<int>(u * tex.width), 0, tex.width - 1);
    int y = std::clamp(static_cast<int>(v * tex.height), 0, tex.height - 1);
    auto px = tex.get(x, y);
    return {px[0] / 255.0, px[1] / 255.0, px[2] / 255.0};
}

struct ClipVert {
    Vec3 cam;
    Vec3 world;
};

// Sutherland-Hodgman against the z = near plane in camera space.
int clip_near(const ClipVert in[3], double near_z, ClipVert out[4]) {
    int n = 0;
    for (int i = 0; i < 3; ++i) {
        const ClipVert& a = in[i];
        const ClipVert& b = in[(i + 1) % 3];
        bool a_in = a.cam.z >= near_z, b_in = b.cam.z >= near_z;
        if (a_in) out[n++] = a;
        if (a_in != b_in) {
            double t = (near_z - a.cam.z) / (b.cam.z - a.cam.z);
            out[n++] = {a.cam + (b.cam - a.cam) * t, a.world + (b.world - a.world) * t};
        }
    }
    return n;
}

Mesh make_floor_mesh(double plane_size) {
    Mesh floor;
    double h = plane_size / 2.0;
    floor.vertices = {{-h, -h, 0}, {h, -h, 0}, {h, h, 0}, {-h, h, 0}};
    floor.triangles = {{0, 1, 2}, {0, 2, 3}};
    floor.name = "floor";
    return floor;
}

std::vector<RenderItem> gather_items(const SceneSpec& scene, const Mesh& floor_mesh,
                                     const RigidTransform& identity, const Material& floor_mat) {
    std::vector<RenderItem> items;
    if (scene.floor == FloorKind::TexturedPlane)
        items.push_back({&floor_mesh, &identity, &floor_mat, 0, 0, true});
    for (const PlacedObject& obj : scene.objects)
        items.push_back({obj.mesh.get(), &obj.pose, &obj.material,
                         static_cast<uint16_t>(obj.category_id),
                         static_cast<uint16_t>(obj.instance_id), false});
    for (const SceneProp& d : scene.distractors)
        items.push_back({d.mesh.get(), &d.pose, &d.material, 0, 0, false});
    for (const SceneProp& s : scene.structure)
        items.push_back({s.mesh.get(), &s.pose, &s.material, 0, 0, false});
    return items;
}

}  // namespace

FrameSet render(const SceneSpec& scene, const RigidTransform& world_to_camera,
                const CameraIntrinsics& k, const RenderOptions& opts) {
    if (!k.valid()) throw ValidationError("render: invalid camera intrinsics");
    const int w = k.width, h = k.height;

    FrameSet frame;
    frame.camera = {k, world_to_camera};
    frame.rgb = Image8(w, h, opts.clear_color);
    frame.depth = ImageF(w, h, 0.f);
    frame.class_map = Image16(w, h, 0);
    frame.instance_map = Image16(w, h, 0);

    Vec3 ambient{opts.ambient, opts.ambient, opts.ambient};
    if (scene.backdrop) {
        const Image8& bg = *scene.backdrop;
        double sum[3] = {0, 0, 0};
        for (size_t i = 0; i < bg.pixels.size(); i += 3) {
            sum[0] += bg.pixels[i];
            sum[1] += bg.pixels[i + 1];
            sum[2] += bg.pixels[i + 2];
        }
        double npix = static_cast<double>(bg.pixels.size() / 3) * 255.0;
        Vec3 mean{sum[0] / npix, sum[1] / npix, sum[2] / npix};
        ambient = mean * opts.ambient;
        for (int y = 0; y < h; ++y) {
            int sy = std::clamp(y * bg.height / h, 0, bg.height - 1);
            for (int x = 0; x < w; ++x) {
                int sx = std::clamp(x * bg.width / w, 0, bg.width - 1);
                frame.rgb.set(x, y, bg.get(sx, sy));
            }
        }
    }

    RigidTransform cam_to_world = inverse(world_to_camera);
    Vec3 cam_pos = cam_to_world.translation;

    Mesh floor_mesh = make_floor_mesh(scene.plane_size > 0 ? scene.plane_size : 2.0);
    RigidTransform identity;
    Material floor_mat;
    floor_mat.roughness = 0.8;
    floor_mat.specular = 0.2;
    std::vector<RenderItem> items = gather_items(scene, floor_mesh, identity, floor_mat);

    std::vector<Vec3> cam_verts, world_verts;
    for (const RenderItem& item : items) {
        const Mesh& mesh = *item.mesh;
        world_verts.resize(mesh.vertices.size());
        cam_verts.resize(mesh.vertices.size());
        for (size_t i = 0; i < mesh.vertices.size(); ++i) {
            world_verts[i] = item.pose->apply(mesh.vertices[i]);
            cam_verts[i] = world_to_camera.apply(world_verts[i]);
        }

        for (const auto& tri : mesh.triangles) {
            ClipVert raw[3] = {{cam_verts[tri[0]], world_verts[tri[0]]},
                               {cam_verts[tri[1]], world_verts[tri[1]]},
                               {cam_verts[tri[2]], world_verts[tri[2]]}};
            ClipVert poly[4];
            int nvert = clip_near(raw, opts.near_plane, poly);
            if (nvert < 3) continue;

            Vec3 face_n = cross(world_verts[tri[1]] - world_verts[tri[0]],
                                world_verts[tri[2]] - world_verts[tri[0]]);
            double face_len = norm(face_n);
            if (face_len <= 0) continue;
            face_n = face_n / face_len;

            for (int f = 1; f + 1 < nvert; ++f) {
                const ClipVert* v[3] = {&poly[0], &poly[f], &poly[f + 1]};
                Vec2 s[3];
                for (int i = 0; i < 3; ++i)
                    s[i] = {k.fx * v[i]->cam.x / v[i]->cam.z + k.cx,
                            k.fy * v[i]->cam.y / v[i]->cam.z + k.cy};

                double area = (s[1].x - s[0].x) * (s[2].y - s[0].y) -
                              (s[1].y - s[0].y) * (s[2].x - s[0].x);
                if (std::abs(area) < 1e-12) continue;
                if (area < 0) {
                    std::swap(v[1], v[2]);
                    std::swap(s[1], s[2]);
                    area = -area;
                }

                double min_x = std::min({s[0].x, s[1].x, s[2].x});
                double max_x = std::max({s[0].x, s[1].x, s[2].x});
                double min_y = std::min({s[0].y, s[1].y, s[2].y});
                double max_y = std::max({s[0].y, s[1].y, s[2].y});
                int x_lo = std::max(0, static_cast<int>(std::ceil(min_x - 0.5)));
                int x_hi = std::min(w - 1, static_cast<int>(std::floor(max_x - 0.5)));
                int y_lo = std::max(0, static_cast<int>(std::ceil(min_y - 0.5)));
                int y_hi = std::min(h - 1, static_cast<int>(std::floor(max_y - 0.5)));

                double inv_z[3] = {1.0 / v[0]->cam.z, 1.0 / v[1]->cam.z, 1.0 / v[2]->cam.z};

                for (int py = y_lo; py <= y_hi; ++py) {
                    double cy_px = py + 0.5;
                    for (int px = x_lo; px <= x_hi; ++px) {
                        double cx_px = px + 0.5;
                        double w0 = (s[2].x - s[1].x) * (cy_px - s[1].y) -
                                    (s[2].y - s[1].y) * (cx_px - s[1].x);
                        double w1 = (s[0].x - s[2].x) * (cy_px - s[2].y) -
                                    (s[0].y - s[2].y) * (cx_px - s[2].x);
                        double w2 = (s[1].x - s[0].x) * (cy_px - s[0].y) -
                                    (s[1].y - s[0].y) * (cx_px - s[0].x);
                        if (w0 < 0 || w1 < 0 || w2 < 0) continue;

                        double b0 = w0 / area, b1 = w1 / area, b2 = w2 / area;
                        double izw = b0 * inv_z[0] + b1 * inv_z[1] + b2 * inv_z[2];
                        double z = 1.0 / izw;
                        if (z < opts.near_plane || z > opts.far_plane) continue;

                        float& zslot = frame.depth.at(px, py);
                        if (zslot != 0.f && static_cast<double>(zslot) <= z) continue;

                        // perspective-correct world position
                        Vec3 wp = (v[0]->world * (b0 * inv_z[0]) + v[1]->world * (b1 * inv_z[1]) +
                                   v[2]->world * (b2 * inv_z[2])) / izw;

                        Vec3 albedo = item.material->base_color;
                        if (item.textured_floor) {
                            double half = (scene.plane_size > 0 ? scene.plane_size : 2.0) / 2.0;
                            albedo = texture_lookup(scene.floor_texture,
                                                    (wp.x + half) / (2 * half),
                                                    (wp.y + half) / (2 * half));
                        }
                        Vec3 n = face_n;
                        if (dot(n, cam_pos - wp) < 0) n = -n;  // two-sided

                        Vec3 color = shade({albedo, wp, n}, *item.material, scene, cam_pos, ambient);
                        frame.rgb.set(px, py, {to_u8(color.x), to_u8(color.y), to_u8(color.z)});
                        zslot = static_cast<float>(z);
                        frame.class_map.at(px, py) = item.category_id;
                        frame.instance_map.at(px, py) = item.instance_id;
                    }
                }
            }
        }
    }
    return frame;
}

double raycast_depth_oracle(const SceneSpec& scene, const RigidTransform& world_to_camera,
                            const CameraIntrinsics& k, int px, int py, const RenderOptions& opts) {
    if (px < 0 || py < 0 || px >= k.width || py >= k.height)
        throw ValidationError("raycast_depth_oracle: pixel outside the image");

    RigidTransform cam_to_world = inverse(world_to_camera);
    // camera-frame ray with dir.z = 1 so the parameter t equals camera depth
    Vec3 dir_cam{(px + 0.5 - k.cx) / k.fx, (py + 0.5 - k.cy) / k.fy, 1.0};
    Vec3 origin = cam_to_world.translation;
    Vec3 dir = cam_to_world.rotation * dir_cam;

    Mesh floor_mesh = make_floor_mesh(scene.plane_size > 0 ? scene.plane_size : 2.0);
    RigidTransform identity;
    Material floor_mat;
    std::vector<RenderItem> items = gather_items(scene, floor_mesh, identity, floor_mat);

    double best = std::numeric_limits<double>::infinity();
    for (const RenderItem& item : items) {
        const Mesh& mesh = *item.mesh;
        for (const auto& tri : mesh.triangles) {
            Vec3 a = item.pose->apply(mesh.vertices[tri[0]]);
            Vec3 b = item.pose->apply(mesh.vertices[tri[1]]);
            Vec3 c = item.pose->apply(mesh.vertices[tri[2]]);
            Vec3 e1 = b - a, e2 = c - a;
            Vec3 pvec = cross(dir, e2);
            double det = dot(e1, pvec);
            if (std::abs(det) < 1e-14) continue;
            double inv_det = 1.0 / det;
            Vec3 tvec = origin - a;
            double u = dot(tvec, pvec) * inv_det;
            if (u < -1e-12 || u > 1.0 + 1e-12) continue;
            Vec3 qvec = cross(tvec, e1);
            double vv = dot(dir, qvec) * inv_det;
            if (vv < -1e-12 || u + vv > 1.0 + 1e-12) continue;
            double t = dot(e2, qvec) * inv_det;
            if (t >= opts.near_plane && t <= opts.far_plane && t < best) best = t;
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

}  // namespace synthforge
