#include "synthforge/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include "synthforge/errors.hpp"
#include "synthforge/image_io.hpp"
#include "synthforge/procedural.hpp"

namespace synthforge {

const char* procedure_name(ProcedureId p) {
    switch (p) {
        case ProcedureId::P1: return "P1";
        case ProcedureId::P2: return "P2";
        case ProcedureId::P3: return "P3";
        case ProcedureId::P4: return "P4";
        case ProcedureId::P5: return "P5";
    }
    return "?";
}

ProcedureId procedure_from_name(const std::string& name) {
    for (ProcedureId p : kAllProcedures)
        if (name == procedure_name(p)) return p;
    throw ValidationError("unknown procedure '" + name + "' (expected P1..P5)");
}

// ---------------------------------------------------------------------------
// Sampling primitives
// ---------------------------------------------------------------------------

Mat3 random_rotation(RngStream& rng) {
    // Shoemake's uniform unit quaternion
    double u1 = rng.next_double(), u2 = rng.next_double(), u3 = rng.next_double();
    constexpr double tau = 2.0 * 3.14159265358979323846;
    double a = std::sqrt(1.0 - u1), b = std::sqrt(u1);
    double x = a * std::sin(tau * u2), y = a * std::cos(tau * u2);
    double z = b * std::sin(tau * u3), w = b * std::cos(tau * u3);
    return quat_to_rotation(w, x, y, z);
}

RigidTransform sample_floating_pose(const Aabb& bounds, RngStream& rng) {
    RigidTransform t;
    t.translation = {rng.uniform(bounds.min.x, bounds.max.x),
                     rng.uniform(bounds.min.y, bounds.max.y),
                     rng.uniform(bounds.min.z, bounds.max.z)};
    t.rotation = random_rotation(rng);
    return t;
}

Material randomize_material(RngStream& rng, const MaterialRanges& ranges) {
    Material m;
    m.base_color = {rng.uniform(ranges.base_color.lo, ranges.base_color.hi),
                    rng.uniform(ranges.base_color.lo, ranges.base_color.hi),
                    rng.uniform(ranges.base_color.lo, ranges.base_color.hi)};
    m.roughness = rng.uniform(ranges.roughness.lo, ranges.roughness.hi);
    m.specular = rng.uniform(ranges.specular.lo, ranges.specular.hi);
    m.metalness = rng.uniform(ranges.metalness.lo, ranges.metalness.hi);
    return m;
}

LightSpec sample_light(RngStream& rng, double plane_size, const LightRanges& ranges) {
    LightSpec light;
    switch (rng.uniform_int(0, 2)) {
        case 0: light.kind = LightKind::Sun; break;
        case 1: light.kind = LightKind::Point; break;
        default: light.kind = LightKind::Plane; break;
    }
    light.color = {rng.uniform(ranges.color.lo, ranges.color.hi),
                   rng.uniform(ranges.color.lo, ranges.color.hi),
                   rng.uniform(ranges.color.lo, ranges.color.hi)};
    light.intensity = rng.uniform(ranges.intensity.lo, ranges.intensity.hi);

    if (light.kind == LightKind::Sun) {
        // direction toward the sun, upper hemisphere
        constexpr double tau = 2.0 * 3.14159265358979323846;
        double z = rng.uniform(0.15, 1.0);
        double az = rng.uniform(0.0, tau);
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        light.direction = {rho * std::cos(az), rho * std::sin(az), z};
    } else {
        light.position = {rng.uniform(-plane_size / 2, plane_size / 2),
                          rng.uniform(-plane_size / 2, plane_size / 2),
                          rng.uniform(0.5 * plane_size, 1.5 * plane_size)};
        if (light.kind == LightKind::Plane)
            light.plane_half_extent = rng.uniform(0.05 * plane_size, 0.25 * plane_size);
    }
    return light;
}

// ---------------------------------------------------------------------------
// Stable-pose settling
// ---------------------------------------------------------------------------

StablePoseSolver::StablePoseSolver(const Mesh& mesh) {
    if (mesh.empty()) throw ValidationError("settle: empty mesh");
    ConvexHull hull;
    try {
        hull = convex_hull(mesh.vertices);
    } catch (const ValidationError& e) {
        throw ValidationError(std::string("settle: degenerate hull: ") + e.what());
    }
    hull_points_ = hull.points;
    centroid_ = mesh_centroid(mesh);
    mesh_vertices_ = mesh.vertices;

    Vec3 lo = hull.points[0], hi = hull.points[0];
    for (const Vec3& p : hull.points) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    scale_ = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z});

    const auto& tris = hull.faces;
    std::vector<Vec3> tri_normal(tris.size());
    for (size_t t = 0; t < tris.size(); ++t) {
        Vec3 n = cross(hull.points[static_cast<size_t>(tris[t][1])] - hull.points[static_cast<size_t>(tris[t][0])],
                       hull.points[static_cast<size_t>(tris[t][2])] - hull.points[static_cast<size_t>(tris[t][0])]);
        tri_normal[t] = n;  // area-weighted (length = 2*area)
    }

    // Directed edge -> owning triangle; hull orientation is consistent, so
    // each undirected edge appears once per direction.
    std::map<std::pair<int, int>, int> edge_owner;
    for (size_t t = 0; t < tris.size(); ++t)
        for (int e = 0; e < 3; ++e)
            edge_owner[{tris[t][static_cast<size_t>(e)], tris[t][static_cast<size_t>((e + 1) % 3)]}] =
                static_cast<int>(t);

    // Union coplanar neighbors into polygonal faces.
    std::vector<int> parent(tris.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int a) {
        while (parent[static_cast<size_t>(a)] != a) {
            parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
            a = parent[static_cast<size_t>(a)];
        }
        return a;
    };
    auto unite = [&](int a, int b) { parent[static_cast<size_t>(find(a))] = find(b); };

    for (const auto& [edge, t] : edge_owner) {
        auto twin = edge_owner.find({edge.second, edge.first});
        if (twin == edge_owner.end()) continue;
        int u = t, v = twin->second;
        Vec3 nu = normalized(tri_normal[static_cast<size_t>(u)]);
        Vec3 nv = normalized(tri_normal[static_cast<size_t>(v)]);
        if (dot(nu, nv) > 1.0 - 1e-10) unite(u, v);
    }

    std::map<int, int> root_to_group;
    std::vector<int> tri_group(tris.size());
    for (size_t t = 0; t < tris.size(); ++t) {
        int r = find(static_cast<int>(t));
        auto it = root_to_group.find(r);
        if (it == root_to_group.end()) {
            it = root_to_group.emplace(r, static_cast<int>(groups_.size())).first;
            groups_.emplace_back();
        }
        tri_group[t] = it->second;
    }

    std::vector<Vec3> group_normal(groups_.size());
    for (size_t t = 0; t < tris.size(); ++t)
        group_normal[static_cast<size_t>(tri_group[t])] += tri_normal[t];
    for (size_t g = 0; g < groups_.size(); ++g) {
        groups_[g].normal = normalized(group_normal[g]);
    }

    std::vector<double> offset_sum(groups_.size(), 0.0);
    std::vector<int> offset_cnt(groups_.size(), 0);
    for (size_t t = 0; t < tris.size(); ++t) {
        int g = tri_group[t];
        for (int k = 0; k < 3; ++k) {
            offset_sum[static_cast<size_t>(g)] +=
                dot(groups_[static_cast<size_t>(g)].normal,
                    hull_points_[static_cast<size_t>(tris[t][static_cast<size_t>(k)])]);
            ++offset_cnt[static_cast<size_t>(g)];
        }
    }
    for (size_t g = 0; g < groups_.size(); ++g) {
        groups_[g].offset = offset_sum[g] / offset_cnt[g];
        groups_[g].height = groups_[g].offset - dot(groups_[g].normal, centroid_);
    }

    // Boundary edges of each polygon, keeping the owning triangle's winding.
    for (size_t t = 0; t < tris.size(); ++t) {
        int g = tri_group[t];
        for (int e = 0; e < 3; ++e) {
            int a = tris[t][static_cast<size_t>(e)], b = tris[t][static_cast<size_t>((e + 1) % 3)];
            auto twin = edge_owner.find({b, a});
            if (twin == edge_owner.end()) continue;
            int og = tri_group[static_cast<size_t>(twin->second)];
            if (og == g) continue;
            groups_[static_cast<size_t>(g)].boundary.emplace_back(a, b);
            groups_[static_cast<size_t>(g)].neighbors.push_back(og);
        }
    }
}

bool StablePoseSolver::projection_inside(const FaceGroup& g, const Vec3& q, int* worst_edge) const {
    double worst = -std::numeric_limits<double>::infinity();
    int worst_idx = 0;
    for (size_t e = 0; e < g.boundary.size(); ++e) {
        Vec3 a = hull_points_[static_cast<size_t>(g.boundary[e].first)];
        Vec3 b = hull_points_[static_cast<size_t>(g.boundary[e].second)];
        Vec3 ev = b - a;
        double len = norm(ev);
        if (len <= 0) continue;
        // q is inside when it lies left of every directed boundary edge.
        double violation = -dot(cross(ev, q - a), g.normal) / len;
        if (violation > worst) {
            worst = violation;
            worst_idx = static_cast<int>(e);
        }
    }
    if (worst_edge) *worst_edge = worst_idx;
    return worst <= 1e-9 * scale_;
}

int StablePoseSolver::start_group(const Vec3& down_body) const {
    // Face whose plane the centroid-down ray exits through.
    int best = -1;
    double best_t = std::numeric_limits<double>::infinity();
    for (size_t g = 0; g < groups_.size(); ++g) {
        double denom = dot(groups_[g].normal, down_body);
        if (denom <= 1e-12) continue;
        double t = groups_[g].height / denom;
        Vec3 hit = centroid_ + t * down_body;
        if (projection_inside(groups_[g], hit, nullptr) && t < best_t) {
            best_t = t;
            best = static_cast<int>(g);
        }
    }
    if (best >= 0) return best;
    // Ray grazed an edge; fall back to the most down-facing face.
    double best_d = -2.0;
    for (size_t g = 0; g < groups_.size(); ++g) {
        double d = dot(groups_[g].normal, down_body);
        if (d > best_d) {
            best_d = d;
            best = static_cast<int>(g);
        }
    }
    return best;
}

Mat3 StablePoseSolver::settle_rotation(const Mat3& initial_rotation) const {
    Vec3 down_body = initial_rotation.transposed() * Vec3{0, 0, -1};
    int g = start_group(down_body);

    const int max_steps = static_cast<int>(groups_.size()) * 10 + 16;
    for (int step = 0; step < max_steps; ++step) {
        const FaceGroup& face = groups_[static_cast<size_t>(g)];
        Vec3 q = centroid_ + face.height * face.normal;
        int worst_edge = 0;
        if (!projection_inside(face, q, &worst_edge)) {
            g = face.neighbors[static_cast<size_t>(worst_edge)];  // tip over the violated edge
            continue;
        }
        // Reject metastable slivers: a resting face must not have a strictly
        // lower neighbor (a thin plate on its rim rolls onto the big face).
        int lowest = -1;
        double lowest_h = face.height - 1e-12 * scale_;
        for (int nb : face.neighbors) {
            double h = groups_[static_cast<size_t>(nb)].height;
            if (h < lowest_h) {
                lowest_h = h;
                lowest = nb;
            }
        }
        if (lowest >= 0) {
            g = lowest;
            continue;
        }
        break;  // stable
    }

    // Canonical orientation of the basin: minimal rotation taking the
    // support normal onto -z.
    Vec3 n = groups_[static_cast<size_t>(g)].normal;
    Vec3 down{0, 0, -1};
    Vec3 axis = cross(n, down);
    double s = norm(axis);
    double c = dot(n, down);
    if (s < 1e-12) {
        if (c > 0) return Mat3::identity();
        return axis_angle_rotation({1, 0, 0}, 3.14159265358979323846);
    }
    return axis_angle_rotation(axis, std::atan2(s, c));
}

RigidTransform StablePoseSolver::settle(const Mat3& initial_rotation, const Vec2& xy) const {
    RigidTransform pose;
    pose.rotation = settle_rotation(initial_rotation);
    double min_z = std::numeric_limits<double>::infinity();
    for (const Vec3& v : mesh_vertices_) min_z = std::min(min_z, (pose.rotation * v).z);
    Vec3 rc = pose.rotation * centroid_;
    pose.translation = {xy.x - rc.x, xy.y - rc.y, -min_z};
    return pose;
}

RigidTransform settle_on_plane(const Mesh& mesh, const Mat3& initial_rotation, const Vec2& xy) {
    return StablePoseSolver(mesh).settle(initial_rotation, xy);
}

// ---------------------------------------------------------------------------
// OBB overlap
// ---------------------------------------------------------------------------

namespace {

void project_corners(const Obb& box, const Vec3& axis, double& lo, double& hi) {
    lo = std::numeric_limits<double>::infinity();
    hi = -lo;
    for (const Vec3& c : box.corners) {
        double d = dot(c, axis);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
}

}  // namespace

bool check_overlap(const Obb& a, const Obb& b) {
    Vec3 a_axes[3] = {a.corners[1] - a.corners[0], a.corners[2] - a.corners[0],
                      a.corners[4] - a.corners[0]};
    Vec3 b_axes[3] = {b.corners[1] - b.corners[0], b.corners[2] - b.corners[0],
                      b.corners[4] - b.corners[0]};

    double scale = 0.0;
    for (const Vec3& v : a_axes) scale = std::max(scale, norm(v));
    for (const Vec3& v : b_axes) scale = std::max(scale, norm(v));
    if (scale == 0.0) return false;  // two degenerate point boxes
    const double eps = 1e-12 * scale;

    std::vector<Vec3> axes;
    axes.reserve(15);
    for (const Vec3& v : a_axes)
        if (norm2(v) > 1e-24 * scale * scale) axes.push_back(normalized(v));
    for (const Vec3& v : b_axes)
        if (norm2(v) > 1e-24 * scale * scale) axes.push_back(normalized(v));
    for (const Vec3& u : a_axes)
        for (const Vec3& v : b_axes) {
            Vec3 c = cross(u, v);
            if (norm2(c) > 1e-18 * scale * scale * scale * scale) axes.push_back(normalized(c));
        }
    if (axes.empty()) return false;

    for (const Vec3& axis : axes) {
        double alo, ahi, blo, bhi;
        project_corners(a, axis, alo, ahi);
        project_corners(b, axis, blo, bhi);
        if (ahi <= blo + eps || bhi <= alo + eps) return false;  // face contact is not overlap
    }
    return true;
}

// ---------------------------------------------------------------------------
// Camera
// ---------------------------------------------------------------------------

Vec3 scene_focus(const SceneSpec& scene) {
    if (scene.objects.empty()) throw ValidationError("scene_focus: no placed objects");
    Vec3 sum{};
    for (const PlacedObject& obj : scene.objects) sum += obj.pose.apply(mesh_centroid(*obj.mesh));
    return sum / static_cast<double>(scene.objects.size());
}

RigidTransform sample_camera(const SceneSpec& scene, double radius, RngStream& rng,
                             const Interval& elevation_deg, const Interval& roll_deg,
                             bool full_sphere) {
    constexpr double tau = 2.0 * 3.14159265358979323846;
    Vec3 target = scene_focus(scene);

    Vec3 dir;
    if (full_sphere) {
        double z = rng.uniform(-1.0, 1.0);
        double az = rng.uniform(0.0, tau);
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        dir = {rho * std::cos(az), rho * std::sin(az), z};
    } else {
        double elev = rng.uniform(elevation_deg.lo, elevation_deg.hi) * kDegToRad;
        double az = rng.uniform(0.0, tau);
        dir = {std::cos(elev) * std::cos(az), std::cos(elev) * std::sin(az), std::sin(elev)};
    }
    Vec3 center = target + radius * dir;

    Vec3 forward = normalized(target - center);  // camera +Z
    Vec3 x_cam;
    Vec3 axis = cross(Vec3{0, 0, -1}, forward);
    if (norm2(axis) < 1e-16) {
        x_cam = {1, 0, 0};  // looking straight up/down
    } else {
        x_cam = normalized(axis);
    }
    Vec3 y_cam = cross(forward, x_cam);

    Mat3 c2w;
    for (int i = 0; i < 3; ++i) {
        c2w.m[static_cast<size_t>(i)][0] = x_cam[i];
        c2w.m[static_cast<size_t>(i)][1] = y_cam[i];
        c2w.m[static_cast<size_t>(i)][2] = forward[i];
    }
    double roll = rng.uniform(roll_deg.lo, roll_deg.hi) * kDegToRad;
    c2w = c2w * rotation_z(roll);

    return inverse(RigidTransform{c2w, center});
}

// ---------------------------------------------------------------------------
// Scene composition
// ---------------------------------------------------------------------------

namespace {

Mesh make_distractor_mesh(RngStream& rng, double size) {
    constexpr double tau = 2.0 * 3.14159265358979323846;
    for (int attempt = 0; attempt < 16; ++attempt) {
        int points = static_cast<int>(rng.uniform_int(8, 20));
        std::vector<Vec3> cloud;
        cloud.reserve(static_cast<size_t>(points));
        for (int i = 0; i < points; ++i) {
            double z = rng.uniform(-1.0, 1.0);
            double az = rng.uniform(0.0, tau);
            double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
            double r = size * rng.uniform(0.5, 1.0);
            cloud.push_back({r * rho * std::cos(az), r * rho * std::sin(az), r * z});
        }
        try {
            ConvexHull hull = convex_hull(cloud);
            Mesh mesh;
            mesh.name = "distractor";
            mesh.vertices = hull.points;
            for (const auto& f : hull.faces)
                mesh.triangles.push_back({static_cast<uint32_t>(f[0]), static_cast<uint32_t>(f[1]),
                                          static_cast<uint32_t>(f[2])});
            return mesh;
        } catch (const ValidationError&) {
            continue;  // degenerate cloud, redraw
        }
    }
    throw ValidationError("distractor generation failed repeatedly");
}

// Settled pose with an extra uniform yaw about the vertical axis; min-z and
// centroid-xy constraints are re-established after the yaw.
RigidTransform settled_pose_with_yaw(const StablePoseSolver& solver, const Mesh& mesh,
                                     RngStream& rng, double spread) {
    constexpr double tau = 2.0 * 3.14159265358979323846;
    Vec2 xy{rng.uniform(-spread, spread), rng.uniform(-spread, spread)};
    Mat3 base = solver.settle_rotation(random_rotation(rng));
    Mat3 rot = rotation_z(rng.uniform(0.0, tau)) * base;

    double min_z = std::numeric_limits<double>::infinity();
    for (const Vec3& v : mesh.vertices) min_z = std::min(min_z, (rot * v).z);
    Vec3 rc = rot * mesh_centroid(mesh);
    return {rot, {xy.x - rc.x, xy.y - rc.y, -min_z}};
}

}  // namespace

SceneSpec compose_scene(const ProcedureConfig& cfg, const Catalog& catalog, RngStream rng) {
    if (catalog.classes.empty()) throw ValidationError("compose_scene: catalog has no class meshes");
    if (!cfg.objects_per_scene.valid() || !cfg.distractors_per_scene.valid())
        throw ValidationError("compose_scene: invalid count ranges");
    if (cfg.max_pose_retries < 1) throw ValidationError("compose_scene: max_pose_retries must be >= 1");

    const ProcedureId proc = cfg.procedure;
    const bool ground = proc == ProcedureId::P1 || proc == ProcedureId::P3;
    const bool textured = proc == ProcedureId::P1 || proc == ProcedureId::P2;
    const bool has_backdrop = proc == ProcedureId::P3 || proc == ProcedureId::P4 || proc == ProcedureId::P5;

    SceneSpec scene;
    scene.procedure = proc;
    scene.plane_size = cfg.plane_size;

    if (textured) {
        scene.floor = FloorKind::TexturedPlane;
        if (!catalog.texture_files.empty())
            scene.floor_texture = read_png_rgb8(catalog.texture_files[rng.pick(catalog.texture_files.size())]);
        else
            scene.floor_texture = procedural_texture(rng);
    } else if (proc == ProcedureId::P3) {
        scene.floor = FloorKind::InvisiblePlane;
    } else {
        scene.floor = FloorKind::None;
    }

    if (has_backdrop) {
        if (!catalog.backdrop_files.empty())
            scene.backdrop = read_png_rgb8(catalog.backdrop_files[rng.pick(catalog.backdrop_files.size())]);
        else
            scene.backdrop = procedural_backdrop(rng);
    }

    scene.lights.push_back(sample_light(rng, cfg.plane_size, cfg.lights));

    std::vector<Obb> accepted;

    if (proc == ProcedureId::P5) {
        // Target-scene reconstruction: every categorized part at its
        // assembly-frame pose, passive structure likewise.
        int instance = 1;
        for (const CatalogObject& cls : catalog.classes) {
            if (!cls.placement)
                throw ValidationError("compose_scene: P5 requires a placement for '" + cls.name + "'");
            PlacedObject obj;
            obj.mesh = cls.mesh;
            obj.info = cls.info;
            obj.category_id = cls.category_id;
            obj.category_name = cls.category_name;
            obj.instance_id = instance++;
            obj.pose = *cls.placement;
            obj.material = randomize_material(rng, cfg.materials);
            accepted.push_back(obb_corners(obj.info, obj.pose));
            scene.objects.push_back(std::move(obj));
        }
        for (const CatalogObject& st : catalog.structure) {
            if (!st.placement)
                throw ValidationError("compose_scene: P5 requires a placement for '" + st.name + "'");
            SceneProp prop;
            prop.mesh = st.mesh;
            prop.info = st.info;
            prop.pose = *st.placement;
            prop.material = randomize_material(rng, cfg.materials);
            scene.structure.push_back(std::move(prop));
        }
    } else {
        const double spread = cfg.plane_size / 4.0;
        int count = static_cast<int>(
            rng.uniform_int(cfg.objects_per_scene.lo, cfg.objects_per_scene.hi));
        for (int i = 0; i < count; ++i) {
            const CatalogObject& cls = catalog.classes[rng.pick(catalog.classes.size())];
            PlacedObject obj;
            obj.mesh = cls.mesh;
            obj.info = cls.info;
            obj.category_id = cls.category_id;
            obj.category_name = cls.category_name;
            obj.instance_id = static_cast<int>(scene.objects.size()) + 1;
            obj.material = randomize_material(rng, cfg.materials);

            std::optional<StablePoseSolver> solver;
            if (ground) solver.emplace(*cls.mesh);

            bool placed = false;
            for (int attempt = 0; attempt < cfg.max_pose_retries; ++attempt) {
                RigidTransform pose = ground
                                          ? settled_pose_with_yaw(*solver, *cls.mesh, rng, spread)
                                          : sample_floating_pose(cfg.floating_bounds, rng);
                Obb box = obb_corners(obj.info, pose);
                bool collides = false;
                for (const Obb& other : accepted)
                    if (check_overlap(box, other)) { collides = true; break; }
                if (!collides) {
                    obj.pose = pose;
                    accepted.push_back(box);
                    placed = true;
                    break;
                }
            }
            if (!placed)
                throw PlacementError("compose_scene: could not place object '" + cls.name + "' after " +
                                     std::to_string(cfg.max_pose_retries) + " retries");
            scene.objects.push_back(std::move(obj));
        }
    }

    // Distractors: generated convex clutter, optionally structure meshes.
    int dcount = static_cast<int>(
        rng.uniform_int(cfg.distractors_per_scene.lo, cfg.distractors_per_scene.hi));
    const double spread = cfg.plane_size / 4.0;
    for (int i = 0; i < dcount; ++i) {
        SceneProp prop;
        bool use_structure = cfg.structure_as_distractors && proc != ProcedureId::P5 &&
                             !catalog.structure.empty() && rng.next_double() < 0.5;
        if (use_structure) {
            const CatalogObject& st = catalog.structure[rng.pick(catalog.structure.size())];
            prop.mesh = st.mesh;
            prop.info = st.info;
        } else {
            auto mesh = std::make_shared<Mesh>(make_distractor_mesh(rng, cfg.distractor_size));
            prop.info = mesh_stats(*mesh);
            prop.mesh = std::move(mesh);
        }
        prop.material = randomize_material(rng, cfg.materials);

        std::optional<StablePoseSolver> solver;
        if (ground) solver.emplace(*prop.mesh);

        bool placed = false;
        for (int attempt = 0; attempt < cfg.max_pose_retries; ++attempt) {
            RigidTransform pose = ground ? settled_pose_with_yaw(*solver, *prop.mesh, rng, spread)
                                         : sample_floating_pose(cfg.floating_bounds, rng);
            Obb box = obb_corners(prop.info, pose);
            bool collides = false;
            for (const Obb& other : accepted)
                if (check_overlap(box, other)) { collides = true; break; }
            if (!collides) {
                prop.pose = pose;
                accepted.push_back(box);
                placed = true;
                break;
            }
        }
        if (!placed)
            throw PlacementError("compose_scene: could not place distractor " + std::to_string(i + 1) +
                                 " after " + std::to_string(cfg.max_pose_retries) + " retries");
        scene.distractors.push_back(std::move(prop));
    }

    return scene;
}

// ---------------------------------------------------------------------------
// Invariant checking
// ---------------------------------------------------------------------------

void validate_scene(const SceneSpec& scene, const Catalog& catalog) {
    const ProcedureId proc = scene.procedure;

    // floor/backdrop pairing per procedure
    switch (proc) {
        case ProcedureId::P1:
        case ProcedureId::P2:
            if (scene.floor != FloorKind::TexturedPlane || scene.backdrop.has_value())
                throw ValidationError("scene: P1/P2 must pair a textured plane with no backdrop");
            break;
        case ProcedureId::P3:
            if (scene.floor != FloorKind::InvisiblePlane || !scene.backdrop.has_value())
                throw ValidationError("scene: P3 must pair an invisible plane with a backdrop");
            break;
        case ProcedureId::P4:
        case ProcedureId::P5:
            if (scene.floor != FloorKind::None || !scene.backdrop.has_value())
                throw ValidationError("scene: P4/P5 must pair no floor with a backdrop");
            break;
    }
    if (proc != ProcedureId::P5 && !scene.structure.empty())
        throw ValidationError("scene: structure entities outside P5");

    // instance ids contiguous from 1
    for (size_t i = 0; i < scene.objects.size(); ++i)
        if (scene.objects[i].instance_id != static_cast<int>(i) + 1)
            throw ValidationError("scene: instance ids must be contiguous from 1");

    // resting contact for the ground procedures
    if (proc == ProcedureId::P1 || proc == ProcedureId::P3) {
        for (const PlacedObject& obj : scene.objects) {
            double min_z = std::numeric_limits<double>::infinity();
            for (const Vec3& v : obj.mesh->vertices) min_z = std::min(min_z, obj.pose.apply(v).z);
            if (std::abs(min_z) > 1e-6)
                throw ValidationError("scene: settled object min-z " + std::to_string(min_z));
        }
    }

    // assembly poses bit-equal to the ingested placements (root = identity)
    if (proc == ProcedureId::P5) {
        for (const PlacedObject& obj : scene.objects) {
            const CatalogObject* src = nullptr;
            for (const CatalogObject& cls : catalog.classes)
                if (cls.category_id == obj.category_id) { src = &cls; break; }
            if (!src || !src->placement)
                throw ValidationError("scene: P5 object lacks a catalog placement");
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c)
                    if (obj.pose.rotation(r, c) != src->placement->rotation(r, c))
                        throw ValidationError("scene: P5 pose rotation differs from placement");
            Vec3 dt = obj.pose.translation - src->placement->translation;
            if (dt.x != 0.0 || dt.y != 0.0 || dt.z != 0.0)
                throw ValidationError("scene: P5 pose translation differs from placement");
        }
    }

    // pairwise OBB separation across everything pose-sampled
    std::vector<Obb> boxes;
    for (const PlacedObject& obj : scene.objects) boxes.push_back(obb_corners(obj.info, obj.pose));
    for (const SceneProp& d : scene.distractors) boxes.push_back(obb_corners(d.info, d.pose));
    for (size_t i = 0; i < boxes.size(); ++i)
        for (size_t j = i + 1; j < boxes.size(); ++j)
            if (check_overlap(boxes[i], boxes[j]))
                throw ValidationError("scene: OBB overlap between entities " + std::to_string(i) +
                                      " and " + std::to_string(j));

    // material fields within their closed intervals
    auto check_mat = [](const Material& m) {
        auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
        if (!in01(m.base_color.x) || !in01(m.base_color.y) || !in01(m.base_color.z) ||
            !in01(m.roughness) || !in01(m.specular) || !in01(m.metalness))
            throw ValidationError("scene: material field outside [0,1]");
    };
    for (const PlacedObject& o : scene.objects) check_mat(o.material);
    for (const SceneProp& d : scene.distractors) check_mat(d.material);
    for (const SceneProp& s : scene.structure) check_mat(s.material);

    if (scene.lights.empty()) throw ValidationError("scene: no lights");
}

}  // namespace synthforge
