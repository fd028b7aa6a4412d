#include "synthforge/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "synthforge/errors.hpp"

namespace synthforge {

double rotation_defect(const Mat3& r) {
    Mat3 g = r.transposed() * r;
    double worst = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            double want = (i == j) ? 1.0 : 0.0;
            worst = std::max(worst, std::abs(g.m[i][j] - want));
        }
    return worst;
}

bool is_rotation(const Mat3& r, double tol) {
    return rotation_defect(r) <= tol && std::abs(r.det() - 1.0) <= tol;
}

Mat3 axis_angle_rotation(const Vec3& axis, double angle_rad) {
    Vec3 u = normalized(axis);
    double c = std::cos(angle_rad), s = std::sin(angle_rad), t = 1.0 - c;
    Mat3 r;
    r.m[0] = {t * u.x * u.x + c, t * u.x * u.y - s * u.z, t * u.x * u.z + s * u.y};
    r.m[1] = {t * u.x * u.y + s * u.z, t * u.y * u.y + c, t * u.y * u.z - s * u.x};
    r.m[2] = {t * u.x * u.z - s * u.y, t * u.y * u.z + s * u.x, t * u.z * u.z + c};
    return r;
}

Mat3 rotation_z(double angle_rad) {
    return axis_angle_rotation({0, 0, 1}, angle_rad);
}

Mat3 quat_to_rotation(double w, double x, double y, double z) {
    double n = std::sqrt(w * w + x * x + y * y + z * z);
    w /= n; x /= n; y /= n; z /= n;
    Mat3 r;
    r.m[0] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
    r.m[1] = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
    r.m[2] = {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
    return r;
}

Mat3 rpy_to_rotation(double roll_deg, double pitch_deg, double yaw_deg) {
    double r = roll_deg * kDegToRad, p = pitch_deg * kDegToRad, y = yaw_deg * kDegToRad;
    Mat3 rx = axis_angle_rotation({1, 0, 0}, r);
    Mat3 ry = axis_angle_rotation({0, 1, 0}, p);
    Mat3 rz = axis_angle_rotation({0, 0, 1}, y);
    return rz * (ry * rx);
}

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
    RigidTransform r;
    r.rotation = a.rotation * b.rotation;
    r.translation = a.rotation * b.translation + a.translation;
    return r;
}

RigidTransform inverse(const RigidTransform& t) {
    RigidTransform r;
    r.rotation = t.rotation.transposed();
    r.translation = -(r.rotation * t.translation);
    return r;
}

Vec2 project(const CameraIntrinsics& k, const Vec3& p_cam) {
    if (!(p_cam.z > 0.0))
        throw ValidationError("project: point behind camera (z <= 0)");
    return {k.fx * p_cam.x / p_cam.z + k.cx, k.fy * p_cam.y / p_cam.z + k.cy};
}

Vec3 unproject(const CameraIntrinsics& k, const Vec2& px, double z) {
    return {(px.x - k.cx) / k.fx * z, (px.y - k.cy) / k.fy * z, z};
}

Vec3 mesh_centroid(const Mesh& mesh) {
    Vec3 c{};
    for (const Vec3& v : mesh.vertices) c += v;
    return c / static_cast<double>(mesh.vertices.size());
}

namespace {

double max_pairwise_distance(const std::vector<Vec3>& pts) {
    double best = 0.0;
    for (size_t i = 0; i < pts.size(); ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
            best = std::max(best, norm2(pts[i] - pts[j]));
    return std::sqrt(best);
}

}  // namespace

ModelInfo mesh_stats(const Mesh& mesh) {
    if (mesh.vertices.empty())
        throw ValidationError("mesh_stats: empty mesh");

    Vec3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
    Vec3 hi = -lo;
    for (const Vec3& v : mesh.vertices) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
    }

    double diameter;
    if (mesh.vertices.size() <= 10000) {
        diameter = max_pairwise_distance(mesh.vertices);
    } else {
        // The diameter of a point set equals the diameter of its hull vertices.
        try {
            diameter = max_pairwise_distance(convex_hull(mesh.vertices).points);
        } catch (const ValidationError&) {
            diameter = max_pairwise_distance(mesh.vertices);  // degenerate hull
        }
    }

    ModelInfo info;
    info.diameter = diameter;
    info.min_x = lo.x; info.min_y = lo.y; info.min_z = lo.z;
    info.size_x = hi.x - lo.x; info.size_y = hi.y - lo.y; info.size_z = hi.z - lo.z;
    return info;
}

Obb obb_corners(const ModelInfo& info, const RigidTransform& pose) {
    Vec3 lo{info.min_x, info.min_y, info.min_z};
    Vec3 sz{info.size_x, info.size_y, info.size_z};
    Obb box;
    for (int i = 0; i < 8; ++i) {
        Vec3 local{lo.x + ((i & 1) ? sz.x : 0.0),
                   lo.y + ((i & 2) ? sz.y : 0.0),
                   lo.z + ((i & 4) ? sz.z : 0.0)};
        box.corners[static_cast<size_t>(i)] = pose.apply(local);
    }
    return box;
}

// ---------------------------------------------------------------------------
// Quickhull
// ---------------------------------------------------------------------------

namespace {

struct HullFace {
    std::array<int, 3> v{};       // indices into the input point list
    Vec3 normal{};                // unit outward normal
    double offset = 0.0;          // plane: dot(normal, p) = offset
    std::vector<int> outside;     // points strictly outside this face
    bool alive = true;
};

double plane_dist(const HullFace& f, const Vec3& p) {
    return dot(f.normal, p) - f.offset;
}

HullFace make_face(const std::vector<Vec3>& pts, int a, int b, int c, const Vec3& interior) {
    HullFace f;
    f.v = {a, b, c};
    Vec3 n = cross(pts[static_cast<size_t>(b)] - pts[static_cast<size_t>(a)],
                   pts[static_cast<size_t>(c)] - pts[static_cast<size_t>(a)]);
    double len = norm(n);
    if (len > 0) n = n / len;
    f.normal = n;
    f.offset = dot(n, pts[static_cast<size_t>(a)]);
    if (plane_dist(f, interior) > 0) {  // flip to point away from the interior
        std::swap(f.v[1], f.v[2]);
        f.normal = -f.normal;
        f.offset = -f.offset;
    }
    return f;
}

}  // namespace

ConvexHull convex_hull(const std::vector<Vec3>& points) {
    const size_t n = points.size();
    if (n < 4) throw ValidationError("convex_hull: fewer than 4 points");

    Vec3 lo = points[0], hi = points[0];
    for (const Vec3& p : points) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    const double scale = std::max({hi.x - lo.x, hi.y - lo.y, hi.z - lo.z, 1e-300});
    const double eps = 1e-9 * scale;

    // Initial simplex: extreme pair, farthest from their line, farthest from plane.
    size_t i0 = 0, i1 = 0;
    double best = -1.0;
    for (int axis = 0; axis < 3; ++axis) {
        size_t a = 0, b = 0;
        for (size_t i = 1; i < n; ++i) {
            if (points[i][axis] < points[a][axis]) a = i;
            if (points[i][axis] > points[b][axis]) b = i;
        }
        double d = norm2(points[a] - points[b]);
        if (d > best) { best = d; i0 = a; i1 = b; }
    }
    if (std::sqrt(std::max(best, 0.0)) <= eps)
        throw ValidationError("convex_hull: degenerate input (single point)");

    Vec3 dir = normalized(points[i1] - points[i0]);
    size_t i2 = n;
    best = eps;
    for (size_t i = 0; i < n; ++i) {
        Vec3 rej = (points[i] - points[i0]) - dot(points[i] - points[i0], dir) * dir;
        double d = norm(rej);
        if (d > best) { best = d; i2 = i; }
    }
    if (i2 == n) throw ValidationError("convex_hull: degenerate input (collinear points)");

    Vec3 pn = normalized(cross(points[i1] - points[i0], points[i2] - points[i0]));
    size_t i3 = n;
    best = eps;
    for (size_t i = 0; i < n; ++i) {
        double d = std::abs(dot(points[i] - points[i0], pn));
        if (d > best) { best = d; i3 = i; }
    }
    if (i3 == n) throw ValidationError("convex_hull: degenerate input (coplanar points)");

    Vec3 interior = (points[i0] + points[i1] + points[i2] + points[i3]) / 4.0;

    std::vector<HullFace> faces;
    auto add_face = [&](int a, int b, int c) {
        faces.push_back(make_face(points, a, b, c, interior));
        return static_cast<int>(faces.size()) - 1;
    };
    add_face(static_cast<int>(i0), static_cast<int>(i1), static_cast<int>(i2));
    add_face(static_cast<int>(i0), static_cast<int>(i1), static_cast<int>(i3));
    add_face(static_cast<int>(i0), static_cast<int>(i2), static_cast<int>(i3));
    add_face(static_cast<int>(i1), static_cast<int>(i2), static_cast<int>(i3));

    for (size_t i = 0; i < n; ++i) {
        if (i == i0 || i == i1 || i == i2 || i == i3) continue;
        double far_d = eps;
        int far_f = -1;
        for (size_t f = 0; f < faces.size(); ++f) {
            double d = plane_dist(faces[f], points[i]);
            if (d > far_d) { far_d = d; far_f = static_cast<int>(f); }
        }
        if (far_f >= 0) faces[static_cast<size_t>(far_f)].outside.push_back(static_cast<int>(i));
    }

    // Iteratively insert the farthest outside point of any live face.
    while (true) {
        int face_idx = -1;
        for (size_t f = 0; f < faces.size(); ++f)
            if (faces[f].alive && !faces[f].outside.empty()) { face_idx = static_cast<int>(f); break; }
        if (face_idx < 0) break;

        HullFace& seed = faces[static_cast<size_t>(face_idx)];
        int apex = seed.outside[0];
        double apex_d = plane_dist(seed, points[static_cast<size_t>(apex)]);
        for (int pi : seed.outside) {
            double d = plane_dist(seed, points[static_cast<size_t>(pi)]);
            if (d > apex_d) { apex_d = d; apex = pi; }
        }

        // All faces visible from the apex die; their border is the horizon.
        std::vector<int> visible;
        std::vector<int> orphan_points;
        for (size_t f = 0; f < faces.size(); ++f) {
            if (!faces[f].alive) continue;
            if (plane_dist(faces[f], points[static_cast<size_t>(apex)]) > eps) {
                visible.push_back(static_cast<int>(f));
                faces[f].alive = false;
                orphan_points.insert(orphan_points.end(), faces[f].outside.begin(),
                                     faces[f].outside.end());
                faces[f].outside.clear();
            }
        }

        // Horizon edges: edges of visible faces shared with no other visible face.
        struct Edge { int a, b; };
        std::vector<Edge> horizon;
        auto edge_count = [&](int a, int b) {
            int cnt = 0;
            for (int vf : visible) {
                const auto& t = faces[static_cast<size_t>(vf)].v;
                for (int e = 0; e < 3; ++e) {
                    int ea = t[static_cast<size_t>(e)], eb = t[static_cast<size_t>((e + 1) % 3)];
                    if ((ea == a && eb == b) || (ea == b && eb == a)) ++cnt;
                }
            }
            return cnt;
        };
        for (int vf : visible) {
            const auto& t = faces[static_cast<size_t>(vf)].v;
            for (int e = 0; e < 3; ++e) {
                int a = t[static_cast<size_t>(e)], b = t[static_cast<size_t>((e + 1) % 3)];
                if (edge_count(a, b) == 1) horizon.push_back({a, b});
            }
        }

        std::vector<int> fresh;
        for (const Edge& e : horizon)
            fresh.push_back(add_face(e.a, e.b, apex));

        for (int pi : orphan_points) {
            if (pi == apex) continue;
            double far_d = eps;
            int far_f = -1;
            for (int nf : fresh) {
                double d = plane_dist(faces[static_cast<size_t>(nf)], points[static_cast<size_t>(pi)]);
                if (d > far_d) { far_d = d; far_f = nf; }
            }
            if (far_f >= 0) faces[static_cast<size_t>(far_f)].outside.push_back(pi);
        }
    }

    // Compact: remap used input indices onto the hull's own vertex list.
    std::vector<int> remap(n, -1);
    ConvexHull hull;
    for (const HullFace& f : faces) {
        if (!f.alive) continue;
        std::array<int, 3> tri{};
        for (int k = 0; k < 3; ++k) {
            int src = f.v[static_cast<size_t>(k)];
            if (remap[static_cast<size_t>(src)] < 0) {
                remap[static_cast<size_t>(src)] = static_cast<int>(hull.points.size());
                hull.points.push_back(points[static_cast<size_t>(src)]);
            }
            tri[static_cast<size_t>(k)] = remap[static_cast<size_t>(src)];
        }
        hull.faces.push_back(tri);
    }
    return hull;
}

}  // namespace synthforge
