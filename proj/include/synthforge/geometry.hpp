#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace synthforge {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
    Vec3 operator-() const { return {-x, -y, -z}; }
    Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }

    double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }
inline double norm2(const Vec3& v) { return dot(v, v); }
inline Vec3 normalized(const Vec3& v) { return v / norm(v); }

struct Vec2 {
    double x = 0.0, y = 0.0;
};

// Row-major 3x3 matrix.
struct Mat3 {
    std::array<std::array<double, 3>, 3> m{};

    static Mat3 identity() {
        Mat3 r;
        r.m[0][0] = r.m[1][1] = r.m[2][2] = 1.0;
        return r;
    }

    double& operator()(int r, int c) { return m[r][c]; }
    double operator()(int r, int c) const { return m[r][c]; }

    Vec3 operator*(const Vec3& v) const {
        return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
                m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
                m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
    }

    Mat3 operator*(const Mat3& o) const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m[i][j] = m[i][0] * o.m[0][j] + m[i][1] * o.m[1][j] + m[i][2] * o.m[2][j];
        return r;
    }

    Mat3 transposed() const {
        Mat3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
        return r;
    }

    double det() const {
        return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
               m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
               m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    }

    Vec3 row(int i) const { return {m[i][0], m[i][1], m[i][2]}; }
    Vec3 col(int j) const { return {m[0][j], m[1][j], m[2][j]}; }
};

// Max |entry| of R^T R - I, used by the orthonormality checks.
double rotation_defect(const Mat3& r);
bool is_rotation(const Mat3& r, double tol = 1e-9);

Mat3 axis_angle_rotation(const Vec3& axis, double angle_rad);
Mat3 rotation_z(double angle_rad);

// Unit quaternion (w, x, y, z) to rotation matrix.
Mat3 quat_to_rotation(double w, double x, double y, double z);

// Extrinsic X-Y-Z Euler composition: R = Rz(yaw) * Ry(pitch) * Rx(roll).
// Angles in degrees.
Mat3 rpy_to_rotation(double roll_deg, double pitch_deg, double yaw_deg);

// SE(3) pose: p_out = rotation * p_in + translation. Translation in meters.
struct RigidTransform {
    Mat3 rotation = Mat3::identity();
    Vec3 translation{};

    Vec3 apply(const Vec3& p) const { return rotation * p + translation; }

    static RigidTransform identity() { return {}; }
};

// Applies b first, then a.
RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform inverse(const RigidTransform& t);

struct CameraIntrinsics {
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
    int width = 0, height = 0;

    bool valid() const {
        return fx > 0 && fy > 0 && width > 0 && height > 0 && cx >= 0 && cx < width &&
               cy >= 0 && cy < height;
    }
};

// Pinhole projection of a camera-frame point (+Z forward, +X right, +Y down).
// Throws ValidationError when p_cam.z <= 0.
Vec2 project(const CameraIntrinsics& k, const Vec3& p_cam);

// Inverse pinhole map at fixed depth z > 0.
Vec3 unproject(const CameraIntrinsics& k, const Vec2& px, double z);

// Indexed triangle mesh. Coordinates in meters; vertex_colors in [0,1],
// empty when the source file carries none.
struct Mesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<uint32_t, 3>> triangles;
    std::vector<Vec3> vertex_colors;
    std::string name;

    bool empty() const { return vertices.empty() || triangles.empty(); }
};

struct ModelInfo {
    double diameter = 0.0;               // max pairwise vertex distance
    double min_x = 0.0, min_y = 0.0, min_z = 0.0;
    double size_x = 0.0, size_y = 0.0, size_z = 0.0;
};

// Diameter, componentwise minimum and extent. Exact O(n^2) up to 10k
// vertices, convex-hull reduction above. Throws ValidationError on an
// empty mesh.
ModelInfo mesh_stats(const Mesh& mesh);

// 8 posed corners of the model-local box [min, min+size], ordered by
// binary counting over (x, y, z): corner i picks max on axis a when bit a
// of i is set.
struct Obb {
    std::array<Vec3, 8> corners{};
};

Obb obb_corners(const ModelInfo& info, const RigidTransform& pose);

Vec3 mesh_centroid(const Mesh& mesh);

// Convex hull with outward-oriented triangles. `points` are hull vertices
// only. Throws ValidationError when the input is degenerate (all points
// within tolerance of a common plane).
struct ConvexHull {
    std::vector<Vec3> points;
    std::vector<std::array<int, 3>> faces;
};

ConvexHull convex_hull(const std::vector<Vec3>& points);

constexpr double kDegToRad = 3.14159265358979323846 / 180.0;

}  // namespace synthforge
