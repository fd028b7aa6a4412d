#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "synthforge/geometry.hpp"
#include "synthforge/image.hpp"
#include "synthforge/rng.hpp"

namespace synthforge {

// The five generation recipes: {textured plane | image backdrop} x
// {settled on ground | floating in 3D | assembly-placed}.
enum class ProcedureId { P1, P2, P3, P4, P5 };

const char* procedure_name(ProcedureId p);
ProcedureId procedure_from_name(const std::string& name);
inline constexpr std::array<ProcedureId, 5> kAllProcedures{
    ProcedureId::P1, ProcedureId::P2, ProcedureId::P3, ProcedureId::P4, ProcedureId::P5};

struct Interval {
    double lo = 0.0, hi = 0.0;
    bool valid() const { return hi >= lo; }
};

struct IntRange {
    int lo = 0, hi = 0;
    bool valid() const { return hi >= lo; }
};

struct Material {
    Vec3 base_color{0.5, 0.5, 0.5};
    double roughness = 0.5;
    double specular = 0.5;
    double metalness = 0.0;
};

struct MaterialRanges {
    Interval base_color{0.05, 0.95};
    Interval roughness{0.1, 0.9};
    Interval specular{0.1, 0.8};
    Interval metalness{0.0, 0.9};
};

enum class LightKind { Sun, Point, Plane };

struct LightSpec {
    LightKind kind = LightKind::Sun;
    Vec3 color{1, 1, 1};     // [0,1] per channel
    double intensity = 1.0;  // artifact-defined watts-equivalent scale
    Vec3 position{};         // point/plane only, meters
    Vec3 direction{0, 0, 1}; // sun only: unit vector toward the sun
    double plane_half_extent = 0.0;  // plane only, meters
};

struct LightRanges {
    Interval intensity{1.0, 4.0};
    Interval color{0.7, 1.0};
};

struct Aabb {
    Vec3 min{}, max{};
    bool valid() const { return max.x >= min.x && max.y >= min.y && max.z >= min.z; }
    Vec3 extent() const { return max - min; }
};

struct ProcedureConfig {
    ProcedureId procedure = ProcedureId::P1;
    int num_scenes = 10;                 // outer loop
    int views_per_scene = 5;             // inner loop
    IntRange objects_per_scene{1, 3};
    IntRange distractors_per_scene{2, 6};
    Aabb floating_bounds{{-0.4, -0.4, 0.05}, {0.4, 0.4, 0.9}};  // P2/P4 (and floating distractors)
    double plane_size = 2.0;             // textured plane edge length, meters
    Interval camera_radius{0.6, 1.2};
    Interval elevation_deg{5.0, 85.0};   // P1/P3; P2/P4/P5 sample the full sphere
    Interval roll_deg{-180.0, 180.0};
    int max_pose_retries = 100;
    uint64_t seed = 0;
    double distractor_size = 0.08;       // radius scale of generated convex clutter
    bool structure_as_distractors = false;  // reuse structure meshes as clutter in P1-P4
    MaterialRanges materials;
    LightRanges lights;
};

// One renderable entity of the ingested CAD catalog.
struct CatalogObject {
    std::string name;
    std::shared_ptr<const Mesh> mesh;
    ModelInfo info;
    int category_id = 0;             // 0 for structure entries
    std::string category_name;
    std::optional<RigidTransform> placement;  // assembly-frame pose, meters
};

struct Catalog {
    std::vector<CatalogObject> classes;
    std::vector<CatalogObject> structure;
    std::vector<std::filesystem::path> texture_files;   // empty -> procedural
    std::vector<std::filesystem::path> backdrop_files;  // empty -> procedural
};

struct PlacedObject {
    std::shared_ptr<const Mesh> mesh;
    ModelInfo info;
    int category_id = 0;
    std::string category_name;
    int instance_id = 0;  // contiguous from 1 within the scene
    RigidTransform pose;
    Material material;
};

// Distractor or passive-structure entity: rendered, never annotated.
struct SceneProp {
    std::shared_ptr<const Mesh> mesh;
    ModelInfo info;
    RigidTransform pose;
    Material material;
};

enum class FloorKind { None, TexturedPlane, InvisiblePlane };

struct SceneSpec {
    ProcedureId procedure = ProcedureId::P1;
    std::vector<PlacedObject> objects;
    std::vector<SceneProp> distractors;
    std::vector<SceneProp> structure;  // nonempty only for P5
    FloorKind floor = FloorKind::None;
    double plane_size = 0.0;
    Image8 floor_texture;              // set when floor == TexturedPlane
    std::optional<Image8> backdrop;
    std::vector<LightSpec> lights;
};

// ---------------------------------------------------------------------------
// Sampling primitives
// ---------------------------------------------------------------------------

// Translation uniform in bounds, rotation uniform on SO(3).
RigidTransform sample_floating_pose(const Aabb& bounds, RngStream& rng);

Mat3 random_rotation(RngStream& rng);

Material randomize_material(RngStream& rng, const MaterialRanges& ranges);

LightSpec sample_light(RngStream& rng, double plane_size, const LightRanges& ranges);

// Quasi-static stable-pose solver: convex hull faces merged into planar
// polygons, rolled downhill from an initial orientation until the centroid
// projects inside a supporting face that no neighbor undercuts. The result
// snaps to the basin's canonical orientation (face normal rotated onto -z
// by the minimal rotation), so e.g. a cube settles onto one of its 6 face
// orientations.
class StablePoseSolver {
public:
    explicit StablePoseSolver(const Mesh& mesh);

    Mat3 settle_rotation(const Mat3& initial_rotation) const;

    // Full settled pose: rotation from the basin, min-z = 0, centroid at xy.
    RigidTransform settle(const Mat3& initial_rotation, const Vec2& xy) const;

    const Vec3& centroid() const { return centroid_; }

private:
    struct FaceGroup {
        Vec3 normal{};
        double offset = 0.0;  // dot(normal, p) = offset
        double height = 0.0;  // centroid distance to the plane
        std::vector<std::pair<int, int>> boundary;  // directed hull-point index pairs
        std::vector<int> neighbors;                 // group index per boundary edge
    };

    int start_group(const Vec3& down_body) const;
    bool projection_inside(const FaceGroup& g, const Vec3& q, int* worst_edge) const;

    std::vector<Vec3> hull_points_;
    std::vector<FaceGroup> groups_;
    Vec3 centroid_{};
    std::vector<Vec3> mesh_vertices_;
    double scale_ = 1.0;
};

// One-shot convenience over StablePoseSolver.
RigidTransform settle_on_plane(const Mesh& mesh, const Mat3& initial_rotation, const Vec2& xy);

// True iff the boxes intersect with positive volume (15-axis separating
// axis test). Exact face contact is not overlap.
bool check_overlap(const Obb& a, const Obb& b);

// World-to-camera pose on a sphere of the given radius around the mean of
// the placed objects' centroids, optical axis through that mean.
// full_sphere=false restricts elevation to elevation_deg above horizontal.
RigidTransform sample_camera(const SceneSpec& scene, double radius, RngStream& rng,
                             const Interval& elevation_deg, const Interval& roll_deg,
                             bool full_sphere);

Vec3 scene_focus(const SceneSpec& scene);  // mean of placed-object centroids

// Full per-procedure scene composition. `rng` must be the dedicated stream
// of one scene index; the result is a pure function of (cfg, catalog,
// stream state). Throws PlacementError when max_pose_retries is exceeded.
SceneSpec compose_scene(const ProcedureConfig& cfg, const Catalog& catalog, RngStream rng);

// Checks every SceneSpec type invariant; throws ValidationError with the
// first violation. Used by tests and the acceptance suite.
void validate_scene(const SceneSpec& scene, const Catalog& catalog);

}  // namespace synthforge
