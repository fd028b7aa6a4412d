#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "synthforge/geometry.hpp"

namespace synthforge {

enum class ComponentKind { Part, SubAssembly, MainAssembly };

struct ComponentRecord {
    std::string component_name;
    ComponentKind kind = ComponentKind::Part;
};

struct CategoryAssignment {
    std::string component_name;
    std::string category_name;
    int category_id = 0;  // >= 1
};

enum class PlacementRole { Class, Structure };

struct AssemblyPlacement {
    std::string component_name;
    Vec3 translation_mm{};
    Vec3 rpy_deg{};
    PlacementRole role = PlacementRole::Class;
};

// Millimeter translation plus RPY degrees to an SE(3) pose in meters.
RigidTransform to_pose(const AssemblyPlacement& p);

// CSV with header `component_name,kind`; kind is one of
// part | sub-assembly | main-assembly. Duplicate names are rejected.
std::vector<ComponentRecord> parse_part_list(const std::filesystem::path& csv_path);

// CSV with header `component_name,category_name[,category_id]`. Without an
// explicit id column, ids are assigned by first appearance starting at 1.
// Every component must exist in `parts`.
std::vector<CategoryAssignment> parse_category_list(const std::filesystem::path& csv_path,
                                                    const std::vector<ComponentRecord>& parts);

// JSON object: component_name -> {"translation_mm": [x,y,z], "rpy_deg": [r,p,y]}.
std::vector<AssemblyPlacement> parse_placements(const std::filesystem::path& json_path,
                                                PlacementRole role);

// Mesh file for a component inside `folder`: .ply preferred, then .stl, .obj.
std::optional<std::filesystem::path> resolve_mesh_file(const std::filesystem::path& folder,
                                                       const std::string& component_name);

}  // namespace synthforge
