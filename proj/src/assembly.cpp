#include "synthforge/assembly.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "synthforge/errors.hpp"

namespace synthforge {

RigidTransform to_pose(const AssemblyPlacement& p) {
    RigidTransform t;
    t.rotation = rpy_to_rotation(p.rpy_deg.x, p.rpy_deg.y, p.rpy_deg.z);
    t.translation = p.translation_mm / 1000.0;
    return t;
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

// Rows of a comma-separated UTF-8 file, first row is the header.
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        rows.push_back(split_csv_row(line));
    }
    return rows;
}

int header_column(const std::vector<std::string>& header, const std::string& name,
                  const std::filesystem::path& path, bool required) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        if (required)
            throw SchemaError(path.string() + ": missing required column '" + name + "'");
        return -1;
    }
    return static_cast<int>(it - header.begin());
}

ComponentKind parse_kind(const std::string& s, const std::filesystem::path& path, size_t row) {
    if (s == "part") return ComponentKind::Part;
    if (s == "sub-assembly") return ComponentKind::SubAssembly;
    if (s == "main-assembly") return ComponentKind::MainAssembly;
    throw SchemaError(path.string() + ": row " + std::to_string(row) + ": unknown kind '" + s + "'");
}

}  // namespace

std::vector<ComponentRecord> parse_part_list(const std::filesystem::path& csv_path) {
    auto rows = read_csv(csv_path);
    if (rows.empty()) throw SchemaError(csv_path.string() + ": empty part list");
    int name_col = header_column(rows[0], "component_name", csv_path, true);
    int kind_col = header_column(rows[0], "kind", csv_path, true);
    if (rows.size() < 2) throw SchemaError(csv_path.string() + ": part list has no rows");

    std::vector<ComponentRecord> out;
    std::set<std::string> seen;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<int>(row.size()) <= std::max(name_col, kind_col))
            throw SchemaError(csv_path.string() + ": row " + std::to_string(r + 1) + ": too few cells");
        ComponentRecord rec;
        rec.component_name = row[static_cast<size_t>(name_col)];
        if (rec.component_name.empty())
            throw SchemaError(csv_path.string() + ": row " + std::to_string(r + 1) +
                              ": empty component name");
        if (!seen.insert(rec.component_name).second)
            throw SchemaError(csv_path.string() + ": row " + std::to_string(r + 1) +
                              ": duplicate component '" + rec.component_name + "'");
        rec.kind = parse_kind(row[static_cast<size_t>(kind_col)], csv_path, r + 1);
        out.push_back(std::move(rec));
    }
    return out;
}

std::vector<CategoryAssignment> parse_category_list(const std::filesystem::path& csv_path,
                                                    const std::vector<ComponentRecord>& parts) {
    auto rows = read_csv(csv_path);
    if (rows.empty()) return {};  // no categories means no active objects
    int name_col = header_column(rows[0], "component_name", csv_path, true);
    int cat_col = header_column(rows[0], "category_name", csv_path, true);
    int id_col = header_column(rows[0], "category_id", csv_path, false);

    std::set<std::string> known;
    for (const auto& p : parts) known.insert(p.component_name);

    std::vector<CategoryAssignment> out;
    std::set<std::string> seen_components;
    int next_id = 1;
    for (size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (static_cast<int>(row.size()) <= std::max(name_col, cat_col))
            throw SchemaError(csv_path.string() + ": row " + std::to_string(r + 1) + ": too few cells");
        CategoryAssignment a;
        a.component_name = row[static_cast<size_t>(name_col)];
        a.category_name = row[static_cast<size_t>(cat_col)];
        if (!known.count(a.component_name))
            throw SchemaError(csv_path.string() + ": row " + std::to_string(r + 1) + ": component '" +
                              a.component_name + "' not in part list");
        if (!seen_components.insert(a.component_name).second)
            throw SchemaError(csv_path.string() + ": row " + std::to_string(r + 1) +
                              ": component '" + a.component_name + "' categorized twice");
        if (id_col >= 0 && static_cast<int>(row.size()) > id_col &&
            !row[static_cast<size_t>(id_col)].empty()) {
            a.category_id = std::stoi(row[static_cast<size_t>(id_col)]);
            if (a.category_id < 1)
                throw SchemaError(csv_path.string() + ": row " + std::to_string(r + 1) +
                                  ": category_id must be >= 1");
            next_id = std::max(next_id, a.category_id + 1);
        } else {
            a.category_id = next_id++;
        }
        out.push_back(std::move(a));
    }

    // One name per id and one id per name.
    std::set<int> ids;
    std::set<std::string> names;
    for (const auto& a : out) {
        if (!ids.insert(a.category_id).second)
            throw SchemaError(csv_path.string() + ": duplicate category_id " +
                              std::to_string(a.category_id));
        if (!names.insert(a.category_name).second)
            throw SchemaError(csv_path.string() + ": duplicate category name '" + a.category_name +
                              "'");
    }
    return out;
}

std::vector<AssemblyPlacement> parse_placements(const std::filesystem::path& json_path,
                                                PlacementRole role) {
    std::ifstream in(json_path);
    if (!in) throw IoError("cannot open " + json_path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(json_path.string() + ": " + e.what());
    }
    if (!doc.is_object()) throw SchemaError(json_path.string() + ": top level must be an object");

    auto vec3_field = [&](const nlohmann::json& obj, const std::string& comp,
                          const char* key) -> Vec3 {
        std::string where = json_path.string() + ": $." + comp + "." + key;
        if (!obj.contains(key)) throw SchemaError(where + ": missing");
        const auto& arr = obj.at(key);
        if (!arr.is_array() || arr.size() != 3)
            throw SchemaError(where + ": expected an array of 3 numbers");
        Vec3 v;
        double* fields[3] = {&v.x, &v.y, &v.z};
        for (int i = 0; i < 3; ++i) {
            if (!arr[static_cast<size_t>(i)].is_number())
                throw SchemaError(where + "[" + std::to_string(i) + "]: not a number");
            *fields[i] = arr[static_cast<size_t>(i)].get<double>();
            if (!std::isfinite(*fields[i]))
                throw SchemaError(where + "[" + std::to_string(i) + "]: not finite");
        }
        return v;
    };

    std::vector<AssemblyPlacement> out;
    for (const auto& [name, entry] : doc.items()) {
        if (!entry.is_object())
            throw SchemaError(json_path.string() + ": $." + name + ": expected an object");
        AssemblyPlacement p;
        p.component_name = name;
        p.translation_mm = vec3_field(entry, name, "translation_mm");
        p.rpy_deg = vec3_field(entry, name, "rpy_deg");
        p.role = role;
        out.push_back(std::move(p));
    }
    return out;
}

std::optional<std::filesystem::path> resolve_mesh_file(const std::filesystem::path& folder,
                                                       const std::string& component_name) {
    for (const char* ext : {".ply", ".stl", ".obj"}) {
        std::filesystem::path candidate = folder / (component_name + ext);
        if (std::filesystem::exists(candidate)) return candidate;
    }
    return std::nullopt;
}

}  // namespace synthforge
