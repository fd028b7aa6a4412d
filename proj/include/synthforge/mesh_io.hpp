#pragma once

#include <filesystem>

#include "synthforge/geometry.hpp"

namespace synthforge {

enum class MeshFormat { Auto, StlAscii, StlBinary, Ply, Obj };

// Loads a triangle mesh. File coordinates are interpreted in millimeters
// by default and scaled by `unit_scale` into meters. Auto format detection
// uses the extension plus magic bytes (binary vs ASCII STL by record size).
// STL vertices are de-duplicated by exact coordinate equality. PLY uchar
// red/green/blue become vertex_colors in [0,1]. OBJ polygon faces are
// fan-triangulated.
//
// Throws FormatError (with byte offset for malformed headers), IoError,
// or ValidationError (zero triangles).
Mesh load_mesh(const std::filesystem::path& path, MeshFormat format = MeshFormat::Auto,
               double unit_scale = 0.001);

// Writes a mesh, dividing coordinates by `unit_scale` (meters back to the
// file's native millimeters by default). StlAscii/StlBinary drop colors;
// Ply keeps them when present.
void write_mesh(const std::filesystem::path& path, const Mesh& mesh, MeshFormat format,
                double unit_scale = 0.001);

}  // namespace synthforge
