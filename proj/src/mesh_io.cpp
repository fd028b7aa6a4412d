#include "synthforge/mesh_io.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "synthforge/errors.hpp"

namespace synthforge {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return data;
}

[[noreturn]] void format_fail(const std::filesystem::path& path, size_t offset,
                              const std::string& what) {
    throw FormatError(path.string() + ": " + what + " (byte offset " + std::to_string(offset) + ")");
}

// Accumulates triangle soup and de-duplicates vertices by exact coordinates.
struct SoupBuilder {
    Mesh mesh;
    std::map<std::array<double, 3>, uint32_t> index;

    uint32_t vertex(double x, double y, double z) {
        std::array<double, 3> key{x, y, z};
        auto it = index.find(key);
        if (it != index.end()) return it->second;
        uint32_t id = static_cast<uint32_t>(mesh.vertices.size());
        index.emplace(key, id);
        mesh.vertices.push_back({x, y, z});
        return id;
    }

    void triangle(uint32_t a, uint32_t b, uint32_t c) { mesh.triangles.push_back({a, b, c}); }
};

float read_f32le(const char* p) {
    uint32_t bits;
    std::memcpy(&bits, p, 4);
    float f;
    std::memcpy(&f, &bits, 4);
    return f;
}

uint32_t read_u32le(const char* p) {
    uint32_t v;
    std::memcpy(&v, p, 4);
    return v;
}

Mesh load_stl_binary(const std::filesystem::path& path, const std::string& data) {
    if (data.size() < 84) format_fail(path, data.size(), "binary STL truncated before triangle count");
    uint32_t count = read_u32le(data.data() + 80);
    size_t want = 84 + 50ull * count;
    if (data.size() < want)
        format_fail(path, data.size(), "binary STL truncated (declares " + std::to_string(count) +
                                           " triangles)");
    if (count == 0) throw ValidationError(path.string() + ": mesh has zero triangles");

    SoupBuilder soup;
    for (uint32_t t = 0; t < count; ++t) {
        const char* rec = data.data() + 84 + 50ull * t;
        uint32_t ids[3];
        for (int v = 0; v < 3; ++v) {
            const char* vp = rec + 12 + 12 * v;  // skip normal
            ids[v] = soup.vertex(read_f32le(vp), read_f32le(vp + 4), read_f32le(vp + 8));
        }
        soup.triangle(ids[0], ids[1], ids[2]);
    }
    return std::move(soup.mesh);
}

Mesh load_stl_ascii(const std::filesystem::path& path, const std::string& data) {
    std::istringstream in(data);
    std::string tok;
    if (!(in >> tok) || tok != "solid")
        format_fail(path, 0, "ASCII STL must start with 'solid'");
    std::string line;
    std::getline(in, line);  // rest of the solid line (name)

    SoupBuilder soup;
    while (in >> tok) {
        if (tok == "endsolid") break;
        if (tok != "facet")
            format_fail(path, static_cast<size_t>(in.tellg()), "expected 'facet', got '" + tok + "'");
        double nx, ny, nz;
        if (!(in >> tok >> nx >> ny >> nz) || tok != "normal")
            format_fail(path, static_cast<size_t>(std::max<std::streamoff>(in.tellg(), 0)),
                        "malformed facet normal");
        if (!(in >> tok) || tok != "outer" || !(in >> tok) || tok != "loop")
            format_fail(path, static_cast<size_t>(std::max<std::streamoff>(in.tellg(), 0)),
                        "expected 'outer loop'");
        uint32_t ids[3];
        for (int v = 0; v < 3; ++v) {
            double x, y, z;
            if (!(in >> tok >> x >> y >> z) || tok != "vertex")
                format_fail(path, static_cast<size_t>(std::max<std::streamoff>(in.tellg(), 0)),
                            "malformed vertex");
            ids[v] = soup.vertex(x, y, z);
        }
        if (!(in >> tok) || tok != "endloop" || !(in >> tok) || tok != "endfacet")
            format_fail(path, static_cast<size_t>(std::max<std::streamoff>(in.tellg(), 0)),
                        "expected 'endloop endfacet'");
        soup.triangle(ids[0], ids[1], ids[2]);
    }
    if (soup.mesh.triangles.empty()) throw ValidationError(path.string() + ": mesh has zero triangles");
    return std::move(soup.mesh);
}

Mesh load_ply(const std::filesystem::path& path, const std::string& data) {
    std::istringstream in(data);
    std::string line;
    if (!std::getline(in, line) || line.substr(0, 3) != "ply")
        format_fail(path, 0, "missing 'ply' magic");

    size_t vertex_count = 0, face_count = 0;
    // Per-vertex property order; we track the column of x/y/z/red/green/blue.
    std::vector<std::string> vertex_props;
    std::string element;
    bool ascii = false;
    size_t header_offset = 0;
    while (std::getline(in, line)) {
        header_offset = static_cast<size_t>(in.tellg());
        std::istringstream ls(line);
        std::string kw;
        ls >> kw;
        if (kw == "comment") continue;
        if (kw == "format") {
            std::string f;
            ls >> f;
            if (f != "ascii") format_fail(path, header_offset, "only ASCII PLY is supported");
            ascii = true;
        } else if (kw == "element") {
            size_t cnt;
            ls >> element >> cnt;
            if (element == "vertex") vertex_count = cnt;
            else if (element == "face") face_count = cnt;
        } else if (kw == "property") {
            if (element == "vertex") {
                std::string type, name;
                ls >> type;
                if (type == "list") ls >> name >> name;  // unusual, skip list types here
                ls >> name;
                vertex_props.push_back(name);
            }
        } else if (kw == "end_header") {
            break;
        } else if (kw.empty()) {
            continue;
        }
    }
    if (!ascii) format_fail(path, header_offset, "missing format declaration");
    if (vertex_count == 0) format_fail(path, header_offset, "no vertex element");

    auto prop_col = [&](const char* name) {
        auto it = std::find(vertex_props.begin(), vertex_props.end(), name);
        return it == vertex_props.end() ? -1 : static_cast<int>(it - vertex_props.begin());
    };
    int cx = prop_col("x"), cy = prop_col("y"), cz = prop_col("z");
    int cr = prop_col("red"), cg = prop_col("green"), cb = prop_col("blue");
    if (cx < 0 || cy < 0 || cz < 0) format_fail(path, header_offset, "vertex element lacks x/y/z");
    bool has_color = cr >= 0 && cg >= 0 && cb >= 0;

    Mesh mesh;
    mesh.vertices.reserve(vertex_count);
    for (size_t i = 0; i < vertex_count; ++i) {
        if (!std::getline(in, line))
            format_fail(path, data.size(), "truncated vertex list");
        std::istringstream ls(line);
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        if (vals.size() < vertex_props.size())
            format_fail(path, static_cast<size_t>(in.tellg()), "short vertex row " + std::to_string(i));
        mesh.vertices.push_back({vals[static_cast<size_t>(cx)], vals[static_cast<size_t>(cy)],
                                 vals[static_cast<size_t>(cz)]});
        if (has_color)
            mesh.vertex_colors.push_back({vals[static_cast<size_t>(cr)] / 255.0,
                                          vals[static_cast<size_t>(cg)] / 255.0,
                                          vals[static_cast<size_t>(cb)] / 255.0});
    }
    for (size_t i = 0; i < face_count; ++i) {
        if (!std::getline(in, line))
            format_fail(path, data.size(), "truncated face list");
        std::istringstream ls(line);
        size_t cnt;
        if (!(ls >> cnt) || cnt < 3)
            format_fail(path, static_cast<size_t>(in.tellg()), "bad face row " + std::to_string(i));
        std::vector<uint32_t> idx(cnt);
        for (size_t k = 0; k < cnt; ++k) {
            long long id;
            if (!(ls >> id) || id < 0 || static_cast<size_t>(id) >= mesh.vertices.size())
                format_fail(path, static_cast<size_t>(in.tellg()),
                            "face index out of range in row " + std::to_string(i));
            idx[k] = static_cast<uint32_t>(id);
        }
        for (size_t k = 1; k + 1 < cnt; ++k) mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
    }
    if (mesh.triangles.empty()) throw ValidationError(path.string() + ": mesh has zero triangles");
    return mesh;
}

Mesh load_obj(const std::filesystem::path& path, const std::string& data) {
    std::istringstream in(data);
    std::string line;
    Mesh mesh;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string kw;
        if (!(ls >> kw)) continue;
        if (kw == "v") {
            double x, y, z;
            if (!(ls >> x >> y >> z))
                format_fail(path, static_cast<size_t>(in.tellg()),
                            "malformed vertex at line " + std::to_string(lineno));
            mesh.vertices.push_back({x, y, z});
        } else if (kw == "f") {
            std::vector<uint32_t> idx;
            std::string ref;
            while (ls >> ref) {
                // forms: i, i/t, i//n, i/t/n ; negative = relative to end
                long long vi = std::strtoll(ref.c_str(), nullptr, 10);
                if (vi < 0) vi = static_cast<long long>(mesh.vertices.size()) + vi + 1;
                if (vi < 1 || static_cast<size_t>(vi) > mesh.vertices.size())
                    format_fail(path, static_cast<size_t>(in.tellg()),
                                "face index out of range at line " + std::to_string(lineno));
                idx.push_back(static_cast<uint32_t>(vi - 1));
            }
            if (idx.size() < 3)
                format_fail(path, static_cast<size_t>(in.tellg()),
                            "face with fewer than 3 vertices at line " + std::to_string(lineno));
            for (size_t k = 1; k + 1 < idx.size(); ++k)
                mesh.triangles.push_back({idx[0], idx[k], idx[k + 1]});
        }
        // vn/vt/usemtl/o/g/s/mtllib are pass-through
    }
    if (mesh.triangles.empty()) throw ValidationError(path.string() + ": mesh has zero triangles");
    return mesh;
}

MeshFormat detect_format(const std::filesystem::path& path, const std::string& data) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (ext == ".ply") return MeshFormat::Ply;
    if (ext == ".obj") return MeshFormat::Obj;
    if (ext == ".stl") {
        // Binary iff the declared record count matches the file size.
        if (data.size() >= 84) {
            uint32_t count = read_u32le(data.data() + 80);
            if (data.size() == 84 + 50ull * count) return MeshFormat::StlBinary;
        }
        if (data.compare(0, 5, "solid") == 0) return MeshFormat::StlAscii;
        return MeshFormat::StlBinary;
    }
    if (data.compare(0, 3, "ply") == 0) return MeshFormat::Ply;
    if (data.compare(0, 5, "solid") == 0) return MeshFormat::StlAscii;
    throw FormatError(path.string() + ": cannot detect mesh format from extension or magic bytes");
}

void validate(const std::filesystem::path& path, const Mesh& mesh) {
    for (const auto& t : mesh.triangles)
        for (uint32_t i : t)
            if (i >= mesh.vertices.size())
                throw ValidationError(path.string() + ": triangle index out of range");
    for (const Vec3& v : mesh.vertices)
        if (!std::isfinite(v.x) || !std::isfinite(v.y) || !std::isfinite(v.z))
            throw ValidationError(path.string() + ": non-finite vertex coordinate");
}

}  // namespace

Mesh load_mesh(const std::filesystem::path& path, MeshFormat format, double unit_scale) {
    std::string data = read_file(path);
    if (format == MeshFormat::Auto) format = detect_format(path, data);

    Mesh mesh;
    switch (format) {
        case MeshFormat::StlAscii: mesh = load_stl_ascii(path, data); break;
        case MeshFormat::StlBinary: mesh = load_stl_binary(path, data); break;
        case MeshFormat::Ply: mesh = load_ply(path, data); break;
        case MeshFormat::Obj: mesh = load_obj(path, data); break;
        case MeshFormat::Auto: break;  // unreachable
    }
    for (Vec3& v : mesh.vertices) v = v * unit_scale;
    mesh.name = path.stem().string();
    validate(path, mesh);
    return mesh;
}

namespace {

void append_f32le(std::string& out, float f) {
    uint32_t bits;
    std::memcpy(&bits, &f, 4);
    char b[4] = {static_cast<char>(bits & 0xff), static_cast<char>((bits >> 8) & 0xff),
                 static_cast<char>((bits >> 16) & 0xff), static_cast<char>((bits >> 24) & 0xff)};
    out.append(b, 4);
}

void append_u32le(std::string& out, uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    out.append(b, 4);
}

void write_file(const std::filesystem::path& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot create " + path.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace

void write_mesh(const std::filesystem::path& path, const Mesh& mesh, MeshFormat format,
                double unit_scale) {
    auto v_out = [&](uint32_t i) { return mesh.vertices[i] / unit_scale; };
    std::ostringstream txt;
    txt.precision(9);

    switch (format) {
        case MeshFormat::StlAscii: {
            txt << "solid " << (mesh.name.empty() ? "mesh" : mesh.name) << "\n";
            for (const auto& t : mesh.triangles) {
                Vec3 a = v_out(t[0]), b = v_out(t[1]), c = v_out(t[2]);
                Vec3 n = cross(b - a, c - a);
                double len = norm(n);
                if (len > 0) n = n / len;
                txt << "  facet normal " << n.x << " " << n.y << " " << n.z << "\n"
                    << "    outer loop\n";
                for (const Vec3& p : {a, b, c})
                    txt << "      vertex " << p.x << " " << p.y << " " << p.z << "\n";
                txt << "    endloop\n  endfacet\n";
            }
            txt << "endsolid " << (mesh.name.empty() ? "mesh" : mesh.name) << "\n";
            write_file(path, txt.str());
            return;
        }
        case MeshFormat::StlBinary: {
            std::string out(80, '\0');
            append_u32le(out, static_cast<uint32_t>(mesh.triangles.size()));
            for (const auto& t : mesh.triangles) {
                Vec3 a = v_out(t[0]), b = v_out(t[1]), c = v_out(t[2]);
                Vec3 n = cross(b - a, c - a);
                double len = norm(n);
                if (len > 0) n = n / len;
                for (const Vec3& p : {n, a, b, c}) {
                    append_f32le(out, static_cast<float>(p.x));
                    append_f32le(out, static_cast<float>(p.y));
                    append_f32le(out, static_cast<float>(p.z));
                }
                out.append(2, '\0');
            }
            write_file(path, out);
            return;
        }
        case MeshFormat::Ply: {
            bool colors = mesh.vertex_colors.size() == mesh.vertices.size();
            txt << "ply\nformat ascii 1.0\nelement vertex " << mesh.vertices.size() << "\n"
                << "property float x\nproperty float y\nproperty float z\n";
            if (colors)
                txt << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
            txt << "element face " << mesh.triangles.size() << "\n"
                << "property list uchar int vertex_indices\nend_header\n";
            for (size_t i = 0; i < mesh.vertices.size(); ++i) {
                Vec3 p = v_out(static_cast<uint32_t>(i));
                txt << p.x << " " << p.y << " " << p.z;
                if (colors) {
                    const Vec3& c = mesh.vertex_colors[i];
                    auto u8 = [](double v) { return std::clamp(static_cast<int>(std::lround(v * 255.0)), 0, 255); };
                    txt << " " << u8(c.x) << " " << u8(c.y) << " " << u8(c.z);
                }
                txt << "\n";
            }
            for (const auto& t : mesh.triangles)
                txt << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
            write_file(path, txt.str());
            return;
        }
        case MeshFormat::Obj: {
            txt << "# " << (mesh.name.empty() ? "mesh" : mesh.name) << "\n";
            for (size_t i = 0; i < mesh.vertices.size(); ++i) {
                Vec3 p = v_out(static_cast<uint32_t>(i));
                txt << "v " << p.x << " " << p.y << " " << p.z << "\n";
            }
            for (const auto& t : mesh.triangles)
                txt << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
            write_file(path, txt.str());
            return;
        }
        case MeshFormat::Auto:
            throw ValidationError("write_mesh: explicit format required");
    }
}

}  // namespace synthforge
