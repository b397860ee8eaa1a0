#include "gazesynth/mesh.hpp"
#include "gazesynth/error.hpp"
#include "gazesynth/facemodel.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gazesynth {

std::vector<int> required_mesh_landmarks()
{
    std::vector<int> ids;
    for (int i = 0; i <= 26; ++i) {
        ids.push_back(i);
    }
    for (int i : landmark::six) {
        ids.push_back(i);
    }
    return ids;
}

void PatchMesh::validate() const
{
    const auto n = static_cast<int>(vertices.size());
    if (colors.size() != vertices.size()) {
        throw Error(ErrorCode::InvalidArgument, "color count differs from vertex count");
    }
    for (const auto& v : vertices) {
        if (!v.allFinite()) {
            throw Error(ErrorCode::InvalidArgument, "non-finite vertex");
        }
    }
    for (const auto& tri : triangles) {
        for (int idx : tri) {
            if (idx < 0 || idx >= n) {
                throw Error(ErrorCode::InvalidArgument,
                            "triangle index " + std::to_string(idx) + " out of range");
            }
        }
    }
    for (const auto& [semantic, vertex] : landmark_map) {
        if (vertex < 0 || vertex >= n) {
            throw Error(ErrorCode::MalformedLandmarks,
                        "landmark " + std::to_string(semantic) + " maps outside the mesh");
        }
    }
    for (int id : required_mesh_landmarks()) {
        if (!landmark_map.contains(id)) {
            throw Error(ErrorCode::MalformedLandmarks,
                        "landmark " + std::to_string(id) + " is not mapped");
        }
    }
    for (const auto& [name, vertex] : markers) {
        if (vertex < 0 || vertex >= n) {
            throw Error(ErrorCode::InvalidArgument, "marker '" + name + "' out of range");
        }
    }
}

const Vec3& MetricMesh::landmark(int semantic_index) const
{
    const auto it = landmark_map.find(semantic_index);
    if (it == landmark_map.end()) {
        throw Error(ErrorCode::MalformedLandmarks,
                    "landmark " + std::to_string(semantic_index) + " is not mapped");
    }
    return vertices.at(static_cast<std::size_t>(it->second));
}

namespace {

class LineReader
{
public:
    explicit LineReader(const std::filesystem::path& path) : path_(path), in_(path)
    {
        if (!in_) {
            throw Error(ErrorCode::Io, "cannot open " + path.string());
        }
    }

    /// Next non-comment line; false at end of file.
    bool next(std::istringstream& out)
    {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_no_;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') {
                continue;
            }
            out.clear();
            out.str(line);
            return true;
        }
        return false;
    }

    [[noreturn]] void fail(const std::string& what) const
    {
        throw Error(ErrorCode::Parse, path_.string() + ":" + std::to_string(line_no_) + ": " + what);
    }

    std::size_t section(const std::string& name)
    {
        std::istringstream ls;
        if (!next(ls)) {
            fail("expected section '" + name + "'");
        }
        std::string got;
        long long count = -1;
        if (!(ls >> got >> count) || got != name || count < 0) {
            fail("expected '" + name + " <count>'");
        }
        return static_cast<std::size_t>(count);
    }

    std::filesystem::path path_;
    std::ifstream in_;
    int line_no_ = 0;
};

} // namespace

PatchMesh read_patch_mesh(const std::filesystem::path& path)
{
    LineReader reader(path);
    std::istringstream ls;
    if (!reader.next(ls)) {
        reader.fail("empty file");
    }
    std::string magic;
    int version = 0;
    if (!(ls >> magic >> version) || magic != "patchmesh" || version != 1) {
        reader.fail("expected header 'patchmesh 1'");
    }

    PatchMesh mesh;
    const std::size_t n = reader.section("vertices");
    mesh.vertices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double u, v, d;
        if (!reader.next(ls) || !(ls >> u >> v >> d)) {
            reader.fail("expected 'u v d'");
        }
        mesh.vertices.emplace_back(u, v, d);
    }
    if (reader.section("colors") != n) {
        reader.fail("color count must equal vertex count");
    }
    mesh.colors.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        double r, g, b;
        if (!reader.next(ls) || !(ls >> r >> g >> b)) {
            reader.fail("expected 'r g b'");
        }
        mesh.colors.emplace_back(r, g, b);
    }
    const std::size_t m = reader.section("triangles");
    mesh.triangles.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        Triangle t{};
        if (!reader.next(ls) || !(ls >> t[0] >> t[1] >> t[2])) {
            reader.fail("expected 'i j k'");
        }
        mesh.triangles.push_back(t);
    }
    const std::size_t k = reader.section("landmarks");
    for (std::size_t i = 0; i < k; ++i) {
        int semantic, vertex;
        if (!reader.next(ls) || !(ls >> semantic >> vertex)) {
            reader.fail("expected 'semantic_index vertex_index'");
        }
        mesh.landmark_map[semantic] = vertex;
    }
    if (reader.next(ls)) {
        std::string name;
        long long count = -1;
        if (!(ls >> name >> count) || name != "markers" || count < 0) {
            reader.fail("expected 'markers <count>' or end of file");
        }
        for (long long i = 0; i < count; ++i) {
            std::string marker;
            int vertex;
            if (!reader.next(ls) || !(ls >> marker >> vertex)) {
                reader.fail("expected 'name vertex_index'");
            }
            mesh.markers[marker] = vertex;
        }
    }
    mesh.validate();
    return mesh;
}

void write_patch_mesh(const PatchMesh& mesh, const std::filesystem::path& path)
{
    std::FILE* f = std::fopen(path.string().c_str(), "w");
    if (f == nullptr) {
        throw Error(ErrorCode::Io, "cannot write " + path.string());
    }
    std::fprintf(f, "patchmesh 1\nvertices %zu\n", mesh.vertices.size());
    for (const auto& v : mesh.vertices) {
        std::fprintf(f, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    }
    std::fprintf(f, "colors %zu\n", mesh.colors.size());
    for (const auto& c : mesh.colors) {
        std::fprintf(f, "%.9g %.9g %.9g\n", c.x(), c.y(), c.z());
    }
    std::fprintf(f, "triangles %zu\n", mesh.triangles.size());
    for (const auto& t : mesh.triangles) {
        std::fprintf(f, "%d %d %d\n", t[0], t[1], t[2]);
    }
    std::fprintf(f, "landmarks %zu\n", mesh.landmark_map.size());
    for (const auto& [semantic, vertex] : mesh.landmark_map) {
        std::fprintf(f, "%d %d\n", semantic, vertex);
    }
    if (!mesh.markers.empty()) {
        std::fprintf(f, "markers %zu\n", mesh.markers.size());
        for (const auto& [name, vertex] : mesh.markers) {
            std::fprintf(f, "%s %d\n", name.c_str(), vertex);
        }
    }
    const bool ok = std::fflush(f) == 0;
    std::fclose(f);
    if (!ok) {
        throw Error(ErrorCode::Io, "failed writing " + path.string());
    }
}

} // namespace gazesynth
