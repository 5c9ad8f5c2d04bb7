#include "sphmesh/mesh_io.hpp"

#include <fstream>
#include <sstream>

#include "sphmesh/errors.hpp"

namespace sphmesh {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open for writing: " + path);
    f.precision(17);
    return f;
}

void write_vtk_points_header(std::ofstream& f, const std::vector<Vec3>& pts,
                             const std::string& title) {
    f << "# vtk DataFile Version 3.0\n" << title << "\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    f << "POINTS " << pts.size() << " double\n";
    for (const auto& p : pts) f << p.x << " " << p.y << " " << p.z << "\n";
}

} // namespace

void write_particles_vtk(const ParticleSystem& sys, const std::string& path) {
    auto f = open_out(path);
    f << "# vtk DataFile Version 3.0\nparticles\nASCII\nDATASET UNSTRUCTURED_GRID\n";
    f << "POINTS " << sys.size() << " double\n";
    for (std::size_t i = 0; i < sys.size(); ++i)
        f << sys.pos[i].x << " " << sys.pos[i].y << " " << sys.pos[i].z << "\n";
    f << "CELLS " << sys.size() << " " << 2 * sys.size() << "\n";
    for (std::size_t i = 0; i < sys.size(); ++i) f << "1 " << i << "\n";
    f << "CELL_TYPES " << sys.size() << "\n";
    for (std::size_t i = 0; i < sys.size(); ++i) f << "1\n";
    f << "POINT_DATA " << sys.size() << "\n";
    f << "SCALARS type int 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < sys.size(); ++i) f << static_cast<int>(sys.type[i]) << "\n";
    f << "SCALARS feature int 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < sys.size(); ++i) f << sys.feature[i] << "\n";
    f << "SCALARS h double 1\nLOOKUP_TABLE default\n";
    for (std::size_t i = 0; i < sys.size(); ++i) f << sys.h[i] << "\n";
}

void write_trimesh_vtk(const TriMesh& mesh, const std::string& path) {
    auto f = open_out(path);
    write_vtk_points_header(f, mesh.vertices, "triangle mesh");
    f << "CELLS " << mesh.triangles.size() << " " << 4 * mesh.triangles.size() << "\n";
    for (const auto& t : mesh.triangles) f << "3 " << t[0] << " " << t[1] << " " << t[2] << "\n";
    f << "CELL_TYPES " << mesh.triangles.size() << "\n";
    for (std::size_t i = 0; i < mesh.triangles.size(); ++i) f << "5\n";
}

void write_trimesh_obj(const TriMesh& mesh, const std::string& path) {
    auto f = open_out(path);
    for (const auto& v : mesh.vertices) f << "v " << v.x << " " << v.y << " " << v.z << "\n";
    for (const auto& t : mesh.triangles)
        f << "f " << t[0] + 1 << " " << t[1] + 1 << " " << t[2] + 1 << "\n";
}

void write_points_vtk(const std::vector<Vec3>& points, const std::string& path) {
    auto f = open_out(path);
    write_vtk_points_header(f, points, "points");
    f << "CELLS " << points.size() << " " << 2 * points.size() << "\n";
    for (std::size_t i = 0; i < points.size(); ++i) f << "1 " << i << "\n";
    f << "CELL_TYPES " << points.size() << "\n";
    for (std::size_t i = 0; i < points.size(); ++i) f << "1\n";
}

namespace {

ImportedMesh read_obj(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open: " + path);
    ImportedMesh m;
    std::string line;
    while (std::getline(f, line)) {
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3 p;
            ls >> p.x >> p.y >> p.z;
            m.vertices.push_back(p);
        } else if (tag == "f") {
            std::vector<int> idx;
            std::string tok;
            while (ls >> tok) {
                // strip texture/normal refs: "12/3/4" -> 12
                idx.push_back(std::stoi(tok.substr(0, tok.find('/'))) - 1);
            }
            for (std::size_t k = 2; k < idx.size(); ++k)
                m.triangles.push_back({idx[0], idx[k - 1], idx[k]});
        }
    }
    return m;
}

ImportedMesh read_vtk(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open: " + path);
    ImportedMesh m;
    std::string tok;
    std::vector<std::vector<int>> cells;
    while (f >> tok) {
        if (tok == "POINTS") {
            std::size_t n;
            std::string type;
            f >> n >> type;
            m.vertices.resize(n);
            for (auto& p : m.vertices) f >> p.x >> p.y >> p.z;
        } else if (tok == "CELLS") {
            std::size_t n, total;
            f >> n >> total;
            cells.resize(n);
            for (auto& c : cells) {
                int cnt;
                f >> cnt;
                c.resize(cnt);
                for (auto& v : c) f >> v;
            }
        } else if (tok == "CELL_TYPES") {
            std::size_t n;
            f >> n;
            if (n != cells.size()) throw Error("vtk: CELL_TYPES count mismatch in " + path);
            for (std::size_t c = 0; c < n; ++c) {
                int t;
                f >> t;
                if (t == 5 && cells[c].size() == 3)
                    m.triangles.push_back({cells[c][0], cells[c][1], cells[c][2]});
                else if (t == 10 && cells[c].size() == 4)
                    m.tets.push_back({cells[c][0], cells[c][1], cells[c][2], cells[c][3]});
            }
        }
    }
    if (m.vertices.empty()) throw Error("vtk: no POINTS section in " + path);
    return m;
}

} // namespace

ImportedMesh read_mesh(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : path.substr(dot + 1);
    if (ext == "obj") return read_obj(path);
    return read_vtk(path);
}

} // namespace sphmesh
