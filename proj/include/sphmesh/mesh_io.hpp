#pragma once

#include <array>
#include <string>
#include <vector>

#include "sphmesh/delaunay.hpp"
#include "sphmesh/particles.hpp"
#include "sphmesh/vec.hpp"

namespace sphmesh {

struct ImportedMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
    std::vector<std::array<int, 4>> tets;
};

/// Legacy ASCII VTK unstructured grid with per-point type/feature/h scalars.
void write_particles_vtk(const ParticleSystem& sys, const std::string& path);

void write_trimesh_vtk(const TriMesh& mesh, const std::string& path);
void write_trimesh_obj(const TriMesh& mesh, const std::string& path);
void write_points_vtk(const std::vector<Vec3>& points, const std::string& path);

/// Reads legacy ASCII VTK unstructured grids (triangles and tetrahedra) and
/// OBJ triangle meshes (by extension).
ImportedMesh read_mesh(const std::string& path);

} // namespace sphmesh
