#pragma once

#include <array>
#include <vector>

#include "sphmesh/levelset.hpp"
#include "sphmesh/vec.hpp"

namespace sphmesh {

struct TriMesh {
    std::vector<Vec3> vertices;
    std::vector<std::array<int, 3>> triangles;
};

/// Incremental Bowyer-Watson construction. Duplicate points within
/// 1e-12 * bounding-box diagonal are merged; the output satisfies the
/// empty-circumcircle property, with cocircular ties resolved by insertion
/// order. Throws on fully collinear input.
TriMesh delaunay_2d(const std::vector<Vec3>& points);

/// Keep triangles whose centroid lies in the positive phase.
TriMesh filter_to_domain(const TriMesh& mesh, const LevelSetGrid& grid);

} // namespace sphmesh
