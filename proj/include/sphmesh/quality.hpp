#pragma once

#include <array>
#include <string>
#include <vector>

#include "sphmesh/delaunay.hpp"
#include "sphmesh/vec.hpp"

namespace sphmesh {

struct TriangleQuality {
    double g = 0.0;                      // 2 sqrt(3) S / (P H), 1 for equilateral
    std::array<double, 3> angles{};      // interior angles, degrees
};

struct TetQuality {
    double radius_ratio = 0.0;           // 3 r_in / r_circ, 1 for regular
    std::array<double, 6> dihedrals{};   // degrees
};

/// Degenerate triangles report g = 0 with angles {0, 0, 180}.
TriangleQuality triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c);

/// Degenerate tetrahedra report ratio 0.
TetQuality tet_quality(const std::array<Vec3, 4>& t);

struct QualityReport {
    // Triangles
    long long tri_count = 0;
    double g_avg = 0.0, g_min = 0.0;
    double theta_max = 0.0, theta_min = 0.0;
    double theta_min_avg = 0.0;          // mean of per-element minimum angles
    long long theta_below_30 = 0;
    // Tets
    long long tet_count = 0;
    double ratio_avg = 0.0, ratio_min = 0.0;
    double dihedral_min = 0.0, dihedral_max = 0.0;
    double dihedral_min_avg = 0.0;
    long long sliver_below_10 = 0, sliver_below_20 = 0, sliver_below_30 = 0, sliver_below_40 = 0;
};

QualityReport quality_report(const TriMesh& mesh);
QualityReport quality_report_tets(const std::vector<Vec3>& vertices,
                                  const std::vector<std::array<int, 4>>& tets);

void write_quality_csv(const QualityReport& rep, const std::string& path);
std::string quality_summary(const QualityReport& rep);

} // namespace sphmesh
