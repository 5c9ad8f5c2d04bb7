#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "sphmesh/mesh_io.hpp"
#include "sphmesh/quality.hpp"

using namespace sphmesh;

namespace {

std::array<Vec3, 4> regular_tet(double scale = 1.0) {
    return {Vec3{1, 1, 1} * scale, Vec3{1, -1, -1} * scale, Vec3{-1, 1, -1} * scale,
            Vec3{-1, -1, 1} * scale};
}

Vec3 rotate_z(const Vec3& p, double ang) {
    return {p.x * std::cos(ang) - p.y * std::sin(ang), p.x * std::sin(ang) + p.y * std::cos(ang),
            p.z};
}

} // namespace

TEST_CASE("triangle fixtures") {
    auto eq = triangle_quality({0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0});
    CHECK(eq.g == doctest::Approx(1.0).epsilon(1e-12));
    for (double a : eq.angles) CHECK(a == doctest::Approx(60.0).epsilon(1e-9));

    // Right isoceles, legs 1: G = 2 sqrt(3) * 0.5 / (((2 + sqrt(2))/2) * sqrt(2)).
    auto ri = triangle_quality({0, 0, 0}, {1, 0, 0}, {0, 1, 0});
    double expect = 2.0 * std::sqrt(3.0) * 0.5 / (0.5 * (2.0 + std::sqrt(2.0)) * std::sqrt(2.0));
    CHECK(expect == doctest::Approx(0.7174).epsilon(1e-4));
    CHECK(ri.g == doctest::Approx(expect).epsilon(1e-6));

    auto degen = triangle_quality({0, 0, 0}, {1, 0, 0}, {2, 0, 0});
    CHECK(degen.g == 0.0);
    CHECK(degen.angles[2] == doctest::Approx(180.0));
}

TEST_CASE("tet fixtures") {
    auto reg = tet_quality(regular_tet());
    CHECK(reg.radius_ratio == doctest::Approx(1.0).epsilon(1e-9));
    double expect = std::acos(1.0 / 3.0) * 180.0 / M_PI; // 70.5288 degrees
    for (double d : reg.dihedrals) CHECK(d == doctest::Approx(expect).epsilon(1e-6));

    // Near-coplanar sliver.
    auto sliver = tet_quality({Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.5, 1, 0},
                               Vec3{0.5, 0.5, 1e-3}});
    CHECK(sliver.radius_ratio < 0.05);
}

TEST_CASE("quality metrics are scale and rigid-motion invariant") {
    auto base_tri = triangle_quality({0.2, 0.1, 0}, {1.3, 0.4, 0}, {0.6, 1.2, 0});
    Vec3 shift{3.7, -2.1, 0};
    auto moved = triangle_quality(rotate_z({0.2, 0.1, 0}, 0.77) + shift,
                                  rotate_z({1.3, 0.4, 0}, 0.77) + shift,
                                  rotate_z({0.6, 1.2, 0}, 0.77) + shift);
    CHECK(moved.g == doctest::Approx(base_tri.g).epsilon(1e-9));
    auto scaled = triangle_quality({2.0, 1.0, 0}, {13.0, 4.0, 0}, {6.0, 12.0, 0});
    auto small = triangle_quality({0.2, 0.1, 0}, {1.3, 0.4, 0}, {0.6, 1.2, 0});
    CHECK(scaled.g == doctest::Approx(small.g).epsilon(1e-9));

    auto t1 = tet_quality(regular_tet());
    auto t10 = tet_quality(regular_tet(10.0));
    CHECK(t10.radius_ratio == doctest::Approx(t1.radius_ratio).epsilon(1e-9));
    for (int e = 0; e < 6; ++e)
        CHECK(t10.dihedrals[e] == doctest::Approx(t1.dihedrals[e]).epsilon(1e-9));
}

TEST_CASE("aggregate report for triangles") {
    TriMesh mesh;
    mesh.vertices = {{0, 0, 0}, {1, 0, 0}, {0.5, std::sqrt(3.0) / 2.0, 0},
                     {1.5, std::sqrt(3.0) / 2.0, 0}};
    mesh.triangles = {{0, 1, 2}, {1, 3, 2}};
    auto rep = quality_report(mesh);
    CHECK(rep.tri_count == 2);
    CHECK(rep.g_avg == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.g_min == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rep.theta_min_avg == doctest::Approx(60.0).epsilon(1e-9));
    CHECK(rep.theta_below_30 == 0);

    CHECK_THROWS(quality_report(TriMesh{}));
}

TEST_CASE("sliver census with a constructed 15-degree tet") {
    // Flat tet over an equilateral base (side 1): apex height t gives a
    // minimum dihedral atan(2 sqrt(3) t) at the base edges.
    double t = std::tan(15.0 * M_PI / 180.0) / (2.0 * std::sqrt(3.0));
    std::array<Vec3, 4> flat{Vec3{0, 0, 0}, Vec3{1, 0, 0}, Vec3{0.5, std::sqrt(3.0) / 2.0, 0},
                             Vec3{0.5, std::sqrt(3.0) / 6.0, t}};
    auto fq = tet_quality(flat);
    double dmin = *std::min_element(fq.dihedrals.begin(), fq.dihedrals.end());
    CHECK(dmin == doctest::Approx(15.0).epsilon(0.01));

    std::vector<Vec3> verts;
    std::vector<std::array<int, 4>> tets;
    for (int k = 0; k < 5; ++k) {
        auto tet = regular_tet();
        if (k == 2) tet = flat;
        Vec3 offset{5.0 * k, 0, 0};
        int base = static_cast<int>(verts.size());
        for (const auto& p : tet) verts.push_back(p + offset);
        tets.push_back({base, base + 1, base + 2, base + 3});
    }
    auto rep = quality_report_tets(verts, tets);
    CHECK(rep.tet_count == 5);
    CHECK(rep.sliver_below_10 == 0);
    CHECK(rep.sliver_below_20 == 1);
    CHECK(rep.sliver_below_30 == 1);
    CHECK(rep.dihedral_min == doctest::Approx(15.0).epsilon(0.01));
}

TEST_CASE("report orderings hold on random meshes") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 4.0);
    std::vector<Vec3> pts;
    for (int i = 0; i < 40; ++i) pts.push_back({u(rng), u(rng), 0});
    auto mesh = delaunay_2d(pts);
    auto rep = quality_report(mesh);
    CHECK(rep.theta_min_avg >= rep.theta_min);
    CHECK(rep.g_avg >= rep.g_min);
    CHECK(rep.theta_max <= 180.0);
}

TEST_CASE("imported VTK tets round-trip through the reader") {
    std::vector<Vec3> verts;
    std::vector<std::array<int, 4>> tets;
    for (int k = 0; k < 3; ++k) {
        auto tet = regular_tet();
        int base = static_cast<int>(verts.size());
        for (const auto& p : tet) verts.push_back(p + Vec3{4.0 * k, 0, 0});
        tets.push_back({base, base + 1, base + 2, base + 3});
    }
    std::string path = "/tmp/sphmesh_tets.vtk";
    {
        std::ofstream f(path);
        f << "# vtk DataFile Version 3.0\ntets\nASCII\nDATASET UNSTRUCTURED_GRID\n";
        f << "POINTS " << verts.size() << " double\n";
        for (const auto& v : verts) f << v.x << " " << v.y << " " << v.z << "\n";
        f << "CELLS " << tets.size() << " " << 5 * tets.size() << "\n";
        for (const auto& t : tets)
            f << "4 " << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
        f << "CELL_TYPES " << tets.size() << "\n";
        for (std::size_t i = 0; i < tets.size(); ++i) f << "10\n";
    }
    auto m = read_mesh(path);
    CHECK(m.tets.size() == 3);
    auto rep = quality_report_tets(m.vertices, m.tets);
    CHECK(rep.ratio_min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(rep.sliver_below_40 == 0);
    std::remove(path.c_str());
}
