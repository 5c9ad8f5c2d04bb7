#include "sphmesh/quality.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "sphmesh/errors.hpp"

namespace sphmesh {

namespace {
constexpr double kRad2Deg = 180.0 / M_PI;
}

TriangleQuality triangle_quality(const Vec3& a, const Vec3& b, const Vec3& c) {
    TriangleQuality q;
    double la = norm(c - b), lb = norm(a - c), lc = norm(b - a);
    double s = 0.5 * norm(cross(b - a, c - a));
    double half_p = 0.5 * (la + lb + lc);
    double longest = std::max(la, std::max(lb, lc));
    if (s <= 0.0 || half_p <= 0.0 || longest <= 0.0) {
        q.angles = {0.0, 0.0, 180.0};
        return q;
    }
    q.g = 2.0 * std::sqrt(3.0) * s / (half_p * longest);

    auto angle = [](const Vec3& u, const Vec3& v) {
        double d = dot(normalized(u), normalized(v));
        return std::acos(std::clamp(d, -1.0, 1.0)) * kRad2Deg;
    };
    q.angles[0] = angle(b - a, c - a);
    q.angles[1] = angle(a - b, c - b);
    q.angles[2] = 180.0 - q.angles[0] - q.angles[1];
    return q;
}

TetQuality tet_quality(const std::array<Vec3, 4>& t) {
    TetQuality q;
    Vec3 e1 = t[1] - t[0], e2 = t[2] - t[0], e3 = t[3] - t[0];
    double vol6 = dot(e1, cross(e2, e3));
    double vol = std::abs(vol6) / 6.0;
    if (vol <= 0.0) return q;

    // Inradius: 3V / total face area.
    auto face_area = [&](int a, int b, int c) {
        return 0.5 * norm(cross(t[b] - t[a], t[c] - t[a]));
    };
    double area_sum = face_area(1, 2, 3) + face_area(0, 2, 3) + face_area(0, 1, 3) +
                      face_area(0, 1, 2);
    if (area_sum <= 0.0) return q;
    double r_in = 3.0 * vol / area_sum;

    // Circumradius via the circumcenter solve.
    double b1 = 0.5 * norm2(e1), b2 = 0.5 * norm2(e2), b3 = 0.5 * norm2(e3);
    Vec3 c12 = cross(e1, e2), c23 = cross(e2, e3), c31 = cross(e3, e1);
    Vec3 center = (b1 * c23 + b2 * c31 + b3 * c12) / vol6;
    double r_circ = norm(center);
    if (r_circ <= 0.0) return q;
    q.radius_ratio = 3.0 * r_in / r_circ;

    // Dihedral angle across each edge from the two adjacent face normals.
    static const int edges[6][4] = {
        // edge (a, b), opposite vertices (c, d)
        {0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}, {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}};
    for (int e = 0; e < 6; ++e) {
        const Vec3& a = t[edges[e][0]];
        const Vec3& b = t[edges[e][1]];
        const Vec3& c = t[edges[e][2]];
        const Vec3& d = t[edges[e][3]];
        Vec3 ab = b - a;
        Vec3 n1 = cross(ab, c - a);
        Vec3 n2 = cross(ab, d - a);
        double cosang = dot(normalized(n1), normalized(n2));
        // Angle between the half-planes (interior dihedral).
        q.dihedrals[e] = std::acos(std::clamp(cosang, -1.0, 1.0)) * kRad2Deg;
    }
    return q;
}

QualityReport quality_report(const TriMesh& mesh) {
    if (mesh.triangles.empty()) throw Error("quality_report: empty mesh");
    QualityReport rep;
    rep.tri_count = static_cast<long long>(mesh.triangles.size());
    rep.g_min = 2.0;
    rep.theta_min = 360.0;
    double g_sum = 0.0, min_angle_sum = 0.0;
    for (const auto& t : mesh.triangles) {
        TriangleQuality q =
            triangle_quality(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
        double amin = *std::min_element(q.angles.begin(), q.angles.end());
        double amax = *std::max_element(q.angles.begin(), q.angles.end());
        g_sum += q.g;
        min_angle_sum += amin;
        rep.g_min = std::min(rep.g_min, q.g);
        rep.theta_min = std::min(rep.theta_min, amin);
        rep.theta_max = std::max(rep.theta_max, amax);
        if (amin < 30.0) ++rep.theta_below_30;
    }
    rep.g_avg = g_sum / rep.tri_count;
    rep.theta_min_avg = min_angle_sum / rep.tri_count;
    return rep;
}

QualityReport quality_report_tets(const std::vector<Vec3>& vertices,
                                  const std::vector<std::array<int, 4>>& tets) {
    if (tets.empty()) throw Error("quality_report_tets: empty input");
    QualityReport rep;
    rep.tet_count = static_cast<long long>(tets.size());
    rep.ratio_min = 2.0;
    rep.dihedral_min = 360.0;
    double ratio_sum = 0.0, min_d_sum = 0.0;
    for (const auto& t : tets) {
        TetQuality q = tet_quality(
            {vertices[t[0]], vertices[t[1]], vertices[t[2]], vertices[t[3]]});
        double dmin = *std::min_element(q.dihedrals.begin(), q.dihedrals.end());
        double dmax = *std::max_element(q.dihedrals.begin(), q.dihedrals.end());
        ratio_sum += q.radius_ratio;
        min_d_sum += dmin;
        rep.ratio_min = std::min(rep.ratio_min, q.radius_ratio);
        rep.dihedral_min = std::min(rep.dihedral_min, dmin);
        rep.dihedral_max = std::max(rep.dihedral_max, dmax);
        if (dmin < 10.0) ++rep.sliver_below_10;
        if (dmin < 20.0) ++rep.sliver_below_20;
        if (dmin < 30.0) ++rep.sliver_below_30;
        if (dmin < 40.0) ++rep.sliver_below_40;
    }
    rep.ratio_avg = ratio_sum / rep.tet_count;
    rep.dihedral_min_avg = min_d_sum / rep.tet_count;
    return rep;
}

void write_quality_csv(const QualityReport& rep, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path);
    f << "metric,value\n";
    f.precision(10);
    if (rep.tri_count > 0) {
        f << "tri_count," << rep.tri_count << "\n";
        f << "G_avg," << rep.g_avg << "\n";
        f << "G_min," << rep.g_min << "\n";
        f << "theta_max," << rep.theta_max << "\n";
        f << "theta_min," << rep.theta_min << "\n";
        f << "theta_min_avg," << rep.theta_min_avg << "\n";
        f << "theta_below_30," << rep.theta_below_30 << "\n";
    }
    if (rep.tet_count > 0) {
        f << "tet_count," << rep.tet_count << "\n";
        f << "ratio_avg," << rep.ratio_avg << "\n";
        f << "ratio_min," << rep.ratio_min << "\n";
        f << "dihedral_min," << rep.dihedral_min << "\n";
        f << "dihedral_max," << rep.dihedral_max << "\n";
        f << "dihedral_min_avg," << rep.dihedral_min_avg << "\n";
        f << "sliver_below_10," << rep.sliver_below_10 << "\n";
        f << "sliver_below_20," << rep.sliver_below_20 << "\n";
        f << "sliver_below_30," << rep.sliver_below_30 << "\n";
        f << "sliver_below_40," << rep.sliver_below_40 << "\n";
    }
}

std::string quality_summary(const QualityReport& rep) {
    std::ostringstream os;
    os.precision(4);
    if (rep.tri_count > 0) {
        os << "triangles: " << rep.tri_count << "  G_avg " << rep.g_avg << "  G_min " << rep.g_min
           << "  theta[min,max] [" << rep.theta_min << ", " << rep.theta_max << "]"
           << "  theta_min_avg " << rep.theta_min_avg << "  theta<30: " << rep.theta_below_30
           << "\n";
    }
    if (rep.tet_count > 0) {
        os << "tets: " << rep.tet_count << "  ratio_avg " << rep.ratio_avg << "  ratio_min "
           << rep.ratio_min << "  dihedral[min,max] [" << rep.dihedral_min << ", "
           << rep.dihedral_max << "]  dihedral_min_avg " << rep.dihedral_min_avg
           << "  slivers<10/20/30/40: " << rep.sliver_below_10 << "/" << rep.sliver_below_20
           << "/" << rep.sliver_below_30 << "/" << rep.sliver_below_40 << "\n";
    }
    return os.str();
}

} // namespace sphmesh
