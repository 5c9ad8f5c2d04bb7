#include "sphmesh/delaunay.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "sphmesh/errors.hpp"

namespace sphmesh {

namespace {

// The triangulation runs on coordinates normalized to the unit box, with
// three symbolic vertices at infinity closing the convex hull. Predicates
// involving infinite vertices are evaluated as exact limits of the finite
// determinants; finite predicates use extended precision with an epsilon
// tie band (ties count as "on circle", i.e. not contained).

constexpr int kInf0 = -1, kInf1 = -2, kInf2 = -3;
constexpr double kTie = 1e-12;

inline bool is_inf(int v) { return v < 0; }

struct P2 {
    double x, y;
};

// Fixed directions of the infinite vertices (any three distinct directions
// in counterclockwise order work).
inline P2 inf_dir(int v) {
    switch (v) {
        case kInf0: return {0.0, 1.0};
        case kInf1: return {-0.8660254037844386, -0.5};
        default: return {0.8660254037844386, -0.5};
    }
}

inline long double cross_ld(long double ax, long double ay, long double bx, long double by) {
    return ax * by - ay * bx;
}

struct Predicates {
    const std::vector<P2>& pts;

    P2 at(int v) const { return v >= 0 ? pts[v] : inf_dir(v); }

    // Sign of twice the signed area of (a, b, c); infinite vertices by limit.
    int orient(int a, int b, int c) const {
        int ninf = is_inf(a) + is_inf(b) + is_inf(c);
        // Rotate so infinite vertices come last (even permutations keep sign).
        while (ninf > 0 && !(is_inf(c) && (ninf == 1 || is_inf(b)))) {
            int t = a;
            a = b;
            b = c;
            c = t;
        }
        if (ninf == 0) {
            P2 pa = at(a), pb = at(b), pc = at(c);
            long double d =
                cross_ld(pb.x - pa.x, pb.y - pa.y, pc.x - pa.x, pc.y - pa.y);
            if (std::abs(static_cast<double>(d)) <= kTie * 1e-4) return 0;
            return d > 0 ? 1 : -1;
        }
        if (ninf == 1) { // c infinite: sign of cross(b - a, dir)
            P2 pa = at(a), pb = at(b), dc = inf_dir(c);
            long double d = cross_ld(pb.x - pa.x, pb.y - pa.y, dc.x, dc.y);
            if (d == 0) return 0;
            return d > 0 ? 1 : -1;
        }
        if (ninf == 2) { // b, c infinite: sign of cross(d_b, d_c)
            P2 db = inf_dir(b), dc = inf_dir(c);
            long double d = cross_ld(db.x, db.y, dc.x, dc.y);
            return d > 0 ? 1 : -1;
        }
        return 1; // the initial all-infinite triangle is CCW by construction
    }

    // p strictly inside the circumcircle of CCW triangle (a, b, c)?
    bool in_circle(int a, int b, int c, int p) const {
        int ninf = is_inf(a) + is_inf(b) + is_inf(c);
        while (ninf > 0 && !(is_inf(c) && (ninf == 1 || is_inf(b)))) {
            int t = a;
            a = b;
            b = c;
            c = t;
        }
        P2 pp = at(p);
        if (ninf == 0) {
            P2 pa = at(a), pb = at(b), pc = at(c);
            long double ax = pa.x - pp.x, ay = pa.y - pp.y;
            long double bx = pb.x - pp.x, by = pb.y - pp.y;
            long double cx = pc.x - pp.x, cy = pc.y - pp.y;
            long double a2 = ax * ax + ay * ay;
            long double b2 = bx * bx + by * by;
            long double c2 = cx * cx + cy * cy;
            long double det = a2 * cross_ld(bx, by, cx, cy) - b2 * cross_ld(ax, ay, cx, cy) +
                              c2 * cross_ld(ax, ay, bx, by);
            long double perm = std::abs(a2 * cross_ld(bx, by, cx, cy)) +
                               std::abs(b2 * cross_ld(ax, ay, cx, cy)) +
                               std::abs(c2 * cross_ld(ax, ay, bx, by));
            if (std::abs(static_cast<double>(det)) <= kTie * std::max(1.0, static_cast<double>(perm)) * 1e-4)
                return false; // cocircular tie: keep existing triangulation
            return det > 0;
        }
        if (ninf == 1) {
            // Circumcircle degenerates to the half-plane left of a -> b.
            return orient(a, b, p) > 0;
        }
        if (ninf == 2) {
            // Leading term: cross(a - p, d_b - d_c); fall back to the
            // orientation of the two directions when collinear.
            P2 pa = at(a);
            P2 db = inf_dir(b), dc = inf_dir(c);
            long double d = cross_ld(pa.x - pp.x, pa.y - pp.y, db.x - dc.x, db.y - dc.y);
            if (d != 0) return d > 0;
            return cross_ld(db.x, db.y, dc.x, dc.y) > 0;
        }
        return true; // initial triangle swallows the first point
    }
};

struct Tri {
    int v[3];
};

} // namespace

TriMesh delaunay_2d(const std::vector<Vec3>& points) {
    TriMesh out;
    if (points.size() < 3) throw Error("delaunay_2d: need at least 3 points");

    Vec3 lo = points[0], hi = points[0];
    for (const auto& p : points) {
        lo = min(lo, p);
        hi = max(hi, p);
    }
    double diag = std::max(norm(Vec3{hi.x - lo.x, hi.y - lo.y, 0.0}), 1e-300);
    double merge2 = (1e-12 * diag) * (1e-12 * diag);

    // Merge duplicates, keep first occurrences.
    std::vector<P2> pts;
    for (const auto& p : points) {
        bool dup = false;
        Vec3 q{(p.x - lo.x) / diag, (p.y - lo.y) / diag, 0.0};
        for (const auto& r : pts) {
            double dx = (r.x - q.x) * diag, dy = (r.y - q.y) * diag;
            if (dx * dx + dy * dy <= merge2) {
                dup = true;
                break;
            }
        }
        if (!dup) {
            pts.push_back({q.x, q.y});
            out.vertices.push_back(p);
        }
    }
    if (pts.size() < 3) throw Error("delaunay_2d: fewer than 3 distinct points");

    Predicates pred{pts};
    std::vector<Tri> tris;
    tris.push_back({{kInf0, kInf1, kInf2}});

    std::vector<char> bad;
    for (int p = 0; p < static_cast<int>(pts.size()); ++p) {
        bad.assign(tris.size(), 0);
        std::map<std::pair<int, int>, std::pair<int, int>> edge_count; // sorted edge -> (count, orient_from)
        for (std::size_t t = 0; t < tris.size(); ++t) {
            if (!pred.in_circle(tris[t].v[0], tris[t].v[1], tris[t].v[2], p)) continue;
            bad[t] = 1;
            for (int e = 0; e < 3; ++e) {
                int u = tris[t].v[e], w = tris[t].v[(e + 1) % 3];
                auto key = std::minmax(u, w);
                auto it = edge_count.find({key.first, key.second});
                if (it == edge_count.end())
                    edge_count[{key.first, key.second}] = {1, u};
                else
                    ++it->second.first;
            }
        }
        // Keep survivors, then fan the cavity boundary.
        std::vector<Tri> next;
        next.reserve(tris.size() + 4);
        for (std::size_t t = 0; t < tris.size(); ++t)
            if (!bad[t]) next.push_back(tris[t]);
        for (const auto& [edge, info] : edge_count) {
            if (info.first != 1) continue;
            int u = info.second;
            int w = edge.first == u ? edge.second : edge.first;
            // The directed edge (u, w) had the removed triangle on its left,
            // and p lies inside the cavity, so (u, w, p) is CCW.
            Tri tnew{{u, w, p}};
            if (pred.orient(tnew.v[0], tnew.v[1], tnew.v[2]) < 0) std::swap(tnew.v[0], tnew.v[1]);
            next.push_back(tnew);
        }
        tris = std::move(next);
    }

    for (const auto& t : tris) {
        if (is_inf(t.v[0]) || is_inf(t.v[1]) || is_inf(t.v[2])) continue;
        out.triangles.push_back({t.v[0], t.v[1], t.v[2]});
    }
    if (out.triangles.empty()) throw Error("delaunay_2d: all points collinear");
    return out;
}

TriMesh filter_to_domain(const TriMesh& mesh, const LevelSetGrid& grid) {
    TriMesh out;
    out.vertices = mesh.vertices;
    for (const auto& t : mesh.triangles) {
        Vec3 c = (mesh.vertices[t[0]] + mesh.vertices[t[1]] + mesh.vertices[t[2]]) / 3.0;
        bool keep = false;
        if (grid.contains(c)) keep = grid.eval_phi(c) > 0.0;
        if (keep) out.triangles.push_back(t);
    }
    return out;
}

} // namespace sphmesh
