#include "sphmesh/tags.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

#include "sphmesh/errors.hpp"

namespace sphmesh {

const char* to_string(CellType t) {
    switch (t) {
        case CellType::Positive: return "positive";
        case CellType::Negative: return "negative";
        case CellType::Surface: return "surface";
        case CellType::Curve: return "curve";
        case CellType::Singularity: return "singularity";
    }
    return "?";
}

const char* to_string(FeatureType t) {
    switch (t) {
        case FeatureType::Volume: return "volume";
        case FeatureType::Surface: return "surface";
        case FeatureType::Curve: return "curve";
        case FeatureType::Singularity: return "singularity";
    }
    return "?";
}

std::vector<std::size_t> FeatureTagMap::cells_of_feature(int feature) const {
    std::vector<std::size_t> out;
    for (std::size_t c = 0; c < cell_feature.size(); ++c)
        if (cell_feature[c] == feature) out.push_back(c);
    return out;
}

namespace {

// Segment vs axis-aligned box (slab test).
bool segment_intersects_box(const Vec3& a, const Vec3& b, const Vec3& lo, const Vec3& hi, int dim) {
    double t0 = 0.0, t1 = 1.0;
    const double* av = &a.x;
    const double* bv = &b.x;
    const double* lv = &lo.x;
    const double* hv = &hi.x;
    for (int axis = 0; axis < dim; ++axis) {
        double d = bv[axis] - av[axis];
        if (std::abs(d) < 1e-300) {
            if (av[axis] < lv[axis] || av[axis] > hv[axis]) return false;
            continue;
        }
        double ta = (lv[axis] - av[axis]) / d;
        double tb = (hv[axis] - av[axis]) / d;
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    return true;
}

struct CornerSigns {
    int positive = 0;
    int total = 0;
    bool has_pos = false;
    bool has_nonpos = false;
};

CornerSigns corner_signs(const LevelSetGrid& grid, int i, int j, int k) {
    CornerSigns s;
    int kmax = grid.dim() == 3 ? 1 : 0;
    for (int dk = 0; dk <= kmax; ++dk)
        for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di) {
                double v = grid.node_value(i + di, j + dj, k + dk);
                ++s.total;
                if (v > 0.0) {
                    ++s.positive;
                    s.has_pos = true;
                } else {
                    s.has_nonpos = true;
                }
            }
    return s;
}

} // namespace

FeatureTagMap classify_cells(const LevelSetGrid& grid, const std::vector<FeatureCurve>& curves,
                             const std::vector<SingularityPoint>& singularities) {
    FeatureTagMap tags;
    tags.dim = grid.dim();
    tags.cell_dims = grid.cell_dims();
    tags.cell_type.assign(tags.cell_count(), CellType::Negative);
    tags.cell_feature.assign(tags.cell_count(), -1);

    // Declared ids must be unique and contiguous from 0.
    std::set<int> declared;
    for (const auto& c : curves)
        if (!declared.insert(c.id()).second)
            throw Error("classify_cells: duplicate feature id " + std::to_string(c.id()));
    for (const auto& s : singularities)
        if (!declared.insert(s.id).second)
            throw Error("classify_cells: duplicate feature id " + std::to_string(s.id));
    int n_declared = static_cast<int>(declared.size());
    if (!declared.empty() && (*declared.begin() != 0 || *declared.rbegin() != n_declared - 1))
        throw Error("classify_cells: declared feature ids must be contiguous from 0");

    tags.index_table.resize(n_declared);
    for (const auto& c : curves) tags.index_table[c.id()].type = FeatureType::Curve;
    for (const auto& s : singularities) tags.index_table[s.id].type = FeatureType::Singularity;

    auto cd = tags.cell_dims;

    // Base sign classification.
    for (int k = 0; k < cd[2]; ++k)
        for (int j = 0; j < cd[1]; ++j)
            for (int i = 0; i < cd[0]; ++i) {
                CornerSigns s = corner_signs(grid, i, j, k);
                CellType t = CellType::Negative;
                if (s.has_pos && s.has_nonpos)
                    t = CellType::Surface;
                else if (s.has_pos)
                    t = CellType::Positive;
                tags.cell_type[tags.cell_linear(i, j, k)] = t;
            }

    // Curve cells override surface/positive/negative.
    for (const auto& c : curves) {
        int ns = c.segment_count();
        for (int s = 0; s < ns; ++s) {
            const Vec3& a = c.points()[s];
            const Vec3& b = c.points()[(s + 1) % c.points().size()];
            if (!grid.contains(a) || !grid.contains(b))
                throw Error("classify_cells: curve " + std::to_string(c.id()) + " leaves the grid");
            Vec3 lo = min(a, b), hi = max(a, b);
            auto c0 = grid.cell_of(lo);
            auto c1 = grid.cell_of(hi);
            // Widen by one cell: segments lying exactly on a cell face must
            // mark the cells on both sides.
            for (int axis = 0; axis < grid.dim(); ++axis) {
                c0[axis] = std::max(0, c0[axis] - 1);
                c1[axis] = std::min(cd[axis] - 1, c1[axis] + 1);
            }
            for (int k = c0[2]; k <= c1[2]; ++k)
                for (int j = c0[1]; j <= c1[1]; ++j)
                    for (int i = c0[0]; i <= c1[0]; ++i) {
                        Vec3 clo = grid.cell_lo(i, j, k);
                        Vec3 chi = clo + grid.spacing();
                        if (grid.dim() == 2) { clo.z = -1.0; chi.z = 1.0; }
                        if (!segment_intersects_box(a, b, clo, chi, grid.dim())) continue;
                        std::size_t lin = tags.cell_linear(i, j, k);
                        tags.cell_type[lin] = CellType::Curve;
                        tags.cell_feature[lin] = c.id();
                    }
        }
    }

    // Singularity cells override everything. The surrounding ring of surface
    // cells joins the singularity so that a one-cell surface band bending
    // around the corner is actually severed into separate patches.
    for (const auto& s : singularities) {
        if (!grid.contains(s.position))
            throw Error("classify_cells: singularity " + std::to_string(s.id) + " outside grid");
        auto c = grid.cell_of(s.position);
        std::size_t lin = tags.cell_linear(c[0], c[1], c[2]);
        tags.cell_type[lin] = CellType::Singularity;
        tags.cell_feature[lin] = s.id;
        int kspan = grid.dim() == 3 ? 1 : 0;
        for (int dk = -kspan; dk <= kspan; ++dk)
            for (int dj = -1; dj <= 1; ++dj)
                for (int di = -1; di <= 1; ++di) {
                    int ni = c[0] + di, nj = c[1] + dj, nk = c[2] + dk;
                    if (ni < 0 || nj < 0 || nk < 0 || ni >= cd[0] || nj >= cd[1] || nk >= cd[2])
                        continue;
                    std::size_t nlin = tags.cell_linear(ni, nj, nk);
                    if (tags.cell_type[nlin] == CellType::Surface) {
                        tags.cell_type[nlin] = CellType::Singularity;
                        tags.cell_feature[nlin] = s.id;
                    }
                }
    }

    // Flood fill face-connected components of surface cells, then positive
    // cells. Curve and singularity cells act as separators.
    auto flood = [&](CellType want, FeatureType ftype) {
        for (std::size_t seed = 0; seed < tags.cell_count(); ++seed) {
            if (tags.cell_type[seed] != want || tags.cell_feature[seed] != -1) continue;
            int feature = tags.feature_count();
            tags.index_table.push_back(FeatureInfo{ftype, 0.0});
            std::deque<std::size_t> queue{seed};
            tags.cell_feature[seed] = feature;
            while (!queue.empty()) {
                std::size_t cur = queue.front();
                queue.pop_front();
                int i = static_cast<int>(cur % cd[0]);
                int j = static_cast<int>((cur / cd[0]) % cd[1]);
                int k = static_cast<int>(cur / (static_cast<std::size_t>(cd[0]) * cd[1]));
                const int off[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0},
                                       {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
                int nf = grid.dim() == 3 ? 6 : 4;
                for (int f = 0; f < nf; ++f) {
                    int ni = i + off[f][0], nj = j + off[f][1], nk = k + off[f][2];
                    if (ni < 0 || nj < 0 || nk < 0 || ni >= cd[0] || nj >= cd[1] || nk >= cd[2])
                        continue;
                    std::size_t nlin = tags.cell_linear(ni, nj, nk);
                    if (tags.cell_type[nlin] != want || tags.cell_feature[nlin] != -1) continue;
                    tags.cell_feature[nlin] = feature;
                    queue.push_back(nlin);
                }
            }
        }
    };
    flood(CellType::Surface, FeatureType::Surface);
    flood(CellType::Positive, FeatureType::Volume);

    return tags;
}

namespace {

// Linear zero crossing between two nodes.
double crossing(double va, double vb) { return va / (va - vb); }

// Marching-squares facet length inside one 2D cell, with optional density
// weights at segment midpoints.
double facet_measure_2d(const LevelSetGrid& grid, int i, int j, const SizingField* sizing,
                        int density_dim) {
    Vec3 p00 = grid.node_position(i, j, 0);
    Vec3 p10 = grid.node_position(i + 1, j, 0);
    Vec3 p01 = grid.node_position(i, j + 1, 0);
    Vec3 p11 = grid.node_position(i + 1, j + 1, 0);
    double v00 = grid.node_value(i, j, 0), v10 = grid.node_value(i + 1, j, 0);
    double v01 = grid.node_value(i, j + 1, 0), v11 = grid.node_value(i + 1, j + 1, 0);

    int code = (v00 > 0) | ((v10 > 0) << 1) | ((v11 > 0) << 2) | ((v01 > 0) << 3);
    if (code == 0 || code == 15) return 0.0;

    auto edge_point = [&](const Vec3& a, const Vec3& b, double va, double vb) {
        return a + (b - a) * crossing(va, vb);
    };
    Vec3 e[4]; // bottom, right, top, left crossings
    bool has[4] = {false, false, false, false};
    if ((v00 > 0) != (v10 > 0)) { e[0] = edge_point(p00, p10, v00, v10); has[0] = true; }
    if ((v10 > 0) != (v11 > 0)) { e[1] = edge_point(p10, p11, v10, v11); has[1] = true; }
    if ((v01 > 0) != (v11 > 0)) { e[2] = edge_point(p01, p11, v01, v11); has[2] = true; }
    if ((v00 > 0) != (v01 > 0)) { e[3] = edge_point(p00, p01, v00, v01); has[3] = true; }

    std::vector<std::pair<Vec3, Vec3>> segs;
    int n = has[0] + has[1] + has[2] + has[3];
    if (n == 2) {
        Vec3 pts[2];
        int m = 0;
        for (int q = 0; q < 4; ++q)
            if (has[q]) pts[m++] = e[q];
        segs.emplace_back(pts[0], pts[1]);
    } else if (n == 4) {
        // Ambiguous saddle: decide with the cell-center average.
        double center = 0.25 * (v00 + v10 + v01 + v11);
        if ((center > 0) == (v00 > 0)) {
            segs.emplace_back(e[0], e[1]);
            segs.emplace_back(e[2], e[3]);
        } else {
            segs.emplace_back(e[0], e[3]);
            segs.emplace_back(e[1], e[2]);
        }
    }
    double total = 0.0;
    for (auto& [a, b] : segs) {
        double len = norm(b - a);
        double w = sizing ? sizing->eval_density((a + b) * 0.5, density_dim) : 1.0;
        total += len * w;
    }
    return total;
}

// Marching-tetrahedra facet area inside one 3D cell (Kuhn subdivision into
// 6 tets), with optional density weights at facet centroids.
double facet_measure_3d(const LevelSetGrid& grid, int i, int j, int k, const SizingField* sizing,
                        int density_dim) {
    Vec3 p[8];
    double v[8];
    int n = 0;
    for (int dk = 0; dk <= 1; ++dk)
        for (int dj = 0; dj <= 1; ++dj)
            for (int di = 0; di <= 1; ++di) {
                p[n] = grid.node_position(i + di, j + dj, k + dk);
                v[n] = grid.node_value(i + di, j + dj, k + dk);
                ++n;
            }
    // corner order: bit0 = x, bit1 = y, bit2 = z
    static const int tets[6][4] = {{0, 1, 3, 7}, {0, 1, 5, 7}, {0, 2, 3, 7},
                                   {0, 2, 6, 7}, {0, 4, 5, 7}, {0, 4, 6, 7}};
    double total = 0.0;
    for (const auto& tet : tets) {
        Vec3 tp[4];
        double tv[4];
        int pos = 0;
        for (int q = 0; q < 4; ++q) {
            tp[q] = p[tet[q]];
            tv[q] = v[tet[q]];
            if (tv[q] > 0) ++pos;
        }
        if (pos == 0 || pos == 4) continue;
        Vec3 pts[4];
        int m = 0;
        for (int a = 0; a < 4; ++a)
            for (int b = a + 1; b < 4; ++b)
                if ((tv[a] > 0) != (tv[b] > 0))
                    pts[m++] = tp[a] + (tp[b] - tp[a]) * crossing(tv[a], tv[b]);
        auto tri_area = [](const Vec3& a, const Vec3& b, const Vec3& c) {
            return 0.5 * norm(cross(b - a, c - a));
        };
        if (m == 3) {
            double area = tri_area(pts[0], pts[1], pts[2]);
            Vec3 ctr = (pts[0] + pts[1] + pts[2]) / 3.0;
            total += area * (sizing ? sizing->eval_density(ctr, density_dim) : 1.0);
        } else if (m == 4) {
            // Quad: split along a consistent diagonal. Order the points so
            // the two triangles do not overlap (pair opposite-sign edges).
            // With 2 positive vs 2 negative corners the four crossings form a
            // planar quad; sort around the centroid.
            Vec3 ctr = (pts[0] + pts[1] + pts[2] + pts[3]) * 0.25;
            Vec3 nrm = cross(pts[1] - pts[0], pts[2] - pts[0]);
            Vec3 u = normalized(pts[0] - ctr);
            Vec3 w = normalized(cross(nrm, u));
            std::array<std::pair<double, int>, 4> ang;
            for (int q = 0; q < 4; ++q) {
                Vec3 d = pts[q] - ctr;
                ang[q] = {std::atan2(dot(d, w), dot(d, u)), q};
            }
            std::sort(ang.begin(), ang.end());
            Vec3 q0 = pts[ang[0].second], q1 = pts[ang[1].second];
            Vec3 q2 = pts[ang[2].second], q3 = pts[ang[3].second];
            double area = tri_area(q0, q1, q2) + tri_area(q0, q2, q3);
            total += area * (sizing ? sizing->eval_density(ctr, density_dim) : 1.0);
        }
    }
    return total;
}

} // namespace

double surface_cell_facet_measure(const LevelSetGrid& grid, int i, int j, int k,
                                  const SizingField* sizing, int density_dim) {
    return grid.dim() == 2 ? facet_measure_2d(grid, i, j, sizing, density_dim)
                           : facet_measure_3d(grid, i, j, k, sizing, density_dim);
}

long long FeatureBudget::total_count() const {
    long long t = 0;
    for (auto c : count) t += c;
    return t;
}

FeatureBudget integrate_feature_mass(const FeatureTagMap& tags, const LevelSetGrid& grid,
                                     const std::vector<FeatureCurve>& curves,
                                     const SizingField& sizing) {
    const int dim = grid.dim();
    const int nf = tags.feature_count();
    FeatureBudget budget;
    budget.mass.assign(nf, 0.0);
    budget.v_ref.assign(nf, 0.0);
    budget.count.assign(nf, 0);
    budget.cell_mass.assign(tags.cell_count(), 0.0);

    double cell_vol = grid.spacing().x * grid.spacing().y * (dim == 3 ? grid.spacing().z : 1.0);
    auto cd = tags.cell_dims;

    // Find the volume feature a surface cell's positive fraction belongs to:
    // nearest face-adjacent positive cell (fall back to any neighbor).
    auto adjacent_volume_feature = [&](int i, int j, int k) -> int {
        const int off[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
        int nfaces = dim == 3 ? 6 : 4;
        for (int f = 0; f < nfaces; ++f) {
            int ni = i + off[f][0], nj = j + off[f][1], nk = k + off[f][2];
            if (ni < 0 || nj < 0 || nk < 0 || ni >= cd[0] || nj >= cd[1] || nk >= cd[2]) continue;
            std::size_t lin = tags.cell_linear(ni, nj, nk);
            if (tags.cell_type[lin] == CellType::Positive) return tags.cell_feature[lin];
        }
        return -1;
    };

    for (int k = 0; k < cd[2]; ++k)
        for (int j = 0; j < cd[1]; ++j)
            for (int i = 0; i < cd[0]; ++i) {
                std::size_t lin = tags.cell_linear(i, j, k);
                CellType t = tags.cell_type[lin];
                if (t == CellType::Positive) {
                    int f = tags.cell_feature[lin];
                    Vec3 c = grid.cell_center(i, j, k);
                    double m = sizing.eval_density(c, dim) * cell_vol;
                    budget.mass[f] += m;
                    budget.v_ref[f] += cell_vol;
                    budget.cell_mass[lin] = m;
                } else if (t == CellType::Surface) {
                    int f = tags.cell_feature[lin];
                    // Surface measure of the facet inside this cell.
                    double m_s = surface_cell_facet_measure(grid, i, j, k, &sizing, dim - 1);
                    double a_s = surface_cell_facet_measure(grid, i, j, k, nullptr, 0);
                    budget.mass[f] += m_s;
                    budget.v_ref[f] += a_s;
                    budget.cell_mass[lin] = m_s;
                    // Positive-phase fraction feeds the adjacent volume feature.
                    int vol_f = adjacent_volume_feature(i, j, k);
                    if (vol_f >= 0) {
                        // Nodes exactly on the boundary count as material so
                        // node-aligned boundaries keep their full cells.
                        int pos = 0, total = 0;
                        int kmax = dim == 3 ? 1 : 0;
                        for (int dk = 0; dk <= kmax; ++dk)
                            for (int dj = 0; dj <= 1; ++dj)
                                for (int di = 0; di <= 1; ++di) {
                                    ++total;
                                    if (grid.node_value(i + di, j + dj, k + dk) >= 0.0) ++pos;
                                }
                        double frac = static_cast<double>(pos) / total;
                        Vec3 c = grid.cell_center(i, j, k);
                        budget.mass[vol_f] += frac * sizing.eval_density(c, dim) * cell_vol;
                        budget.v_ref[vol_f] += frac * cell_vol;
                    }
                }
            }

    // Curve masses by composite-midpoint arc quadrature.
    for (const auto& c : curves) {
        int f = c.id();
        int ns = c.segment_count();
        for (int s = 0; s < ns; ++s) {
            const Vec3& a = c.points()[s];
            const Vec3& b = c.points()[(s + 1) % c.points().size()];
            double len = norm(b - a);
            double h_mid = sizing.eval_size((a + b) * 0.5);
            int pieces = std::max(1, static_cast<int>(std::ceil(len / (0.5 * h_mid))));
            for (int q = 0; q < pieces; ++q) {
                double t = (q + 0.5) / pieces;
                Vec3 m = a + (b - a) * t;
                double piece = len / pieces;
                budget.mass[f] += piece * sizing.eval_density(m, 1);
                budget.v_ref[f] += piece;
            }
        }
    }

    // Singularities carry one fixed particle.
    for (int f = 0; f < nf; ++f) {
        if (tags.index_table[f].type == FeatureType::Singularity) {
            budget.mass[f] = 1.0;
            budget.v_ref[f] = 1.0;
        }
        if (sizing.h_min() <= 0.0) throw Error("integrate_feature_mass: nonpositive target size");
        budget.count[f] = std::max(1ll, std::llround(budget.mass[f]));
    }
    return budget;
}

void write_tags_vtk(const FeatureTagMap& tags, const LevelSetGrid& grid, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path);
    auto cd = tags.cell_dims;
    f << "# vtk DataFile Version 3.0\ncell tags\nASCII\nDATASET STRUCTURED_POINTS\n";
    f << "DIMENSIONS " << cd[0] + 1 << " " << cd[1] + 1 << " " << (grid.dim() == 3 ? cd[2] + 1 : 1)
      << "\n";
    f << "ORIGIN " << grid.origin().x << " " << grid.origin().y << " " << grid.origin().z << "\n";
    f << "SPACING " << grid.spacing().x << " " << grid.spacing().y << " " << grid.spacing().z
      << "\n";
    f << "CELL_DATA " << tags.cell_count() << "\n";
    f << "SCALARS cell_type int 1\nLOOKUP_TABLE default\n";
    for (auto t : tags.cell_type) f << static_cast<int>(t) << "\n";
    f << "SCALARS feature_index int 1\nLOOKUP_TABLE default\n";
    for (auto i : tags.cell_feature) f << i << "\n";
}

} // namespace sphmesh
