#include "sphmesh/neighbor.hpp"

#include <algorithm>
#include <cmath>

#include "sphmesh/errors.hpp"
#include "sphmesh/parallel.hpp"

namespace sphmesh {

bool pair_interacts(FeatureType ti, int fi, FeatureType tj, int fj, NeighborRole& role_out) {
    if (ti == tj) {
        if (fi != fj) return false;
        role_out = NeighborRole::Peer;
        return true;
    }
    if (hierarchy_rank(tj) < hierarchy_rank(ti)) {
        role_out = NeighborRole::Boundary;
        return true;
    }
    return false;
}

PairGeometry pair_geometry(const ParticleSystem& sys, const std::vector<FeatureCurve>& curves,
                           std::size_t i, const NeighborEntry& entry) {
    PairGeometry g;
    std::size_t j = static_cast<std::size_t>(entry.j);
    if (entry.role == NeighborRole::Peer && sys.type[i] == FeatureType::Curve) {
        const FeatureCurve* curve = nullptr;
        for (const auto& c : curves)
            if (c.id() == sys.curve_id[i]) curve = &c;
        if (curve) {
            g.r = curve->arc_distance(sys.arc[i], sys.arc[j]);
            g.e = curve->tangent_at_arc(sys.arc[i]) * curve->arc_direction(sys.arc[i], sys.arc[j]);
            return g;
        }
    }
    Vec3 d = sys.pos[i] - sys.pos[j];
    g.r = norm(d);
    g.e = g.r > 0.0 ? d / g.r : Vec3{};
    return g;
}

NeighborTable NeighborTable::build(const ParticleSystem& sys,
                                   const std::vector<FeatureCurve>& curves,
                                   const std::vector<char>* active, int workers) {
    const std::size_t n = sys.size();
    NeighborTable table;
    table.offsets_.assign(n + 1, 0);
    if (n == 0) return table;

    double h_max = 0.0;
    Vec3 lo = sys.pos[0], hi = sys.pos[0];
    for (std::size_t i = 0; i < n; ++i) {
        h_max = std::max(h_max, sys.h[i]);
        lo = min(lo, sys.pos[i]);
        hi = max(hi, sys.pos[i]);
    }
    double cell = std::max(2.0 * h_max, 1e-12);

    int nx = static_cast<int>((hi.x - lo.x) / cell) + 1;
    int ny = static_cast<int>((hi.y - lo.y) / cell) + 1;
    int nz = static_cast<int>((hi.z - lo.z) / cell) + 1;
    auto cell_of = [&](const Vec3& p, int& cx, int& cy, int& cz) {
        cx = std::clamp(static_cast<int>((p.x - lo.x) / cell), 0, nx - 1);
        cy = std::clamp(static_cast<int>((p.y - lo.y) / cell), 0, ny - 1);
        cz = std::clamp(static_cast<int>((p.z - lo.z) / cell), 0, nz - 1);
    };

    // Counting sort of particles into cells.
    std::size_t ncells = static_cast<std::size_t>(nx) * ny * nz;
    std::vector<int> head(ncells, 0);
    std::vector<int> cell_id(n);
    for (std::size_t i = 0; i < n; ++i) {
        int cx, cy, cz;
        cell_of(sys.pos[i], cx, cy, cz);
        cell_id[i] = (cz * ny + cy) * nx + cx;
        ++head[cell_id[i]];
    }
    std::vector<int> start(ncells + 1, 0);
    for (std::size_t c = 0; c < ncells; ++c) start[c + 1] = start[c] + head[c];
    std::vector<int> bucket(n);
    std::vector<int> cursor(start.begin(), start.end() - 1);
    for (std::size_t i = 0; i < n; ++i) bucket[cursor[cell_id[i]]++] = static_cast<int>(i);

    std::vector<std::vector<NeighborEntry>> lists(n);
    parallel_for(0, n, workers, [&](std::size_t lo_i, std::size_t hi_i) {
        std::vector<NeighborEntry> scratch;
        for (std::size_t i = lo_i; i < hi_i; ++i) {
            if (active && !(*active)[i]) continue;
            int cx, cy, cz;
            cell_of(sys.pos[i], cx, cy, cz);
            scratch.clear();
            for (int dz = -1; dz <= 1; ++dz)
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int qx = cx + dx, qy = cy + dy, qz = cz + dz;
                        if (qx < 0 || qy < 0 || qz < 0 || qx >= nx || qy >= ny || qz >= nz)
                            continue;
                        int c = (qz * ny + qy) * nx + qx;
                        for (int s = start[c]; s < start[c + 1]; ++s) {
                            std::size_t j = static_cast<std::size_t>(bucket[s]);
                            if (j == i) continue;
                            NeighborRole role;
                            if (!pair_interacts(sys.type[i], sys.feature[i], sys.type[j],
                                                sys.feature[j], role))
                                continue;
                            double cutoff = sys.h[i] + sys.h[j]; // 2 * h_ij
                            Vec3 d = sys.pos[i] - sys.pos[j];
                            if (norm2(d) >= cutoff * cutoff) continue;
                            NeighborEntry e{static_cast<int>(j), role};
                            if (role == NeighborRole::Peer && sys.type[i] == FeatureType::Curve) {
                                // Curve peers measure separation along the curve.
                                if (pair_geometry(sys, curves, i, e).r >= cutoff) continue;
                            }
                            scratch.push_back(e);
                        }
                    }
            std::sort(scratch.begin(), scratch.end(),
                      [](const NeighborEntry& a, const NeighborEntry& b) { return a.j < b.j; });
            lists[i] = scratch;
        }
    });

    for (std::size_t i = 0; i < n; ++i) table.offsets_[i + 1] = table.offsets_[i] + lists[i].size();
    table.entries_.resize(table.offsets_.back());
    for (std::size_t i = 0; i < n; ++i)
        std::copy(lists[i].begin(), lists[i].end(), table.entries_.begin() + table.offsets_[i]);
    return table;
}

} // namespace sphmesh
