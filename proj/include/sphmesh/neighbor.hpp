#pragma once

#include <cstdint>
#include <vector>

#include "sphmesh/particles.hpp"
#include "sphmesh/polyline.hpp"

namespace sphmesh {

enum class NeighborRole : std::uint8_t { Peer, Boundary };

struct NeighborEntry {
    int j = -1;
    NeighborRole role = NeighborRole::Peer;
};

/// Pair geometry evaluated at the callers' current positions. Curve peers
/// measure separation by arc length and orient e along the local tangent.
struct PairGeometry {
    double r = 0.0;
    Vec3 e; // unit vector pointing from j toward i
};

/// CSR neighbor table over all particles: a pair (i, j) is listed when
/// r_ij < h_i + h_j (support radius 2h with the pairwise-averaged smoothing
/// length). Peers require same type and feature index; boundary entries
/// follow the hierarchy ranking.
class NeighborTable {
public:
    /// Uniform-cell spatial hashing at cell size = max over particles of 2h.
    /// `active` (optional) restricts which particles receive neighbor lists;
    /// all particles still act as sources.
    static NeighborTable build(const ParticleSystem& sys,
                               const std::vector<FeatureCurve>& curves,
                               const std::vector<char>* active = nullptr, int workers = 1);

    std::size_t particle_count() const { return offsets_.size() - 1; }

    const NeighborEntry* begin(std::size_t i) const { return entries_.data() + offsets_[i]; }
    const NeighborEntry* end(std::size_t i) const { return entries_.data() + offsets_[i + 1]; }
    std::size_t count(std::size_t i) const { return offsets_[i + 1] - offsets_[i]; }

private:
    std::vector<std::size_t> offsets_;
    std::vector<NeighborEntry> entries_;
};

/// Geometry of the pair (i, entry.j) at current positions.
PairGeometry pair_geometry(const ParticleSystem& sys, const std::vector<FeatureCurve>& curves,
                           std::size_t i, const NeighborEntry& entry);

/// True when particle j acts on particle i (as peer or boundary source).
bool pair_interacts(FeatureType ti, int fi, FeatureType tj, int fj, NeighborRole& role_out);

} // namespace sphmesh
