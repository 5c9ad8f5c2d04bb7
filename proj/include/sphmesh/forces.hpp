#pragma once

#include <cstddef>

#include "sphmesh/neighbor.hpp"
#include "sphmesh/particles.hpp"

namespace sphmesh {

/// Half-open particle index range (features are contiguous).
struct GroupRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
};

enum class ForceMode {
    Improved, // renormalized gradient + discrete boundary correction term
    Baseline  // plain pair-gradient over all neighbors, gamma = 1
};

struct ForceParams {
    double p0 = 1.0;          // EOS reference pressure (exponent fixed at 2)
    double gamma_clamp = 0.3; // lower clamp of gamma before use as divisor
    // Scale the boundary-term area h^(d-1) by the boundary particle's target
    // density, restoring the volume<->area correspondence of the renormalized
    // gradient when h_t is far from 1.
    bool boundary_density_scaled = true;
};

/// Renormalization coefficient: gamma_i = sum_j W(r_ij, h_i) V_t,j over all
/// neighbors plus the self contribution W(0, h_i) V_t,i, with V_t = h_t^d in
/// the particle's kernel dimension. Returns the raw (unclamped) value.
double compute_gamma(const ParticleSystem& sys, const NeighborTable& table,
                     const std::vector<FeatureCurve>& curves, std::size_t i, int ambient_dim);

void compute_gamma_range(ParticleSystem& sys, const NeighborTable& table,
                         const std::vector<FeatureCurve>& curves, GroupRange range,
                         int ambient_dim);

/// Pressure acceleration (repulsive convention: the result enters
/// a = force_p + force_v - eps v directly). Peer sum uses the kernel
/// derivative at the pairwise-averaged smoothing length; boundary sum uses
/// the kernel value times the source normal and area weight, both divided by
/// the clamped gamma. Baseline mode treats every neighbor with the pair form
/// and skips renormalization.
Vec3 compute_pressure_accel(const ParticleSystem& sys, const NeighborTable& table,
                            const std::vector<FeatureCurve>& curves, std::size_t i,
                            int ambient_dim, const ForceParams& params, ForceMode mode);

void compute_pressure_range(ParticleSystem& sys, const NeighborTable& table,
                            const std::vector<FeatureCurve>& curves, GroupRange range,
                            int ambient_dim, const ForceParams& params, ForceMode mode);

/// Viscous acceleration over peer neighbors only; vanishes with both
/// velocities.
Vec3 compute_viscous_accel(const ParticleSystem& sys, const NeighborTable& table,
                           const std::vector<FeatureCurve>& curves, std::size_t i,
                           int ambient_dim);

void compute_viscous_range(ParticleSystem& sys, const NeighborTable& table,
                           const std::vector<FeatureCurve>& curves, GroupRange range,
                           int ambient_dim);

/// Specific volume 1 / (sum_peers W(r_ij, h_i) + W(0, h_i)).
double compute_specific_volume(const ParticleSystem& sys, const NeighborTable& table,
                               const std::vector<FeatureCurve>& curves, std::size_t i,
                               int ambient_dim);

/// Normalized feature volume: sum of member specific volumes over v_ref.
/// Sums in fixed index order (deterministic reduction).
double feature_volume_sum(ParticleSystem& sys, const NeighborTable& table,
                          const std::vector<FeatureCurve>& curves, GroupRange range,
                          int ambient_dim, double v_ref);

double kinetic_energy(const ParticleSystem& sys, GroupRange range);

} // namespace sphmesh
