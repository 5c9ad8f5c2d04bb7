#pragma once

#include <vector>

#include "sphmesh/levelset.hpp"
#include "sphmesh/particles.hpp"
#include "sphmesh/polyline.hpp"
#include "sphmesh/rng.hpp"
#include "sphmesh/sizing.hpp"
#include "sphmesh/tags.hpp"

namespace sphmesh {

struct SampledFeature {
    std::vector<Vec3> positions;
    std::vector<double> arcs; // curve features only, parallel to positions
};

/// Draw `count` initial particle positions for one feature.
///
/// Volume features: cells weighted by their integrated mass, rejection
/// sampling against the local target density inside the cell, points with
/// phi <= 0 rejected. Surface features: same cell-weighted draw over surface
/// cells, then projection onto the zero level-set. Curve features:
/// inverse-transform sampling of the arc-length density 1/h_t. Singularities:
/// the declared point.
///
/// `density_proportional = false` switches volume/surface/curve draws to
/// uniform measure (cell weights by plain volume/area/length, no rejection).
SampledFeature sample_feature_particles(int feature, long long count, const FeatureTagMap& tags,
                                        const FeatureBudget& budget, const LevelSetGrid& grid,
                                        const std::vector<FeatureCurve>& curves,
                                        const std::vector<SingularityPoint>& singularities,
                                        const SizingField& sizing, RngStream& rng,
                                        bool density_proportional = true);

/// Sample every feature with independent sub-streams of `master_seed` and
/// append to `sys` (features stay contiguous, in index order).
void sample_all_features(ParticleSystem& sys, const FeatureTagMap& tags,
                         const FeatureBudget& budget, const LevelSetGrid& grid,
                         const std::vector<FeatureCurve>& curves,
                         const std::vector<SingularityPoint>& singularities,
                         const SizingField& sizing, std::uint64_t master_seed,
                         bool density_proportional = true);

} // namespace sphmesh
