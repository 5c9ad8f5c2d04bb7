#pragma once

#include <cstdint>
#include <vector>

#include "sphmesh/tags.hpp"
#include "sphmesh/vec.hpp"

namespace sphmesh {

/// Particle state, struct-of-arrays. Forces hold accelerations in the
/// convention a = force_p + force_v - eps * v, i.e. the pressure entry
/// already carries the repulsive sign.
struct ParticleSystem {
    std::vector<Vec3> pos, vel, force_p, force_v, normal;
    std::vector<double> h;        // smoothing length, tied to local target size
    std::vector<double> gamma;    // renormalization coefficient
    std::vector<double> vtilde;   // specific volume
    std::vector<double> arc;      // arc coordinate (curve particles only)
    std::vector<FeatureType> type;
    std::vector<int> feature;     // feature index
    std::vector<int> curve_id;    // owning curve, -1 otherwise

    std::size_t size() const { return pos.size(); }

    void resize(std::size_t n) {
        pos.resize(n);
        vel.resize(n);
        force_p.resize(n);
        force_v.resize(n);
        normal.resize(n);
        h.resize(n, 0.0);
        gamma.resize(n, 1.0);
        vtilde.resize(n, 0.0);
        arc.resize(n, 0.0);
        type.resize(n, FeatureType::Volume);
        feature.resize(n, -1);
        curve_id.resize(n, -1);
    }
};

/// Kernel dimension used for a particle's peer interactions: volume particles
/// use the ambient dimension, surface particles one less, curve particles 1.
inline int kernel_dim(FeatureType t, int ambient_dim) {
    switch (t) {
        case FeatureType::Volume: return ambient_dim;
        case FeatureType::Surface: return ambient_dim - 1;
        case FeatureType::Curve: return 1;
        case FeatureType::Singularity: return ambient_dim;
    }
    return ambient_dim;
}

/// Boundary-source ranking: lower rank acts as a boundary condition for
/// higher rank (singularity -> everyone, curve -> surface & volume,
/// surface -> volume).
inline int hierarchy_rank(FeatureType t) {
    switch (t) {
        case FeatureType::Singularity: return 0;
        case FeatureType::Curve: return 1;
        case FeatureType::Surface: return 2;
        case FeatureType::Volume: return 3;
    }
    return 3;
}

} // namespace sphmesh
