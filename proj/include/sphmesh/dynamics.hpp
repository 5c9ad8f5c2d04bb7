#pragma once

#include <cstdint>
#include <vector>

#include "sphmesh/forces.hpp"
#include "sphmesh/levelset.hpp"
#include "sphmesh/monitor.hpp"
#include "sphmesh/neighbor.hpp"
#include "sphmesh/particles.hpp"
#include "sphmesh/polyline.hpp"
#include "sphmesh/sizing.hpp"

namespace sphmesh {

struct StabilizationPolicy {
    long long nullify_period = 100;  // velocity reset cadence (steps)
    double damping = 0.05;           // eps in a = F_p + F_v - eps v
    double dt_collapse_ratio = 0.1;  // reset velocities when dt drops below ratio * previous dt
};

/// One feature's particles plus its own clock and convergence state.
struct FeatureGroup {
    int feature = -1;
    FeatureType type = FeatureType::Volume;
    GroupRange range;
    double v_ref = 1.0;
    double dt_prev = 0.0;
    long long steps_taken = 0;
    bool converged = false;
    long long repair_events = 0; // containment repairs of volume particles
    ConvergenceMonitor monitor;
};

/// Group timestep: min over members of the CFL, velocity and viscous
/// criteria; criteria with zero denominators are skipped, and a group at
/// rest with zero force falls back to 0.25 * min r_c.
double compute_group_timestep(const ParticleSystem& sys, const FeatureGroup& group,
                              double damping);

/// Stability ceiling applied on top of the adaptive criteria: both scale
/// with |a| and |v|, so near quiescence the raw step size grows past the
/// Verlet stability limit of the stiff pressure modes.
double acoustic_dt_cap(const ParticleSystem& sys, const FeatureGroup& group, int ambient_dim);

/// Project forces and velocity of a surface/curve particle onto its feature
/// tangent; pull positions back onto the feature (zero level-set / polyline).
/// Volume particles that crossed into phi <= 0 are repositioned to
/// phi = +0.05 h_t just inside the boundary. Returns true when a containment
/// repair happened.
bool constrain_position(ParticleSystem& sys, std::size_t i, const LevelSetGrid& grid,
                        const std::vector<FeatureCurve>& curves, const SizingField& sizing);

void constrain_vector_to_feature(ParticleSystem& sys, std::size_t i,
                                 const std::vector<FeatureCurve>& curves, Vec3& u);

/// Refresh smoothing lengths (and surface/curve normals) from current
/// positions.
void refresh_particle_fields(ParticleSystem& sys, GroupRange range, const LevelSetGrid& grid,
                             const std::vector<FeatureCurve>& curves, const SizingField& sizing);

struct StepContext {
    const LevelSetGrid* grid = nullptr;
    const std::vector<FeatureCurve>* curves = nullptr;
    const SizingField* sizing = nullptr;
    ForceParams force_params;
    ForceMode mode = ForceMode::Improved;
    int workers = 1;
};

/// Advance one group by one velocity-Verlet step:
/// half kick from start-of-step forces, drift, position constraints, force
/// re-evaluation over the same pair lists, second half kick. Throws
/// IntegrationBlowupError on non-finite state. Returns the dt taken.
double step_group(ParticleSystem& sys, FeatureGroup& group, const NeighborTable& table,
                  const StepContext& ctx, double damping);

/// Periodic / dt-collapse velocity nullification. Returns true when
/// velocities were reset.
bool stabilize(ParticleSystem& sys, FeatureGroup& group, const StabilizationPolicy& policy,
               double dt_prev, double dt_now);

} // namespace sphmesh
