#include "sphmesh/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sphmesh/errors.hpp"
#include "sphmesh/kernel.hpp"
#include "sphmesh/parallel.hpp"

namespace sphmesh {

double compute_group_timestep(const ParticleSystem& sys, const FeatureGroup& group,
                              double damping) {
    double dt = 1e300;
    double min_rc = 1e300;
    bool any = false;
    for (std::size_t i = group.range.begin; i < group.range.end; ++i) {
        double rc = 2.0 * sys.h[i];
        min_rc = std::min(min_rc, rc);
        Vec3 a = sys.force_p[i] + sys.force_v[i] - damping * sys.vel[i];
        double an = norm(a);
        double vn = norm(sys.vel[i]);
        if (an > 0.0) {
            dt = std::min(dt, 0.25 * std::sqrt(rc / an));
            any = true;
        }
        if (vn > 0.0) {
            dt = std::min(dt, (1.0 / 40.0) * rc / vn);
            double nu = 0.1 * rc * vn;
            dt = std::min(dt, 0.125 * rc * rc / nu);
            any = true;
        }
    }
    if (!any) return 0.25 * min_rc; // cold start at rest with zero force
    return dt;
}

double acoustic_dt_cap(const ParticleSystem& sys, const FeatureGroup& group, int ambient_dim) {
    // Verlet stability bound for the stiffest pressure modes. The adaptive
    // criteria above scale with |a| and |v|, which both vanish near
    // quiescence; un-capped the step size then grows past the stability
    // limit of the acoustic modes and re-excites the system. The cap uses
    // the acceleration scale a single typical pair can exert:
    // 2 p0 (1/rho_t^2 + 1/rho_t^2) |dW/dr|_max with |dW/dr|_max =
    // 1.0546875 sigma_d / h^(d+1).
    double cap = 1e300;
    for (std::size_t i = group.range.begin; i < group.range.end; ++i) {
        int d = kernel_dim(sys.type[i], ambient_dim);
        double h = sys.h[i];
        double h2d = 1.0, hd1 = 1.0;
        for (int k = 0; k < 2 * d; ++k) h2d *= h;
        for (int k = 0; k < d + 1; ++k) hd1 *= h;
        double a_scale = 4.0 * h2d * 1.0546875 * kernel_sigma(d) / hd1;
        cap = std::min(cap, 0.25 * std::sqrt(2.0 * h / a_scale));
    }
    return cap;
}

void constrain_vector_to_feature(ParticleSystem& sys, std::size_t i,
                                 const std::vector<FeatureCurve>& curves, Vec3& u) {
    if (sys.type[i] == FeatureType::Surface) {
        const Vec3& n = sys.normal[i];
        if (norm2(n) > 0.5) u -= dot(u, n) * n;
    } else if (sys.type[i] == FeatureType::Curve) {
        for (const auto& c : curves)
            if (c.id() == sys.curve_id[i]) {
                Vec3 t = c.tangent_at_arc(sys.arc[i]);
                u = dot(u, t) * t;
                break;
            }
    } else if (sys.type[i] == FeatureType::Singularity) {
        u = Vec3{};
    }
}

bool constrain_position(ParticleSystem& sys, std::size_t i, const LevelSetGrid& grid,
                        const std::vector<FeatureCurve>& curves, const SizingField& sizing) {
    switch (sys.type[i]) {
        case FeatureType::Surface: {
            sys.pos[i] = grid.project_newton(sys.pos[i]);
            return false;
        }
        case FeatureType::Curve: {
            for (const auto& c : curves)
                if (c.id() == sys.curve_id[i]) {
                    PolylineHit hit = c.nearest_point(sys.pos[i]);
                    sys.pos[i] = hit.point;
                    sys.arc[i] = hit.arc;
                    break;
                }
            return false;
        }
        case FeatureType::Volume: {
            double phi = grid.eval_phi(sys.pos[i]);
            if (phi > 0.0) return false;
            // Containment repair: back onto the inside at a small offset.
            Vec3 p = grid.project_newton(sys.pos[i]);
            double h_t = sizing.eval_size(p);
            Vec3 n = grid.eval_normal(p); // outward
            sys.pos[i] = p - 0.05 * h_t * n;
            return true;
        }
        case FeatureType::Singularity: return false;
    }
    return false;
}

void refresh_particle_fields(ParticleSystem& sys, GroupRange range, const LevelSetGrid& grid,
                             const std::vector<FeatureCurve>& curves, const SizingField& sizing) {
    for (std::size_t i = range.begin; i < range.end; ++i) {
        sys.h[i] = sizing.eval_size(sys.pos[i]);
        if (sys.type[i] == FeatureType::Surface) {
            try {
                sys.normal[i] = grid.eval_normal(sys.pos[i]);
            } catch (const DegenerateNormalError&) {
                sys.normal[i] = Vec3{}; // callers skip the boundary term
            }
        } else if (sys.type[i] == FeatureType::Curve) {
            try {
                sys.normal[i] = grid.eval_normal(sys.pos[i]);
            } catch (const DegenerateNormalError&) {
                sys.normal[i] = Vec3{};
            }
        }
    }
}

namespace {

void check_finite(const ParticleSystem& sys, const FeatureGroup& group) {
    for (std::size_t i = group.range.begin; i < group.range.end; ++i) {
        if (!std::isfinite(sys.pos[i].x) || !std::isfinite(sys.pos[i].y) ||
            !std::isfinite(sys.pos[i].z) || !std::isfinite(sys.vel[i].x) ||
            !std::isfinite(sys.vel[i].y) || !std::isfinite(sys.vel[i].z)) {
            std::ostringstream os;
            os << "integration blow-up: particle " << i << " of feature " << group.feature
               << " at step " << group.steps_taken;
            throw IntegrationBlowupError(os.str());
        }
    }
}

void eval_forces(ParticleSystem& sys, const FeatureGroup& group, const NeighborTable& table,
                 const StepContext& ctx) {
    int dim = ctx.grid->dim();
    parallel_for(group.range.begin, group.range.end, ctx.workers,
                 [&](std::size_t lo, std::size_t hi) {
                     compute_gamma_range(sys, table, *ctx.curves, {lo, hi}, dim);
                 });
    parallel_for(group.range.begin, group.range.end, ctx.workers,
                 [&](std::size_t lo, std::size_t hi) {
                     compute_pressure_range(sys, table, *ctx.curves, {lo, hi}, dim,
                                            ctx.force_params, ctx.mode);
                     compute_viscous_range(sys, table, *ctx.curves, {lo, hi}, dim);
                     for (std::size_t i = lo; i < hi; ++i) {
                         constrain_vector_to_feature(sys, i, *ctx.curves, sys.force_p[i]);
                         constrain_vector_to_feature(sys, i, *ctx.curves, sys.force_v[i]);
                     }
                 });
}

} // namespace

double step_group(ParticleSystem& sys, FeatureGroup& group, const NeighborTable& table,
                  const StepContext& ctx, double damping) {
    if (group.type == FeatureType::Singularity) {
        ++group.steps_taken;
        return 0.0;
    }

    refresh_particle_fields(sys, group.range, *ctx.grid, *ctx.curves, *ctx.sizing);
    eval_forces(sys, group, table, ctx);

    double dt = std::min(compute_group_timestep(sys, group, damping),
                         acoustic_dt_cap(sys, group, ctx.grid->dim()));

    // Half kick and drift.
    for (std::size_t i = group.range.begin; i < group.range.end; ++i) {
        Vec3 a = sys.force_p[i] + sys.force_v[i] - damping * sys.vel[i];
        sys.vel[i] += 0.5 * dt * a;
        constrain_vector_to_feature(sys, i, *ctx.curves, sys.vel[i]);
        sys.pos[i] += dt * sys.vel[i];
    }
    for (std::size_t i = group.range.begin; i < group.range.end; ++i)
        if (constrain_position(sys, i, *ctx.grid, *ctx.curves, *ctx.sizing))
            ++group.repair_events;

    // Second half kick from end-of-step forces (same pair lists, fresh
    // geometry; per-step displacements are a few percent of the support).
    refresh_particle_fields(sys, group.range, *ctx.grid, *ctx.curves, *ctx.sizing);
    eval_forces(sys, group, table, ctx);
    for (std::size_t i = group.range.begin; i < group.range.end; ++i) {
        Vec3 a = sys.force_p[i] + sys.force_v[i] - damping * sys.vel[i];
        sys.vel[i] += 0.5 * dt * a;
        constrain_vector_to_feature(sys, i, *ctx.curves, sys.vel[i]);
    }

    check_finite(sys, group);
    ++group.steps_taken;
    return dt;
}

bool stabilize(ParticleSystem& sys, FeatureGroup& group, const StabilizationPolicy& policy,
               double dt_prev, double dt_now) {
    bool reset = false;
    if (policy.nullify_period >= 1 && group.steps_taken % policy.nullify_period == 0) reset = true;
    if (dt_prev > 0.0 && dt_now < policy.dt_collapse_ratio * dt_prev) reset = true;
    if (reset)
        for (std::size_t i = group.range.begin; i < group.range.end; ++i) sys.vel[i] = Vec3{};
    return reset;
}

} // namespace sphmesh
