#include "sphmesh/forces.hpp"

#include <cmath>

#include "sphmesh/kernel.hpp"

namespace sphmesh {

namespace {

inline double pow_dim(double h, int d) {
    double v = h;
    if (d >= 2) v *= h;
    if (d >= 3) v *= h;
    return d == 0 ? 1.0 : v;
}

} // namespace

double compute_gamma(const ParticleSystem& sys, const NeighborTable& table,
                     const std::vector<FeatureCurve>& curves, std::size_t i, int ambient_dim) {
    int d = kernel_dim(sys.type[i], ambient_dim);
    double g = kernel_W(0.0, sys.h[i], d) * pow_dim(sys.h[i], d);
    for (const auto* e = table.begin(i); e != table.end(i); ++e) {
        PairGeometry pg = pair_geometry(sys, curves, i, *e);
        g += kernel_W(pg.r, sys.h[i], d) * pow_dim(sys.h[e->j], d);
    }
    return g;
}

void compute_gamma_range(ParticleSystem& sys, const NeighborTable& table,
                         const std::vector<FeatureCurve>& curves, GroupRange range,
                         int ambient_dim) {
    for (std::size_t i = range.begin; i < range.end; ++i)
        sys.gamma[i] = compute_gamma(sys, table, curves, i, ambient_dim);
}

Vec3 compute_pressure_accel(const ParticleSystem& sys, const NeighborTable& table,
                            const std::vector<FeatureCurve>& curves, std::size_t i,
                            int ambient_dim, const ForceParams& params, ForceMode mode) {
    int d = kernel_dim(sys.type[i], ambient_dim);
    double inv_rho2_i = pow_dim(sys.h[i], d);
    inv_rho2_i *= inv_rho2_i; // 1/rho_t,i^2 = h_t^2d
    Vec3 acc;
    for (const auto* e = table.begin(i); e != table.end(i); ++e) {
        std::size_t j = static_cast<std::size_t>(e->j);
        PairGeometry pg = pair_geometry(sys, curves, i, *e);
        if (pg.r < 1e-300) continue;
        double hj = sys.h[j];
        double inv_rho2_j = pow_dim(hj, d);
        inv_rho2_j *= inv_rho2_j;
        double coeff = params.p0 * (inv_rho2_i + inv_rho2_j);
        double h_ij = 0.5 * (sys.h[i] + hj);
        if (mode == ForceMode::Baseline || e->role == NeighborRole::Peer) {
            acc -= coeff * kernel_dWdr(pg.r, h_ij, d) * pg.e;
        } else {
            // Discrete boundary correction: kernel value times source normal
            // and area weight.
            Vec3 n_b = sys.type[j] == FeatureType::Singularity ? -pg.e : sys.normal[j];
            if (norm2(n_b) < 0.5) n_b = -pg.e; // degenerate stored normal
            double area = pow_dim(hj, d - 1);
            if (params.boundary_density_scaled) area /= pow_dim(hj, d);
            acc -= coeff * kernel_W(pg.r, h_ij, d) * area * n_b;
        }
    }
    if (mode == ForceMode::Improved)
        acc *= 1.0 / std::max(sys.gamma[i], params.gamma_clamp);
    return acc;
}

void compute_pressure_range(ParticleSystem& sys, const NeighborTable& table,
                            const std::vector<FeatureCurve>& curves, GroupRange range,
                            int ambient_dim, const ForceParams& params, ForceMode mode) {
    for (std::size_t i = range.begin; i < range.end; ++i)
        sys.force_p[i] = compute_pressure_accel(sys, table, curves, i, ambient_dim, params, mode);
}

Vec3 compute_viscous_accel(const ParticleSystem& sys, const NeighborTable& table,
                           const std::vector<FeatureCurve>& curves, std::size_t i,
                           int ambient_dim) {
    int d = kernel_dim(sys.type[i], ambient_dim);
    double inv_rho2_i = pow_dim(sys.h[i], d);
    inv_rho2_i *= inv_rho2_i;
    double rho_i = 1.0 / pow_dim(sys.h[i], d);
    double eta_i = rho_i * 0.1 * (2.0 * sys.h[i]) * norm(sys.vel[i]);
    Vec3 acc;
    for (const auto* e = table.begin(i); e != table.end(i); ++e) {
        if (e->role != NeighborRole::Peer) continue;
        std::size_t j = static_cast<std::size_t>(e->j);
        double rho_j = 1.0 / pow_dim(sys.h[j], d);
        double eta_j = rho_j * 0.1 * (2.0 * sys.h[j]) * norm(sys.vel[j]);
        double denom = eta_i + eta_j;
        if (denom <= 0.0) continue;
        double eta = 2.0 * eta_i * eta_j / denom;
        if (eta == 0.0) continue;
        PairGeometry pg = pair_geometry(sys, curves, i, *e);
        if (pg.r < 1e-300) continue;
        double inv_rho2_j = pow_dim(sys.h[j], d);
        inv_rho2_j *= inv_rho2_j;
        double h_ij = 0.5 * (sys.h[i] + sys.h[j]);
        Vec3 v_ij = sys.vel[i] - sys.vel[j];
        acc += eta * (inv_rho2_i + inv_rho2_j) * kernel_dWdr(pg.r, h_ij, d) / pg.r * v_ij;
    }
    return acc;
}

void compute_viscous_range(ParticleSystem& sys, const NeighborTable& table,
                           const std::vector<FeatureCurve>& curves, GroupRange range,
                           int ambient_dim) {
    for (std::size_t i = range.begin; i < range.end; ++i)
        sys.force_v[i] = compute_viscous_accel(sys, table, curves, i, ambient_dim);
}

double compute_specific_volume(const ParticleSystem& sys, const NeighborTable& table,
                               const std::vector<FeatureCurve>& curves, std::size_t i,
                               int ambient_dim) {
    int d = kernel_dim(sys.type[i], ambient_dim);
    double s = kernel_W(0.0, sys.h[i], d);
    for (const auto* e = table.begin(i); e != table.end(i); ++e) {
        if (e->role != NeighborRole::Peer) continue;
        PairGeometry pg = pair_geometry(sys, curves, i, *e);
        s += kernel_W(pg.r, sys.h[i], d);
    }
    return 1.0 / s;
}

double feature_volume_sum(ParticleSystem& sys, const NeighborTable& table,
                          const std::vector<FeatureCurve>& curves, GroupRange range,
                          int ambient_dim, double v_ref) {
    double sum = 0.0;
    for (std::size_t i = range.begin; i < range.end; ++i) {
        sys.vtilde[i] = compute_specific_volume(sys, table, curves, i, ambient_dim);
        sum += sys.vtilde[i];
    }
    return sum / v_ref;
}

double kinetic_energy(const ParticleSystem& sys, GroupRange range) {
    double e = 0.0;
    for (std::size_t i = range.begin; i < range.end; ++i) e += 0.5 * norm2(sys.vel[i]);
    return e;
}

} // namespace sphmesh
