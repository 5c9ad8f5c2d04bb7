#include <doctest.h>

#include <cmath>
#include <random>

#include "sphmesh/dynamics.hpp"
#include "sphmesh/neighbor.hpp"

using namespace sphmesh;

namespace {

const std::vector<FeatureCurve> kNoCurves;

// Disk domain used by most dynamics cases.
struct World {
    LevelSetGrid grid;
    SizingField sizing;
    World()
        : grid(LevelSetGrid::build(SpherePrim{{0, 0, 0}, 10.0}, {-10, -10, 0}, {10, 10, 0}, 0.25,
                                   2)),
          sizing(SizingField::constant(1.0, 0.5, 2.0, 2)) {}
};

FeatureGroup group_of(int feature, FeatureType type, std::size_t begin, std::size_t end) {
    FeatureGroup g;
    g.feature = feature;
    g.type = type;
    g.range = {begin, end};
    g.v_ref = 1.0;
    return g;
}

} // namespace

TEST_CASE("group timestep criteria") {
    ParticleSystem sys;
    sys.resize(1);
    sys.h[0] = 0.5; // r_c = 1
    sys.type[0] = FeatureType::Volume;
    auto g = group_of(0, FeatureType::Volume, 0, 1);

    // |a| = 1, |v| = 0: CFL only.
    sys.force_p[0] = {1, 0, 0};
    CHECK(compute_group_timestep(sys, g, 0.0) == doctest::Approx(0.25).epsilon(1e-12));

    // |v| = 1: velocity criterion 1/40 wins over the viscous 1.25.
    sys.force_p[0] = {};
    sys.vel[0] = {1, 0, 0};
    CHECK(compute_group_timestep(sys, g, 0.0) == doctest::Approx(0.025).epsilon(1e-12));

    // At rest with zero force: fallback 0.25 min r_c.
    sys.vel[0] = {};
    CHECK(compute_group_timestep(sys, g, 0.0) == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("velocity-Verlet kinematics of one step") {
    World w;
    StepContext ctx;
    ctx.grid = &w.grid;
    ctx.curves = &kNoCurves;
    ctx.sizing = &w.sizing;

    // Two repelling volume particles; from rest the drift must be exactly
    // x1 - x0 = dt^2/2 * a0 and the final velocity dt/2 * (a0 + a1).
    ParticleSystem sys;
    sys.resize(2);
    sys.pos[0] = {-0.4, 0, 0};
    sys.pos[1] = {0.4, 0, 0};
    sys.h[0] = sys.h[1] = 1.0;
    sys.type[0] = sys.type[1] = FeatureType::Volume;
    sys.feature[0] = sys.feature[1] = 0;
    refresh_particle_fields(sys, {0, 2}, w.grid, kNoCurves, w.sizing);

    auto table = NeighborTable::build(sys, kNoCurves);
    auto g = group_of(0, FeatureType::Volume, 0, 2);

    // Start-of-step acceleration, computed independently.
    ParticleSystem probe = sys;
    compute_gamma_range(probe, table, kNoCurves, {0, 2}, 2);
    compute_pressure_range(probe, table, kNoCurves, {0, 2}, 2, ctx.force_params, ctx.mode);
    Vec3 a0 = probe.force_p[0];
    Vec3 x0 = sys.pos[0];

    double dt = step_group(sys, g, table, ctx, 0.0);
    CHECK(norm(sys.pos[0] - (x0 + 0.5 * dt * dt * a0)) <= 1e-12 * (1.0 + norm(x0)));

    // End-of-step acceleration: the force slots hold the values used by the
    // second half kick.
    Vec3 a1 = sys.force_p[0] + sys.force_v[0];
    CHECK(norm(sys.vel[0] - 0.5 * dt * (a0 + a1)) <= 1e-12);

    // Symmetric pair: center of mass stays put.
    CHECK(norm((sys.pos[0] + sys.pos[1]) * 0.5) <= 1e-10);

    // A fixed point: zero force, zero velocity, far apart.
    ParticleSystem still;
    still.resize(2);
    still.pos[0] = {-3, 0, 0};
    still.pos[1] = {3, 0, 0};
    still.h[0] = still.h[1] = 1.0;
    still.type[0] = still.type[1] = FeatureType::Volume;
    still.feature[0] = still.feature[1] = 0;
    auto table2 = NeighborTable::build(still, kNoCurves);
    auto g2 = group_of(0, FeatureType::Volume, 0, 2);
    Vec3 before0 = still.pos[0], before1 = still.pos[1];
    step_group(still, g2, table2, ctx, 0.0);
    CHECK(norm(still.pos[0] - before0) == 0.0);
    CHECK(norm(still.pos[1] - before1) == 0.0);
    CHECK(norm(still.vel[0]) == 0.0);
}

TEST_CASE("surface constraint annihilates normal components") {
    World w;
    ParticleSystem sys;
    sys.resize(1);
    sys.pos[0] = {10.0, 0, 0}; // on the circle
    sys.h[0] = 1.0;
    sys.type[0] = FeatureType::Surface;
    sys.feature[0] = 0;
    refresh_particle_fields(sys, {0, 1}, w.grid, kNoCurves, w.sizing);

    Vec3 f{2.0, 0.0, 0.0}; // purely normal force at (10, 0)
    constrain_vector_to_feature(sys, 0, kNoCurves, f);
    CHECK(norm(f) <= 1e-9);

    Vec3 mixed{1.0, 1.0, 0.0};
    constrain_vector_to_feature(sys, 0, kNoCurves, mixed);
    CHECK(std::abs(mixed.x) <= 1e-9); // tangential at (10,0) is the y direction
    CHECK(mixed.y == doctest::Approx(1.0).epsilon(1e-9));

    constrain_position(sys, 0, w.grid, kNoCurves, w.sizing);
    CHECK(std::abs(w.grid.eval_phi(sys.pos[0])) <= 1e-6 * w.grid.domain_diagonal());
}

TEST_CASE("curve constraint projects onto the segment direction") {
    std::vector<FeatureCurve> curves{FeatureCurve(0, {{0, 0, 0}, {1, 0, 0}}, false)};
    ParticleSystem sys;
    sys.resize(1);
    sys.pos[0] = {0.5, 0, 0};
    sys.arc[0] = 0.5;
    sys.h[0] = 1.0;
    sys.type[0] = FeatureType::Curve;
    sys.curve_id[0] = 0;
    sys.feature[0] = 0;

    Vec3 f{0.3, 0.8, 0.0};
    constrain_vector_to_feature(sys, 0, curves, f);
    CHECK(f.x == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(f.y == 0.0);

    World w;
    sys.pos[0] = {0.6, 0.2, 0}; // drifted off the curve
    constrain_position(sys, 0, w.grid, curves, w.sizing);
    CHECK(sys.pos[0].y == 0.0);
    CHECK(sys.pos[0].x == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(sys.arc[0] == doctest::Approx(0.6).epsilon(1e-12));
}

TEST_CASE("containment repair pulls volume particles back inside") {
    World w;
    ParticleSystem sys;
    sys.resize(1);
    sys.h[0] = 1.0;
    sys.type[0] = FeatureType::Volume;
    sys.feature[0] = 0;
    sys.pos[0] = {10.0 + 0.2, 0, 0}; // phi = -0.2 h_t
    bool repaired = constrain_position(sys, 0, w.grid, kNoCurves, w.sizing);
    CHECK(repaired);
    double phi = w.grid.eval_phi(sys.pos[0]);
    CHECK(phi == doctest::Approx(0.05 * 1.0).epsilon(0.02));
    CHECK(phi > 0.0);

    sys.pos[0] = {5.0, 0, 0};
    CHECK(!constrain_position(sys, 0, w.grid, kNoCurves, w.sizing));
}

TEST_CASE("stabilization policy") {
    ParticleSystem sys;
    sys.resize(3);
    for (auto& v : sys.vel) v = {1, 2, 0};
    auto g = group_of(0, FeatureType::Volume, 0, 3);
    StabilizationPolicy pol;
    pol.nullify_period = 100;

    g.steps_taken = 99;
    CHECK(!stabilize(sys, g, pol, 1e-2, 1e-2));
    CHECK(norm(sys.vel[0]) > 0.0);

    g.steps_taken = 100;
    CHECK(stabilize(sys, g, pol, 1e-2, 1e-2));
    CHECK(kinetic_energy(sys, g.range) == 0.0); // exactly zero

    // dt collapse by an order of magnitude.
    for (auto& v : sys.vel) v = {1, 2, 0};
    g.steps_taken = 101;
    CHECK(stabilize(sys, g, pol, 1e-2, 5e-4));
    CHECK(kinetic_energy(sys, g.range) == 0.0);
}

TEST_CASE("singularity particles never move") {
    World w;
    StepContext ctx;
    ctx.grid = &w.grid;
    ctx.curves = &kNoCurves;
    ctx.sizing = &w.sizing;
    ParticleSystem sys;
    sys.resize(1);
    sys.pos[0] = {1, 2, 0};
    sys.h[0] = 1.0;
    sys.type[0] = FeatureType::Singularity;
    sys.feature[0] = 0;
    auto table = NeighborTable::build(sys, kNoCurves);
    auto g = group_of(0, FeatureType::Singularity, 0, 1);
    step_group(sys, g, table, ctx, 0.0);
    CHECK(norm(sys.pos[0] - Vec3{1, 2, 0}) == 0.0);
    CHECK(norm(sys.vel[0]) == 0.0);
}

TEST_CASE("a short contained run keeps every invariant") {
    World w;
    StepContext ctx;
    ctx.grid = &w.grid;
    ctx.curves = &kNoCurves;
    ctx.sizing = &w.sizing;

    // Surface ring + interior volume particles.
    ParticleSystem sys;
    int n_surf = 24, n_vol = 60;
    sys.resize(n_surf + n_vol);
    for (int i = 0; i < n_surf; ++i) {
        double a = 2.0 * M_PI * i / n_surf;
        sys.pos[i] = {10.0 * std::cos(a), 10.0 * std::sin(a), 0};
        sys.type[i] = FeatureType::Surface;
        sys.feature[i] = 0;
    }
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (int i = 0; i < n_vol; ++i) {
        sys.pos[n_surf + i] = {u(rng), u(rng), 0};
        sys.type[n_surf + i] = FeatureType::Volume;
        sys.feature[n_surf + i] = 1;
    }
    for (auto& h : sys.h) h = 1.0;
    refresh_particle_fields(sys, {0, sys.size()}, w.grid, kNoCurves, w.sizing);

    auto gs = group_of(0, FeatureType::Surface, 0, static_cast<std::size_t>(n_surf));
    auto gv = group_of(1, FeatureType::Volume, static_cast<std::size_t>(n_surf), sys.size());
    double diag = w.grid.domain_diagonal();
    for (int step = 0; step < 50; ++step) {
        auto table = NeighborTable::build(sys, kNoCurves);
        step_group(sys, gs, table, ctx, 0.05);
        step_group(sys, gv, table, ctx, 0.05);
        for (std::size_t i = 0; i < sys.size(); ++i) {
            if (sys.type[i] == FeatureType::Surface)
                CHECK(std::abs(w.grid.eval_phi(sys.pos[i])) <= 1e-6 * diag);
            else
                CHECK(w.grid.eval_phi(sys.pos[i]) > 0.0);
        }
    }
}

TEST_CASE("stepping is deterministic") {
    World w;
    StepContext ctx;
    ctx.grid = &w.grid;
    ctx.curves = &kNoCurves;
    ctx.sizing = &w.sizing;

    auto build = [&] {
        ParticleSystem sys;
        sys.resize(40);
        std::mt19937_64 rng(8);
        std::uniform_real_distribution<double> u(-6.0, 6.0);
        for (int i = 0; i < 40; ++i) {
            sys.pos[i] = {u(rng), u(rng), 0};
            sys.type[i] = FeatureType::Volume;
            sys.feature[i] = 0;
            sys.h[i] = 1.0;
        }
        refresh_particle_fields(sys, {0, sys.size()}, w.grid, kNoCurves, w.sizing);
        return sys;
    };
    auto s1 = build();
    auto s2 = build();
    auto g1 = group_of(0, FeatureType::Volume, 0, 40);
    auto g2 = group_of(0, FeatureType::Volume, 0, 40);
    for (int step = 0; step < 20; ++step) {
        auto t1 = NeighborTable::build(s1, kNoCurves);
        auto t2 = NeighborTable::build(s2, kNoCurves);
        step_group(s1, g1, t1, ctx, 0.05);
        step_group(s2, g2, t2, ctx, 0.05);
    }
    for (std::size_t i = 0; i < s1.size(); ++i) {
        CHECK(s1.pos[i].x == s2.pos[i].x);
        CHECK(s1.pos[i].y == s2.pos[i].y);
        CHECK(s1.vel[i].x == s2.vel[i].x);
    }
}
