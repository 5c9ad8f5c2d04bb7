#include "sphmesh/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sphmesh/errors.hpp"
#include "sphmesh/mesh_io.hpp"
#include "sphmesh/neighbor.hpp"
#include "sphmesh/parallel.hpp"
#include "sphmesh/sampling.hpp"

namespace sphmesh {

namespace {
double now_seconds() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
        .count();
}
} // namespace

Pipeline::Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.mode == RunMode::Baseline) {
        // The reference scheme: no boundary correction, velocities nullified
        // every step, no damping.
        cfg_.correction = false;
        cfg_.nullify_period = 1;
        cfg_.damping = 0.0;
    }
    if (cfg_.workers <= 0) cfg_.workers = default_workers();
}

void Pipeline::build_geometry() {
    double spacing = cfg_.grid_spacing > 0.0 ? cfg_.grid_spacing : cfg_.h_min / 1.75;
    // Pad generously: level-set queries must stay valid for particles that
    // overshoot the boundary within one step.
    int ghost = std::max(3, static_cast<int>(std::ceil(0.5 * cfg_.h_max / spacing)));

    switch (cfg_.geometry) {
        case GeometryKind::Circle:
        case GeometryKind::Sphere: {
            SpherePrim prim{cfg_.geo_center, cfg_.geo_radius};
            Vec3 r{cfg_.geo_radius, cfg_.geo_radius, cfg_.dim == 3 ? cfg_.geo_radius : 0.0};
            grid_ = std::make_unique<LevelSetGrid>(LevelSetGrid::build(
                prim, cfg_.geo_center - r, cfg_.geo_center + r, spacing, cfg_.dim, ghost));
            break;
        }
        case GeometryKind::Box: {
            BoxPrim prim{cfg_.geo_box_min, cfg_.geo_box_max};
            grid_ = std::make_unique<LevelSetGrid>(LevelSetGrid::build(
                prim, cfg_.geo_box_min, cfg_.geo_box_max, spacing, cfg_.dim, ghost));
            break;
        }
        case GeometryKind::Zalesak: {
            SlottedDiskPrim prim{cfg_.geo_center, cfg_.geo_radius, cfg_.geo_slot_width,
                                 cfg_.geo_slot_length};
            Vec3 r{cfg_.geo_radius, cfg_.geo_radius, 0.0};
            grid_ = std::make_unique<LevelSetGrid>(LevelSetGrid::build(
                prim, cfg_.geo_center - r, cfg_.geo_center + r, spacing, cfg_.dim, ghost));
            break;
        }
        case GeometryKind::Field: {
            grid_ = std::make_unique<LevelSetGrid>(LevelSetGrid::load_field(cfg_.geo_field_file));
            break;
        }
    }
    curves_ = cfg_.curves;
    singularities_ = cfg_.singularities;
}

void Pipeline::build_sizing() {
    switch (cfg_.sizing) {
        case SizingSpecKind::Constant: {
            double h0 = cfg_.sizing_h0 > 0.0 ? cfg_.sizing_h0 : 0.5 * (cfg_.h_min + cfg_.h_max);
            sizing_ = std::make_unique<SizingField>(
                SizingField::constant(h0, cfg_.h_min, cfg_.h_max, cfg_.dim));
            break;
        }
        case SizingSpecKind::Radial:
            sizing_ = std::make_unique<SizingField>(
                SizingField::radial(cfg_.sizing_h0, cfg_.sizing_slope, cfg_.sizing_focus,
                                    cfg_.sizing_r0, cfg_.h_min, cfg_.h_max, cfg_.dim));
            break;
        case SizingSpecKind::Gridded:
            sizing_ = std::make_unique<SizingField>(SizingField::gridded(
                LevelSetGrid::load_field(cfg_.sizing_field_file), cfg_.h_min, cfg_.h_max));
            break;
    }
}

void Pipeline::setup() {
    build_geometry();
    build_sizing();
    tags_ = classify_cells(*grid_, curves_, singularities_);

    bool any_meshable = false;
    for (auto t : tags_.cell_type)
        if (t == CellType::Positive || t == CellType::Surface) any_meshable = true;
    if (!any_meshable)
        throw Error("setup: geometry has no positive phase inside the grid (empty domain)");

    budget_ = integrate_feature_mass(tags_, *grid_, curves_, *sizing_);
    sample_all_features(sys_, tags_, budget_, *grid_, curves_, singularities_, *sizing_,
                        cfg_.seed, cfg_.init_sampling == InitSampling::Density);

    groups_.clear();
    std::size_t begin = 0;
    for (int f = 0; f < tags_.feature_count(); ++f) {
        FeatureGroup g;
        g.feature = f;
        g.type = tags_.index_table[f].type;
        g.range = {begin, begin + static_cast<std::size_t>(budget_.count[f])};
        g.v_ref = std::max(budget_.v_ref[f], 1e-300);
        g.converged = g.type == FeatureType::Singularity;
        begin = g.range.end;
        groups_.push_back(std::move(g));
    }

    PhaseConfig pc;
    pc.nullify_period_phase_one = cfg_.nullify_period;
    pc.damping_phase_one = cfg_.damping;
    pc.transition_steps = cfg_.transition_steps;
    pc.phase_two_budget = cfg_.phase_two_budget;
    pc.phase_one_max_steps = cfg_.max_steps;
    phase_ = std::make_unique<PhaseController>(pc);

    ctx_.grid = grid_.get();
    ctx_.curves = &curves_;
    ctx_.sizing = sizing_.get();
    ctx_.mode = cfg_.correction ? ForceMode::Improved : ForceMode::Baseline;
    ctx_.workers = cfg_.workers;

    refresh_particle_fields(sys_, {0, sys_.size()}, *grid_, curves_, *sizing_);
}

bool Pipeline::all_converged() const {
    for (const auto& g : groups_)
        if (!g.converged) return false;
    return true;
}

long long Pipeline::repair_events() const {
    long long n = 0;
    for (const auto& g : groups_) n += g.repair_events;
    return n;
}

void Pipeline::enter_phase_two() {
    for (auto& g : groups_) {
        if (g.type == FeatureType::Singularity) continue;
        g.converged = false;
        g.monitor.reset();
    }
}

bool Pipeline::step_once() {
    Phase ph = phase_->phase();
    if (ph == Phase::Done) return false;

    if (ph == Phase::One && global_steps_ >= cfg_.max_steps) {
        phase_one_exhausted_ = true;
        return false;
    }

    double damping = phase_->damping();
    long long period = phase_->nullify_period();

    std::vector<char> active(sys_.size(), 0);
    bool any_active = false;
    for (const auto& g : groups_) {
        if (g.type == FeatureType::Singularity) continue;
        bool act = ph == Phase::Transition ? true : !g.converged;
        if (!act) continue;
        any_active = true;
        for (std::size_t i = g.range.begin; i < g.range.end; ++i) active[i] = 1;
    }

    if (any_active) {
        NeighborTable table = NeighborTable::build(sys_, curves_, &active, cfg_.workers);
        for (auto& g : groups_) {
            if (g.type == FeatureType::Singularity) continue;
            bool act = ph == Phase::Transition ? true : !g.converged;
            if (!act) continue;

            double dt = step_group(sys_, g, table, ctx_, damping);

            if (g.steps_taken % ConvergenceMonitor::kSampleInterval == 0) {
                int dim = grid_->dim();
                double vbar = feature_volume_sum(sys_, table, curves_, g.range, dim, g.v_ref);
                auto errs = g.monitor.update(vbar);
                if (errs.converged && ph != Phase::Transition) g.converged = true;
                log_sample(g, dt, vbar, errs, kinetic_energy(sys_, g.range));
            }

            StabilizationPolicy pol;
            pol.nullify_period = period;
            pol.damping = damping;
            pol.dt_collapse_ratio = cfg_.dt_collapse_ratio;
            stabilize(sys_, g, pol, g.dt_prev, dt);
            g.dt_prev = dt;
        }
    }

    ++global_steps_;
    if (outputs_open_ && cfg_.snapshot_cadence > 0 && global_steps_ % cfg_.snapshot_cadence == 0)
        write_snapshot();

    bool conv = all_converged();
    Phase before = phase_->phase();
    Phase after = phase_->advance(conv);
    if (before == Phase::One && after != Phase::One) {
        phase_one_steps_ = global_steps_;
        if (cfg_.mode == RunMode::Baseline) return false; // single-phase reference scheme
    }
    if (before == Phase::Transition && after == Phase::Two) enter_phase_two();
    return after != Phase::Done;
}

void Pipeline::open_outputs() {
    std::filesystem::create_directories(cfg_.output_dir);
    convergence_csv_.open(cfg_.output_dir + "/convergence.csv");
    if (!convergence_csv_)
        throw Error("cannot write to output directory: " + cfg_.output_dir);
    convergence_csv_ << "step,feature_index,dt,vbar,e_t,e_avg,e_sys,phase,kinetic_energy\n";
    convergence_csv_.precision(17);
    outputs_open_ = true;
}

void Pipeline::log_sample(const FeatureGroup& g, double dt, double vbar,
                          const ConvergenceMonitor::Errors& e, double kinetic) {
    if (!outputs_open_) return;
    convergence_csv_ << g.steps_taken << "," << g.feature << "," << dt << "," << vbar << ","
                     << e.e_t << "," << e.e_avg << "," << e.e_sys << ","
                     << static_cast<int>(phase_->phase()) << "," << kinetic << "\n";
}

void Pipeline::write_snapshot() {
    std::ostringstream name;
    name << cfg_.output_dir << "/particles_" << std::setw(6) << std::setfill('0') << global_steps_
         << ".vtk";
    write_particles_vtk(sys_, name.str());
}

RunResult Pipeline::finalize(int exit_code, const std::string& message) {
    RunResult res;
    res.exit_code = exit_code;
    res.global_steps = global_steps_;
    res.phase_one_steps = phase_one_steps_;
    res.repair_events = repair_events();
    res.message = message;

    write_snapshot();

    try {
        if (grid_->dim() == 2 && sys_.size() >= 3) {
            TriMesh mesh = filter_to_domain(delaunay_2d(sys_.pos), *grid_);
            write_trimesh_vtk(mesh, cfg_.output_dir + "/final_mesh.vtk");
            write_trimesh_obj(mesh, cfg_.output_dir + "/final_mesh.obj");
            res.quality = quality_report(mesh);
            res.quality_valid = true;
            write_quality_csv(res.quality, cfg_.output_dir + "/quality_report.csv");
        } else {
            write_points_vtk(sys_.pos, cfg_.output_dir + "/final_points.vtk");
        }
    } catch (const std::exception& ex) {
        res.message += std::string(res.message.empty() ? "" : "; ") +
                       "final meshing failed: " + ex.what();
        if (res.exit_code == 0) res.exit_code = 1;
    }

    // Manifest: config echo, versions, timings, run statistics.
    nlohmann::json manifest;
    manifest["tool"] = "sphmesh";
    manifest["version"] = "0.1.0";
    manifest["config"] = canonical_config(cfg_);
    manifest["exit_code"] = res.exit_code;
    manifest["global_steps"] = res.global_steps;
    manifest["phase_one_steps"] = res.phase_one_steps;
    manifest["repair_events"] = res.repair_events;
    manifest["particle_count"] = sys_.size();
    manifest["feature_count"] = tags_.feature_count();
    manifest["wall_seconds"] = now_seconds() - wall_start_;
    if (!res.message.empty()) manifest["message"] = res.message;
    std::ofstream mf(cfg_.output_dir + "/manifest.json");
    mf << manifest.dump(2) << "\n";
    std::ofstream echo(cfg_.output_dir + "/config_echo.cfg");
    echo << canonical_config(cfg_);

    convergence_csv_.flush();
    return res;
}

RunResult Pipeline::run() {
    wall_start_ = now_seconds();
    try {
        open_outputs(); // fail fast on an unwritable output directory
        setup();
        write_snapshot();
        while (step_once()) {
        }
        int code = phase_one_exhausted_ ? 2 : 0;
        return finalize(code, phase_one_exhausted_ ? "phase-one step budget exhausted before "
                                                     "convergence"
                                                   : "");
    } catch (const std::exception& ex) {
        RunResult res;
        res.exit_code = 1;
        res.global_steps = global_steps_;
        res.message = ex.what();
        return res;
    }
}

} // namespace sphmesh
