#pragma once

#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "sphmesh/config.hpp"
#include "sphmesh/dynamics.hpp"
#include "sphmesh/quality.hpp"

namespace sphmesh {

struct RunResult {
    int exit_code = 1;
    long long global_steps = 0;
    long long phase_one_steps = -1; // global step at which every feature first converged
    long long repair_events = 0;
    bool quality_valid = false;
    QualityReport quality;
    std::string message;
};

/// End-to-end driver: geometry, tagging, budgeting, sampling, the grouped
/// two-phase relaxation loop, and artifact output. The controller steps
/// feature groups in index order; cross-group boundary reads see the other
/// groups' last published positions.
class Pipeline {
public:
    explicit Pipeline(RunConfig cfg);

    /// Build grid, tags, budget and the initial particle set.
    void setup();

    /// One outer iteration (each unconverged group advances by its own dt).
    /// Returns false once the phase machine reaches Done or a budget stops
    /// the run.
    bool step_once();

    /// Full run with artifacts written to the configured output directory.
    RunResult run();

    // Introspection (valid after setup()).
    const RunConfig& config() const { return cfg_; }
    const LevelSetGrid& grid() const { return *grid_; }
    const SizingField& sizing() const { return *sizing_; }
    const FeatureTagMap& tags() const { return tags_; }
    const FeatureBudget& budget() const { return budget_; }
    const ParticleSystem& particles() const { return sys_; }
    ParticleSystem& particles() { return sys_; }
    const std::vector<FeatureGroup>& groups() const { return groups_; }
    const std::vector<FeatureCurve>& curves() const { return curves_; }
    Phase phase() const { return phase_->phase(); }
    long long global_steps() const { return global_steps_; }
    long long phase_one_steps() const { return phase_one_steps_; }
    long long repair_events() const;
    bool phase_one_budget_exhausted() const { return phase_one_exhausted_; }

private:
    void build_geometry();
    void build_sizing();
    void open_outputs();
    void write_snapshot();
    void log_sample(const FeatureGroup& g, double dt, double vbar,
                    const ConvergenceMonitor::Errors& e, double kinetic);
    bool all_converged() const;
    void enter_phase_two();
    RunResult finalize(int exit_code, const std::string& message);

    RunConfig cfg_;
    std::unique_ptr<LevelSetGrid> grid_;
    std::unique_ptr<SizingField> sizing_;
    std::vector<FeatureCurve> curves_;
    std::vector<SingularityPoint> singularities_;
    FeatureTagMap tags_;
    FeatureBudget budget_;
    ParticleSystem sys_;
    std::vector<FeatureGroup> groups_;
    std::unique_ptr<PhaseController> phase_;
    StepContext ctx_;
    long long global_steps_ = 0;
    long long phase_one_steps_ = -1;
    bool phase_one_exhausted_ = false;
    bool outputs_open_ = false;
    std::ofstream convergence_csv_;
    double wall_start_ = 0.0;
};

} // namespace sphmesh
