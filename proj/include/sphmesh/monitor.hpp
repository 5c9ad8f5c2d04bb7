#pragma once

#include <vector>

namespace sphmesh {

/// Windowed convergence-error measurement of the normalized feature volume.
/// Samples arrive every `sample_interval` steps; a window holds
/// `window_steps / sample_interval` samples. E_t compares the newest sample
/// against the last completed window average, E_avg two consecutive window
/// averages; both must drop below the threshold, with at least two full
/// windows observed, to converge.
class ConvergenceMonitor {
public:
    static constexpr long long kSampleInterval = 20;
    static constexpr long long kWindowSteps = 200;
    static constexpr double kThreshold = 5e-6;

    struct Errors {
        double e_t = -1.0;   // -1 until defined
        double e_avg = -1.0;
        double e_sys = -1.0;
        bool converged = false;
    };

    Errors update(double v_bar);

    const Errors& last() const { return last_; }
    bool converged() const { return last_.converged; }
    int windows_completed() const { return windows_completed_; }
    void reset();

private:
    static double relative_error(double a, double b);

    std::vector<double> window_;
    double last_window_avg_ = 0.0;
    double prev_window_avg_ = 0.0;
    int windows_completed_ = 0;
    Errors last_;
};

enum class Phase { One = 0, Transition = 1, Two = 2, Done = 3 };

struct PhaseConfig {
    long long nullify_period_phase_one = 100;
    double damping_phase_one = 0.05; // eps, suggested band [0, 0.2]
    long long transition_steps = 200;
    long long phase_two_budget = 2000;
    long long phase_one_max_steps = 200000;
};

/// Two-phase state machine: Phase One until every feature converges, a
/// linear parameter ramp over the transition, then Phase Two (per-step
/// nullification, no damping) until the budget runs out or the system
/// re-converges.
class PhaseController {
public:
    explicit PhaseController(PhaseConfig cfg) : cfg_(cfg) {}

    Phase phase() const { return phase_; }
    long long phase_steps() const { return phase_steps_; }

    /// Parameters in effect for the current global step.
    double damping() const;
    long long nullify_period() const;

    /// Advance one global step given the conjunction of per-feature converged
    /// flags. Returns the phase for the *next* step.
    Phase advance(bool all_converged);

    /// True when phase two (or the transition) re-activates groups whose
    /// phase-one monitors had latched.
    bool groups_forced_active() const { return phase_ != Phase::One; }

    const PhaseConfig& config() const { return cfg_; }

private:
    PhaseConfig cfg_;
    Phase phase_ = Phase::One;
    long long phase_steps_ = 0;
};

} // namespace sphmesh
