#include "sphmesh/monitor.hpp"

#include <cmath>
#include <cstdlib>

namespace sphmesh {

double ConvergenceMonitor::relative_error(double now, double ref) {
    double num = std::abs(now - ref);
    return ref != 0.0 ? num / std::abs(ref) : num; // absolute form when the reference vanishes
}

ConvergenceMonitor::Errors ConvergenceMonitor::update(double v_bar) {
    window_.push_back(v_bar);
    const std::size_t samples_per_window = kWindowSteps / kSampleInterval;
    if (window_.size() == samples_per_window) {
        double avg = 0.0;
        for (double v : window_) avg += v;
        avg /= static_cast<double>(samples_per_window);
        prev_window_avg_ = last_window_avg_;
        last_window_avg_ = avg;
        ++windows_completed_;
        window_.clear();
    }
    Errors e;
    if (windows_completed_ >= 1) e.e_t = relative_error(v_bar, last_window_avg_);
    if (windows_completed_ >= 2) {
        e.e_avg = relative_error(last_window_avg_, prev_window_avg_);
        e.e_sys = std::max(e.e_t, e.e_avg);
        e.converged = e.e_t < kThreshold && e.e_avg < kThreshold;
    }
    last_ = e;
    return e;
}

void ConvergenceMonitor::reset() {
    window_.clear();
    last_window_avg_ = prev_window_avg_ = 0.0;
    windows_completed_ = 0;
    last_ = Errors{};
}

double PhaseController::damping() const {
    switch (phase_) {
        case Phase::One: return cfg_.damping_phase_one;
        case Phase::Transition: {
            double frac = static_cast<double>(phase_steps_) / cfg_.transition_steps;
            return cfg_.damping_phase_one * (1.0 - frac);
        }
        default: return 0.0;
    }
}

long long PhaseController::nullify_period() const {
    switch (phase_) {
        case Phase::One: return cfg_.nullify_period_phase_one;
        case Phase::Transition: {
            double frac = static_cast<double>(phase_steps_) / cfg_.transition_steps;
            double p = cfg_.nullify_period_phase_one * (1.0 - frac) + 1.0 * frac;
            return std::max(1ll, std::llround(p));
        }
        default: return 1;
    }
}

Phase PhaseController::advance(bool all_converged) {
    ++phase_steps_;
    switch (phase_) {
        case Phase::One:
            if (all_converged) {
                phase_ = Phase::Transition;
                phase_steps_ = 0;
            }
            break;
        case Phase::Transition:
            if (phase_steps_ >= cfg_.transition_steps) {
                phase_ = Phase::Two;
                phase_steps_ = 0;
            }
            break;
        case Phase::Two:
            if (all_converged || phase_steps_ >= cfg_.phase_two_budget) phase_ = Phase::Done;
            break;
        case Phase::Done: break;
    }
    return phase_;
}

} // namespace sphmesh
