#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sphmesh/levelset.hpp"
#include "sphmesh/monitor.hpp"
#include "sphmesh/polyline.hpp"

namespace sphmesh {

enum class GeometryKind { Circle, Sphere, Box, Zalesak, Field };
enum class SizingSpecKind { Constant, Radial, Gridded };
enum class InitSampling { Density, Uniform };
enum class RunMode { Improved, Baseline };

/// Flat key/value run configuration. See the repository README for the key
/// reference; unknown keys are rejected, a seed is mandatory.
struct RunConfig {
    int dim = 2;

    GeometryKind geometry = GeometryKind::Circle;
    Vec3 geo_center;
    double geo_radius = 1.0;
    Vec3 geo_box_min, geo_box_max;
    double geo_slot_width = 5.0, geo_slot_length = 25.0;
    std::string geo_field_file;

    SizingSpecKind sizing = SizingSpecKind::Constant;
    double h_min = 0.1, h_max = 1.0;
    double sizing_h0 = 0.0, sizing_slope = 0.0, sizing_r0 = 0.0;
    Vec3 sizing_focus;
    std::string sizing_field_file;

    double grid_spacing = 0.0; // 0: default h_min / 1.75

    std::vector<FeatureCurve> curves;
    std::vector<SingularityPoint> singularities;

    std::uint64_t seed = 0;
    bool has_seed = false;

    RunMode mode = RunMode::Improved;
    bool correction = true;           // boundary correction term
    InitSampling init_sampling = InitSampling::Density;

    long long nullify_period = 100;
    double damping = 0.05;
    double dt_collapse_ratio = 0.1;
    long long transition_steps = 200;
    long long phase_two_budget = 2000;
    long long max_steps = 200000;

    std::string output_dir = "out";
    long long snapshot_cadence = 1000;
    int workers = 0; // 0: hardware concurrency
    bool deterministic = true;
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

/// Canonical flat text that parses back to the same configuration.
std::string canonical_config(const RunConfig& cfg);

void validate(const RunConfig& cfg);

} // namespace sphmesh
