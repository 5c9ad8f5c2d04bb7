#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sphmesh/levelset.hpp"
#include "sphmesh/polyline.hpp"
#include "sphmesh/sizing.hpp"

namespace sphmesh {

enum class CellType : std::uint8_t { Positive, Negative, Surface, Curve, Singularity };

enum class FeatureType : std::uint8_t { Volume, Surface, Curve, Singularity };

const char* to_string(CellType t);
const char* to_string(FeatureType t);

struct FeatureInfo {
    FeatureType type = FeatureType::Volume;
    double v_ref = 0.0; // reference volume/area/length (density-1 integral)
};

/// Per-cell classification of the background grid into the five cell
/// categories plus a feature index; immutable once built.
struct FeatureTagMap {
    std::array<int, 3> cell_dims{0, 0, 0};
    int dim = 2;
    std::vector<CellType> cell_type;   // one entry per cell
    std::vector<int> cell_feature;     // feature index, -1 for negative cells
    std::vector<FeatureInfo> index_table;

    std::size_t cell_linear(int i, int j, int k) const {
        return (static_cast<std::size_t>(k) * cell_dims[1] + j) * cell_dims[0] + i;
    }
    std::size_t cell_count() const {
        return static_cast<std::size_t>(cell_dims[0]) * cell_dims[1] * cell_dims[2];
    }
    int feature_count() const { return static_cast<int>(index_table.size()); }

    /// Cells owned by a feature (linear ids).
    std::vector<std::size_t> cells_of_feature(int feature) const;
};

/// Assign every cell exactly one type. Priority: singularity > curve >
/// surface > positive > negative. Curves and singularities keep their
/// declared ids (which must be unique and contiguous from 0); surface and
/// positive cells are grouped into face-connected components and indexed
/// after the declared features.
FeatureTagMap classify_cells(const LevelSetGrid& grid, const std::vector<FeatureCurve>& curves,
                             const std::vector<SingularityPoint>& singularities);

struct FeatureBudget {
    std::vector<double> mass;       // per feature
    std::vector<long long> count;   // per feature, round(mass) floored at 1
    std::vector<double> v_ref;      // per feature
    // Per-cell masses for volume and surface features (sampling weights).
    std::vector<double> cell_mass;  // indexed by linear cell id, 0 where not applicable
    long long total_count() const;
};

/// Midpoint-rule volume masses, marching-facet surface masses and arc-length
/// curve masses of the target density; v_ref uses the same quadrature with
/// density 1.
FeatureBudget integrate_feature_mass(const FeatureTagMap& tags, const LevelSetGrid& grid,
                                     const std::vector<FeatureCurve>& curves,
                                     const SizingField& sizing);

/// Zero-isocontour facet measure (length in 2D, area in 3D) of a single cell,
/// weighted by `density` evaluated at facet midpoints. Exposed for the
/// quadrature tests.
double surface_cell_facet_measure(const LevelSetGrid& grid, int i, int j, int k,
                                  const SizingField* sizing, int density_dim);

void write_tags_vtk(const FeatureTagMap& tags, const LevelSetGrid& grid, const std::string& path);

} // namespace sphmesh
