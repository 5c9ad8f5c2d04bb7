#pragma once

#include <memory>
#include <string>

#include "sphmesh/levelset.hpp"
#include "sphmesh/vec.hpp"

namespace sphmesh {

enum class SizingKind { Constant, Radial, Gridded };

/// Target feature-size field h_t with the matching density rho_t = h_t^-d.
/// Values are clamped to [h_min, h_max]. Pure function of position after
/// construction; unrestricted sharing.
class SizingField {
public:
    /// h_t = clamp(h0, ...)
    static SizingField constant(double h0, double h_min, double h_max, int dim);

    /// h_t = clamp(h0 + slope * | |x - focus| - r0 |, ...). With r0 = 0 this
    /// is the linear distance-to-focus profile.
    static SizingField radial(double h0, double slope, const Vec3& focus, double r0, double h_min,
                              double h_max, int dim);

    /// Multilinear interpolation of a gridded size field.
    static SizingField gridded(LevelSetGrid field, double h_min, double h_max);

    double eval_size(const Vec3& x) const;

    /// rho_t = h_t^-dim_override; dim_override picks the 1D/2D/3D density for
    /// curve/surface/volume particles respectively.
    double eval_density(const Vec3& x, int dim_override) const;

    double h_min() const { return h_min_; }
    double h_max() const { return h_max_; }
    int dim() const { return dim_; }
    SizingKind kind() const { return kind_; }

private:
    SizingKind kind_ = SizingKind::Constant;
    double h0_ = 1.0, slope_ = 0.0, r0_ = 0.0;
    Vec3 focus_;
    double h_min_ = 1.0, h_max_ = 1.0;
    int dim_ = 2;
    std::shared_ptr<const LevelSetGrid> grid_;
};

} // namespace sphmesh
