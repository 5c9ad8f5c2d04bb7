#include "sphmesh/sizing.hpp"

#include <algorithm>
#include <cmath>

#include "sphmesh/errors.hpp"

namespace sphmesh {

SizingField SizingField::constant(double h0, double h_min, double h_max, int dim) {
    if (h_min <= 0.0 || h_max < h_min) throw Error("sizing: need 0 < h_min <= h_max");
    SizingField s;
    s.kind_ = SizingKind::Constant;
    s.h0_ = h0;
    s.h_min_ = h_min;
    s.h_max_ = h_max;
    s.dim_ = dim;
    return s;
}

SizingField SizingField::radial(double h0, double slope, const Vec3& focus, double r0,
                                double h_min, double h_max, int dim) {
    if (h_min <= 0.0 || h_max < h_min) throw Error("sizing: need 0 < h_min <= h_max");
    SizingField s;
    s.kind_ = SizingKind::Radial;
    s.h0_ = h0;
    s.slope_ = slope;
    s.focus_ = focus;
    s.r0_ = r0;
    s.h_min_ = h_min;
    s.h_max_ = h_max;
    s.dim_ = dim;
    return s;
}

SizingField SizingField::gridded(LevelSetGrid field, double h_min, double h_max) {
    if (h_min <= 0.0 || h_max < h_min) throw Error("sizing: need 0 < h_min <= h_max");
    SizingField s;
    s.kind_ = SizingKind::Gridded;
    s.h_min_ = h_min;
    s.h_max_ = h_max;
    s.dim_ = field.dim();
    s.grid_ = std::make_shared<LevelSetGrid>(std::move(field));
    return s;
}

double SizingField::eval_size(const Vec3& x) const {
    double h;
    switch (kind_) {
        case SizingKind::Constant: h = h0_; break;
        case SizingKind::Radial: {
            Vec3 d = x - focus_;
            if (dim_ == 2) d.z = 0.0;
            h = h0_ + slope_ * std::abs(norm(d) - r0_);
            break;
        }
        case SizingKind::Gridded: h = grid_->eval_phi(x); break;
    }
    return std::clamp(h, h_min_, h_max_);
}

double SizingField::eval_density(const Vec3& x, int dim_override) const {
    double h = eval_size(x);
    double d = h;
    if (dim_override >= 2) d *= h;
    if (dim_override >= 3) d *= h;
    return 1.0 / d;
}

} // namespace sphmesh
