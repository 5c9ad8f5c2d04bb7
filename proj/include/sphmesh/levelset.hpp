#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "sphmesh/vec.hpp"

namespace sphmesh {

// Geometry primitives, signed-distance convention: phi > 0 inside the
// meshing region, phi < 0 outside, phi == 0 on the boundary.

struct SpherePrim {          // circle in 2D
    Vec3 center;
    double radius = 1.0;
};

struct BoxPrim {
    Vec3 lo, hi;
};

struct SlottedDiskPrim {     // disk with a rectangular slot cut out
    Vec3 center;
    double radius = 15.0;
    double slot_width = 5.0;
    double slot_length = 25.0;
};

struct ImportedField {
    std::string path;
};

using PrimitiveSpec = std::variant<SpherePrim, BoxPrim, SlottedDiskPrim, ImportedField>;

double analytic_phi(const PrimitiveSpec& prim, const Vec3& p, int dim);

/// Narrowest geometric length scale of a primitive (used to reject grids
/// too coarse to resolve it).
double narrowest_feature(const PrimitiveSpec& prim, int dim);

/// Uniform Cartesian scalar field with one phi sample per node.
/// Read-only after construction; safe for unsynchronized shared reads.
class LevelSetGrid {
public:
    LevelSetGrid() = default;

    /// Sample a primitive's signed distance onto a grid covering `box_lo..box_hi`
    /// expanded by `ghost_layers` layers of `spacing`.
    static LevelSetGrid build(const PrimitiveSpec& prim, const Vec3& box_lo, const Vec3& box_hi,
                              double spacing, int dim, int ghost_layers = 2);

    /// Wrap an externally produced field (values in x-fastest node order).
    static LevelSetGrid from_values(const Vec3& origin, const Vec3& spacing,
                                    std::array<int, 3> dims, int dim, std::vector<double> values);

    static LevelSetGrid load_field(const std::string& path);
    void save_field(const std::string& path, bool binary = false) const;

    int dim() const { return dim_; }
    const std::array<int, 3>& dims() const { return dims_; }
    const Vec3& origin() const { return origin_; }
    const Vec3& spacing() const { return spacing_; }

    std::size_t node_count() const;
    std::size_t cell_count() const;
    std::array<int, 3> cell_dims() const;

    double node_value(int i, int j, int k) const;
    Vec3 node_position(int i, int j, int k) const;
    Vec3 cell_center(int i, int j, int k) const;
    Vec3 cell_lo(int i, int j, int k) const;

    std::size_t cell_linear(int i, int j, int k) const;
    std::array<int, 3> cell_of(const Vec3& p) const;

    bool contains(const Vec3& p) const;
    Vec3 coverage_lo() const { return origin_; }
    Vec3 coverage_hi() const;
    double domain_diagonal() const;

    /// Multilinear interpolation; exact at nodes. Throws OutOfDomainError
    /// outside the covered box.
    double eval_phi(const Vec3& p) const;

    /// Central-difference gradient with a spacing-wide stencil (one-sided at
    /// the coverage boundary).
    Vec3 eval_grad(const Vec3& p) const;

    /// Outward unit normal -grad(phi)/|grad(phi)|. Throws DegenerateNormalError
    /// when the gradient vanishes (medial-axis queries).
    Vec3 eval_normal(const Vec3& p) const;

    /// Newton-style projection onto the zero level-set. Requires
    /// |phi(p)| <= 2 max(spacing); converges to |phi| <= 1e-8 * diagonal or
    /// throws ProjectionFailureError after 20 iterations.
    Vec3 project_to_zero(const Vec3& p) const;

    /// Same iteration without the proximity precondition and a larger
    /// iteration budget (containment repair of deep overshoots).
    Vec3 project_newton(const Vec3& p, int max_iter = 40) const;

    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t node_linear(int i, int j, int k) const;

    Vec3 origin_, spacing_{1, 1, 1};
    std::array<int, 3> dims_{2, 2, 1};
    int dim_ = 2;
    std::vector<double> values_;
};

} // namespace sphmesh
