#include "sphmesh/levelset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

#include "sphmesh/errors.hpp"

namespace sphmesh {

namespace {

double sphere_phi(const SpherePrim& s, const Vec3& p, int dim) {
    Vec3 d = p - s.center;
    if (dim == 2) d.z = 0.0;
    return s.radius - norm(d);
}

// Exact box SDF, positive inside.
double box_phi(const BoxPrim& b, const Vec3& p, int dim) {
    Vec3 c = (b.lo + b.hi) * 0.5;
    Vec3 half = (b.hi - b.lo) * 0.5;
    double qx = std::abs(p.x - c.x) - half.x;
    double qy = std::abs(p.y - c.y) - half.y;
    double qz = dim == 3 ? std::abs(p.z - c.z) - half.z : -1e300;
    double ox = std::max(qx, 0.0), oy = std::max(qy, 0.0), oz = dim == 3 ? std::max(qz, 0.0) : 0.0;
    double outside = std::sqrt(ox * ox + oy * oy + oz * oz);
    double inside = std::min(std::max(qx, std::max(qy, qz)), 0.0);
    return -(outside + inside);
}

double slotted_disk_phi(const SlottedDiskPrim& z, const Vec3& p, int dim) {
    SpherePrim disk{z.center, z.radius};
    // Slot: centered in x, top edge at center.y + (slot_length - radius),
    // extended past the disk bottom so the cut is clean.
    double top = z.center.y + (z.slot_length - z.radius);
    BoxPrim slot{{z.center.x - 0.5 * z.slot_width, z.center.y - z.radius - 0.5, -1.0},
                 {z.center.x + 0.5 * z.slot_width, top, 1.0}};
    // Difference disk \ slot: intersection with the slot complement.
    return std::min(sphere_phi(disk, p, dim), -box_phi(slot, p, 2));
}

} // namespace

double analytic_phi(const PrimitiveSpec& prim, const Vec3& p, int dim) {
    if (const auto* s = std::get_if<SpherePrim>(&prim)) return sphere_phi(*s, p, dim);
    if (const auto* b = std::get_if<BoxPrim>(&prim)) return box_phi(*b, p, dim);
    if (const auto* z = std::get_if<SlottedDiskPrim>(&prim)) return slotted_disk_phi(*z, p, dim);
    throw Error("analytic_phi: imported fields have no analytic form");
}

double narrowest_feature(const PrimitiveSpec& prim, int dim) {
    if (const auto* s = std::get_if<SpherePrim>(&prim)) return s->radius;
    if (const auto* b = std::get_if<BoxPrim>(&prim)) {
        double w = std::min(b->hi.x - b->lo.x, b->hi.y - b->lo.y);
        if (dim == 3) w = std::min(w, b->hi.z - b->lo.z);
        return w;
    }
    if (const auto* z = std::get_if<SlottedDiskPrim>(&prim)) return z->slot_width;
    return 1e300;
}

LevelSetGrid LevelSetGrid::build(const PrimitiveSpec& prim, const Vec3& box_lo, const Vec3& box_hi,
                                 double spacing, int dim, int ghost_layers) {
    if (spacing <= 0.0) throw Error("level-set grid: spacing must be positive");
    if (std::holds_alternative<ImportedField>(prim))
        return load_field(std::get<ImportedField>(prim).path);

    double narrow = narrowest_feature(prim, dim);
    if (spacing > 0.5 * narrow) {
        std::ostringstream os;
        os << "level-set grid too coarse: spacing " << spacing << " resolves fewer than 2 cells "
           << "across the narrowest feature (" << narrow << "); need spacing <= " << 0.5 * narrow;
        throw Error(os.str());
    }

    LevelSetGrid g;
    g.dim_ = dim;
    g.spacing_ = {spacing, spacing, spacing};
    double pad = ghost_layers * spacing;
    g.origin_ = {box_lo.x - pad, box_lo.y - pad, dim == 3 ? box_lo.z - pad : 0.0};
    for (int a = 0; a < 3; ++a) {
        if (a == 2 && dim == 2) {
            g.dims_[2] = 1;
            g.spacing_.z = spacing;
            continue;
        }
        double len = (a == 0 ? box_hi.x - box_lo.x : a == 1 ? box_hi.y - box_lo.y : box_hi.z - box_lo.z)
                     + 2.0 * pad;
        g.dims_[a] = static_cast<int>(std::ceil(len / spacing)) + 1;
        if (g.dims_[a] < 2) g.dims_[a] = 2;
    }

    g.values_.resize(g.node_count());
    for (int k = 0; k < g.dims_[2]; ++k)
        for (int j = 0; j < g.dims_[1]; ++j)
            for (int i = 0; i < g.dims_[0]; ++i)
                g.values_[g.node_linear(i, j, k)] = analytic_phi(prim, g.node_position(i, j, k), dim);
    return g;
}

LevelSetGrid LevelSetGrid::from_values(const Vec3& origin, const Vec3& spacing,
                                       std::array<int, 3> dims, int dim,
                                       std::vector<double> values) {
    LevelSetGrid g;
    g.origin_ = origin;
    g.spacing_ = spacing;
    g.dims_ = dims;
    g.dim_ = dim;
    if (dim == 2) g.dims_[2] = 1;
    if (spacing.x <= 0 || spacing.y <= 0 || (dim == 3 && spacing.z <= 0))
        throw Error("level-set grid: spacing must be positive on every axis");
    for (int a = 0; a < dim; ++a)
        if (g.dims_[a] < 2) throw Error("level-set grid: need at least 2 nodes per axis");
    if (values.size() != g.node_count()) throw Error("level-set grid: value count mismatch");
    g.values_ = std::move(values);
    return g;
}

std::size_t LevelSetGrid::node_count() const {
    return static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2];
}

std::array<int, 3> LevelSetGrid::cell_dims() const {
    return {dims_[0] - 1, dims_[1] - 1, dim_ == 3 ? dims_[2] - 1 : 1};
}

std::size_t LevelSetGrid::cell_count() const {
    auto cd = cell_dims();
    return static_cast<std::size_t>(cd[0]) * cd[1] * cd[2];
}

std::size_t LevelSetGrid::node_linear(int i, int j, int k) const {
    return (static_cast<std::size_t>(k) * dims_[1] + j) * dims_[0] + i;
}

std::size_t LevelSetGrid::cell_linear(int i, int j, int k) const {
    auto cd = cell_dims();
    return (static_cast<std::size_t>(k) * cd[1] + j) * cd[0] + i;
}

double LevelSetGrid::node_value(int i, int j, int k) const {
    return values_[node_linear(i, j, k)];
}

Vec3 LevelSetGrid::node_position(int i, int j, int k) const {
    return {origin_.x + i * spacing_.x, origin_.y + j * spacing_.y,
            dim_ == 3 ? origin_.z + k * spacing_.z : 0.0};
}

Vec3 LevelSetGrid::cell_center(int i, int j, int k) const {
    return {origin_.x + (i + 0.5) * spacing_.x, origin_.y + (j + 0.5) * spacing_.y,
            dim_ == 3 ? origin_.z + (k + 0.5) * spacing_.z : 0.0};
}

Vec3 LevelSetGrid::cell_lo(int i, int j, int k) const { return node_position(i, j, k); }

std::array<int, 3> LevelSetGrid::cell_of(const Vec3& p) const {
    auto cd = cell_dims();
    std::array<int, 3> c{0, 0, 0};
    const double* pv = &p.x;
    const double* ov = &origin_.x;
    const double* sv = &spacing_.x;
    for (int a = 0; a < dim_; ++a) {
        int i = static_cast<int>(std::floor((pv[a] - ov[a]) / sv[a]));
        c[a] = std::clamp(i, 0, cd[a] - 1);
    }
    return c;
}

Vec3 LevelSetGrid::coverage_hi() const {
    return {origin_.x + (dims_[0] - 1) * spacing_.x, origin_.y + (dims_[1] - 1) * spacing_.y,
            dim_ == 3 ? origin_.z + (dims_[2] - 1) * spacing_.z : 0.0};
}

double LevelSetGrid::domain_diagonal() const {
    Vec3 d = coverage_hi() - origin_;
    if (dim_ == 2) d.z = 0.0;
    return norm(d);
}

bool LevelSetGrid::contains(const Vec3& p) const {
    Vec3 hi = coverage_hi();
    if (p.x < origin_.x || p.x > hi.x || p.y < origin_.y || p.y > hi.y) return false;
    if (dim_ == 3 && (p.z < origin_.z || p.z > hi.z)) return false;
    return true;
}

double LevelSetGrid::eval_phi(const Vec3& p) const {
    if (!contains(p)) {
        std::ostringstream os;
        os << "eval_phi: point (" << p.x << ", " << p.y << ", " << p.z << ") outside grid coverage";
        throw OutOfDomainError(os.str());
    }
    double fx = (p.x - origin_.x) / spacing_.x;
    double fy = (p.y - origin_.y) / spacing_.y;
    double fz = dim_ == 3 ? (p.z - origin_.z) / spacing_.z : 0.0;
    int i = std::clamp(static_cast<int>(std::floor(fx)), 0, dims_[0] - 2);
    int j = std::clamp(static_cast<int>(std::floor(fy)), 0, dims_[1] - 2);
    int k = dim_ == 3 ? std::clamp(static_cast<int>(std::floor(fz)), 0, dims_[2] - 2) : 0;
    double tx = std::clamp(fx - i, 0.0, 1.0);
    double ty = std::clamp(fy - j, 0.0, 1.0);
    double tz = dim_ == 3 ? std::clamp(fz - k, 0.0, 1.0) : 0.0;

    auto v = [&](int di, int dj, int dk) { return node_value(i + di, j + dj, k + dk); };
    double c00 = v(0, 0, 0) * (1 - tx) + v(1, 0, 0) * tx;
    double c10 = v(0, 1, 0) * (1 - tx) + v(1, 1, 0) * tx;
    double c0 = c00 * (1 - ty) + c10 * ty;
    if (dim_ == 2) return c0;
    double c01 = v(0, 0, 1) * (1 - tx) + v(1, 0, 1) * tx;
    double c11 = v(0, 1, 1) * (1 - tx) + v(1, 1, 1) * tx;
    double c1 = c01 * (1 - ty) + c11 * ty;
    return c0 * (1 - tz) + c1 * tz;
}

Vec3 LevelSetGrid::eval_grad(const Vec3& p) const {
    Vec3 g;
    Vec3 hi = coverage_hi();
    const double* pv = &p.x;
    const double* ov = &origin_.x;
    const double* hv = &hi.x;
    const double* sv = &spacing_.x;
    double* gv = &g.x;
    for (int a = 0; a < dim_; ++a) {
        double step = sv[a];
        Vec3 pp = p, pm = p;
        double denom = 2.0 * step;
        if (pv[a] + step > hv[a]) {           // one-sided at the boundary
            (&pm.x)[a] -= step;
            denom = step;
        } else if (pv[a] - step < ov[a]) {
            (&pp.x)[a] += step;
            denom = step;
        } else {
            (&pp.x)[a] += step;
            (&pm.x)[a] -= step;
        }
        gv[a] = (eval_phi(pp) - eval_phi(pm)) / denom;
    }
    return g;
}

Vec3 LevelSetGrid::eval_normal(const Vec3& p) const {
    Vec3 g = eval_grad(p);
    double n = norm(g);
    if (n <= 1e-8)
        throw DegenerateNormalError("eval_normal: vanishing level-set gradient");
    return g * (-1.0 / n);
}

Vec3 LevelSetGrid::project_newton(const Vec3& p, int max_iter) const {
    double diag = domain_diagonal();
    Vec3 x = p;
    double phi = eval_phi(x);
    for (int it = 0; it < max_iter; ++it) {
        if (std::abs(phi) <= 1e-8 * diag) return x;
        Vec3 g = eval_grad(x);
        double g2 = norm2(g);
        if (g2 <= 1e-16)
            throw ProjectionFailureError("project_to_zero: vanishing gradient", std::abs(phi));
        Vec3 xn = x - g * (phi / g2);
        if (!contains(xn)) {
            // Damp the Newton step rather than leaving the grid.
            xn = x - g * (0.5 * phi / g2);
            if (!contains(xn))
                throw ProjectionFailureError("project_to_zero: iterate left grid coverage",
                                             std::abs(phi));
        }
        x = xn;
        phi = eval_phi(x);
    }
    if (std::abs(phi) <= 1e-6 * diag) return x;
    throw ProjectionFailureError("project_to_zero: no convergence", std::abs(phi));
}

Vec3 LevelSetGrid::project_to_zero(const Vec3& p) const {
    double max_sp = std::max(spacing_.x, std::max(spacing_.y, dim_ == 3 ? spacing_.z : 0.0));
    double phi0 = eval_phi(p);
    if (std::abs(phi0) > 2.0 * max_sp + 1e-12)
        throw ProjectionFailureError("project_to_zero: start point too far from the zero level-set",
                                     std::abs(phi0));
    return project_newton(p, 20);
}

// --- field file I/O ---------------------------------------------------------
//
// Plain text header followed by node values in x-fastest order:
//
//   sphmesh-field v1
//   dim <2|3>
//   dims <nx> <ny> [nz]
//   origin <ox> <oy> [oz]
//   spacing <sx> <sy> [sz]
//   data <ascii|binary>
//   <values...>           (binary: little-endian float64 immediately after newline)

void LevelSetGrid::save_field(const std::string& path, bool binary) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open field file for writing: " + path);
    f << "sphmesh-field v1\n";
    f << "dim " << dim_ << "\n";
    f << "dims " << dims_[0] << " " << dims_[1];
    if (dim_ == 3) f << " " << dims_[2];
    f << "\norigin " << origin_.x << " " << origin_.y;
    if (dim_ == 3) f << " " << origin_.z;
    f << "\nspacing " << spacing_.x << " " << spacing_.y;
    if (dim_ == 3) f << " " << spacing_.z;
    f << "\ndata " << (binary ? "binary" : "ascii") << "\n";
    if (binary) {
        f.write(reinterpret_cast<const char*>(values_.data()),
                static_cast<std::streamsize>(values_.size() * sizeof(double)));
    } else {
        f.precision(17);
        for (std::size_t n = 0; n < values_.size(); ++n)
            f << values_[n] << ((n + 1) % 8 == 0 ? "\n" : " ");
        f << "\n";
    }
}

LevelSetGrid LevelSetGrid::load_field(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("cannot open field file: " + path);
    std::string magic, version;
    f >> magic >> version;
    if (magic != "sphmesh-field") throw Error("not a sphmesh field file: " + path);

    LevelSetGrid g;
    std::string key, mode;
    g.dims_ = {0, 0, 1};
    while (f >> key) {
        if (key == "dim") {
            f >> g.dim_;
        } else if (key == "dims") {
            f >> g.dims_[0] >> g.dims_[1];
            if (g.dim_ == 3) f >> g.dims_[2];
        } else if (key == "origin") {
            f >> g.origin_.x >> g.origin_.y;
            if (g.dim_ == 3) f >> g.origin_.z;
        } else if (key == "spacing") {
            f >> g.spacing_.x >> g.spacing_.y;
            if (g.dim_ == 3) f >> g.spacing_.z;
        } else if (key == "data") {
            f >> mode;
            break;
        } else {
            throw Error("field file: unknown header key '" + key + "'");
        }
    }
    if (g.dim_ != 2 && g.dim_ != 3) throw Error("field file: dim must be 2 or 3");
    if (g.dims_[0] < 2 || g.dims_[1] < 2 || (g.dim_ == 3 && g.dims_[2] < 2))
        throw Error("field file: dims must be >= 2 per axis");
    g.values_.resize(g.node_count());
    if (mode == "binary") {
        f.ignore(1); // newline after "data binary"
        f.read(reinterpret_cast<char*>(g.values_.data()),
               static_cast<std::streamsize>(g.values_.size() * sizeof(double)));
        if (!f) throw Error("field file: truncated binary payload");
    } else if (mode == "ascii") {
        for (auto& v : g.values_)
            if (!(f >> v)) throw Error("field file: truncated ascii payload");
    } else {
        throw Error("field file: data mode must be ascii or binary");
    }
    return g;
}

} // namespace sphmesh
