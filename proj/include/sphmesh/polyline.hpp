#pragma once

#include <vector>

#include "sphmesh/vec.hpp"

namespace sphmesh {

struct SingularityPoint {
    int id = 0;
    Vec3 position;
};

struct PolylineHit {
    Vec3 point;
    int segment = 0;
    double param = 0.0; // in [0,1] within the segment
    double arc = 0.0;   // arc-length coordinate of the hit
    double dist2 = 0.0;
};

/// Piecewise-linear feature curve with arc-length parametrization.
class FeatureCurve {
public:
    FeatureCurve() = default;
    FeatureCurve(int id, std::vector<Vec3> points, bool closed);

    int id() const { return id_; }
    bool closed() const { return closed_; }
    const std::vector<Vec3>& points() const { return points_; }

    int segment_count() const;
    double total_length() const { return cum_.back(); }
    double segment_length(int s) const { return cum_[s + 1] - cum_[s]; }

    /// Globally nearest point over all segments; ties broken by lowest
    /// segment index.
    PolylineHit nearest_point(const Vec3& p) const;

    Vec3 point_at_arc(double s) const;
    Vec3 tangent_at_arc(double s) const;

    /// Shortest arc-length separation (wraps on closed curves).
    double arc_distance(double s0, double s1) const;
    /// Sign of travel from s1 toward s0 along the shortest route (+1 means
    /// increasing arc coordinate).
    double arc_direction(double s0, double s1) const;

    double wrap_arc(double s) const;

private:
    int id_ = 0;
    bool closed_ = false;
    std::vector<Vec3> points_;
    std::vector<double> cum_; // cumulative length at each vertex (closed: +1 virtual)
};

} // namespace sphmesh
