#include "sphmesh/polyline.hpp"

#include <algorithm>
#include <cmath>

#include "sphmesh/errors.hpp"

namespace sphmesh {

FeatureCurve::FeatureCurve(int id, std::vector<Vec3> points, bool closed)
    : id_(id), closed_(closed), points_(std::move(points)) {
    if (points_.size() < 2) throw Error("feature curve needs at least 2 vertices");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (norm2(points_[i] - points_[i - 1]) == 0.0)
            throw Error("feature curve has coincident consecutive vertices");
    if (closed_ && norm2(points_.back() - points_.front()) == 0.0)
        points_.pop_back(); // stored open, closure implied
    cum_.resize(points_.size() + (closed_ ? 1 : 0));
    cum_[0] = 0.0;
    for (std::size_t i = 1; i < points_.size(); ++i)
        cum_[i] = cum_[i - 1] + norm(points_[i] - points_[i - 1]);
    if (closed_) cum_.back() = cum_[points_.size() - 1] + norm(points_.front() - points_.back());
}

int FeatureCurve::segment_count() const {
    return static_cast<int>(points_.size()) - (closed_ ? 0 : 1);
}

PolylineHit FeatureCurve::nearest_point(const Vec3& p) const {
    PolylineHit best;
    best.dist2 = 1e300;
    int ns = segment_count();
    for (int s = 0; s < ns; ++s) {
        const Vec3& a = points_[s];
        const Vec3& b = points_[(s + 1) % points_.size()];
        Vec3 ab = b - a;
        double len2 = norm2(ab);
        double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
        Vec3 q = a + ab * t;
        double d2 = norm2(p - q);
        if (d2 < best.dist2 - 1e-300 || (d2 < best.dist2)) {
            best.point = q;
            best.segment = s;
            best.param = t;
            best.arc = cum_[s] + t * (cum_[s + 1] - cum_[s]);
            best.dist2 = d2;
        }
    }
    return best;
}

double FeatureCurve::wrap_arc(double s) const {
    double L = total_length();
    if (!closed_) return std::clamp(s, 0.0, L);
    s = std::fmod(s, L);
    if (s < 0.0) s += L;
    return s;
}

Vec3 FeatureCurve::point_at_arc(double s) const {
    s = wrap_arc(s);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    int seg = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0, segment_count() - 1);
    double seg_len = cum_[seg + 1] - cum_[seg];
    double t = seg_len > 0.0 ? (s - cum_[seg]) / seg_len : 0.0;
    const Vec3& a = points_[seg];
    const Vec3& b = points_[(seg + 1) % points_.size()];
    return a + (b - a) * t;
}

Vec3 FeatureCurve::tangent_at_arc(double s) const {
    s = wrap_arc(s);
    auto it = std::upper_bound(cum_.begin(), cum_.end(), s);
    int seg = std::clamp(static_cast<int>(it - cum_.begin()) - 1, 0, segment_count() - 1);
    const Vec3& a = points_[seg];
    const Vec3& b = points_[(seg + 1) % points_.size()];
    return normalized(b - a);
}

double FeatureCurve::arc_distance(double s0, double s1) const {
    double d = std::abs(wrap_arc(s0) - wrap_arc(s1));
    if (closed_) d = std::min(d, total_length() - d);
    return d;
}

double FeatureCurve::arc_direction(double s0, double s1) const {
    double a = wrap_arc(s0), b = wrap_arc(s1);
    double d = a - b;
    if (!closed_) return d >= 0.0 ? 1.0 : -1.0;
    double L = total_length();
    if (d > 0.5 * L) d -= L;
    if (d < -0.5 * L) d += L;
    return d >= 0.0 ? 1.0 : -1.0;
}

} // namespace sphmesh
