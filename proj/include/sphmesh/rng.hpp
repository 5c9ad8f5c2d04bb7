#pragma once

#include <cstdint>
#include <random>

namespace sphmesh {

/// Mersenne Twister stream with explicit uniform conversions, so a fixed
/// seed yields a bit-identical sequence independent of the standard library's
/// distribution internals.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Stream seeded from a master seed and a sub-stream id (e.g. feature
    /// index), so adding or reordering sub-streams leaves the others intact.
    static RngStream for_substream(std::uint64_t master_seed, std::uint64_t id) {
        std::uint64_t s = master_seed ^ (0x9E3779B97F4A7C15ull * (id + 1));
        s ^= s >> 31;
        return RngStream(s);
    }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t raw() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

} // namespace sphmesh
