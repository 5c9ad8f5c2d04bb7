#include <doctest.h>

#include <random>

#include "sphmesh/sizing.hpp"

using namespace sphmesh;

namespace {

// Linear distance-to-corner profile of the 100x100 square case.
SizingField square_sizing() {
    double h_min = 0.244, h_max = 4.88;
    double slope = (h_max - h_min) / (100.0 * std::sqrt(2.0));
    return SizingField::radial(h_min, slope, {100, 100, 0}, 0.0, h_min, h_max, 2);
}

} // namespace

TEST_CASE("square sizing hits its extremes") {
    auto s = square_sizing();
    CHECK(s.eval_size({100, 100, 0}) == doctest::Approx(0.244).epsilon(1e-12));
    CHECK(s.eval_size({0, 0, 0}) == doctest::Approx(4.88).epsilon(1e-12));
}

TEST_CASE("shell-focused sizing") {
    // h = 0.025 + 0.2 | r - 0.5 |
    auto s = SizingField::radial(0.025, 0.2, {0, 0, 0}, 0.5, 0.025, 0.125, 3);
    CHECK(s.eval_size({0.5, 0, 0}) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(s.eval_size({0.3, 0, 0}) == doctest::Approx(0.025 + 0.2 * 0.2).epsilon(1e-12));
    CHECK(s.eval_size({0, 0, 0}) == doctest::Approx(0.125).epsilon(1e-12)); // clamped at h_max
}

TEST_CASE("density powers") {
    auto s = SizingField::constant(0.5, 0.1, 1.0, 3);
    CHECK(s.eval_density({0, 0, 0}, 2) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(s.eval_density({0, 0, 0}, 3) == doctest::Approx(8.0).epsilon(1e-12));
    auto one = SizingField::constant(1.0, 0.1, 2.0, 3);
    for (int d : {1, 2, 3})
        CHECK(one.eval_density({0, 0, 0}, d) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("clamping and monotone density") {
    auto s = square_sizing();
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-50.0, 250.0);
    double prev_h = -1.0, prev_rho = -1.0;
    for (int n = 0; n < 5000; ++n) {
        Vec3 p{u(rng), u(rng), 0};
        double h = s.eval_size(p);
        CHECK(h >= 0.244);
        CHECK(h <= 4.88);
        double rho = s.eval_density(p, 2);
        if (prev_h >= 0.0 && h > prev_h) CHECK(rho < prev_rho);
        prev_h = h;
        prev_rho = rho;
    }
}
