#include <doctest.h>

#include <cmath>

#include "sphmesh/config.hpp"
#include "sphmesh/errors.hpp"
#include "sphmesh/pipeline.hpp"

using namespace sphmesh;

TEST_CASE("shipped square config parses to its published parameters") {
    RunConfig cfg = parse_config(std::string(SPHMESH_CONFIG_DIR) + "/square.cfg");
    CHECK(cfg.dim == 2);
    CHECK(cfg.geometry == GeometryKind::Box);
    CHECK(cfg.geo_box_min.x == 0.0);
    CHECK(cfg.geo_box_max.x == 100.0);
    CHECK(cfg.geo_box_max.y == 100.0);
    CHECK(cfg.h_min == doctest::Approx(0.244).epsilon(1e-15));
    CHECK(cfg.h_max == doctest::Approx(4.88).epsilon(1e-15));
    CHECK(cfg.sizing == SizingSpecKind::Radial);
    CHECK(cfg.sizing_slope ==
          doctest::Approx((4.88 - 0.244) / (100.0 * std::sqrt(2.0))).epsilon(1e-12));
    CHECK(cfg.singularities.size() == 4);
    CHECK(cfg.has_seed);
    CHECK(cfg.mode == RunMode::Improved);
    CHECK(cfg.nullify_period == 100);
    CHECK(cfg.damping == 0.05);
}

TEST_CASE("seed is mandatory") {
    CHECK_THROWS_WITH_AS((void)parse_config_text("dim = 2\nsizing.h_min = 0.1\n"),
                         doctest::Contains("seed"), ConfigError);
}

TEST_CASE("validation failures carry context") {
    CHECK_THROWS_WITH_AS((void)parse_config_text("dim = 7\nseed = 1\n", "bad.cfg"),
                         doctest::Contains("bad.cfg:1"), ConfigError);
    CHECK_THROWS_WITH_AS(
        (void)parse_config_text("seed = 1\nsizing.h_min = 2\nsizing.h_max = 1\n"),
        doctest::Contains("h_min < "), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config_text("dim = 2\nbogus_key = 3\nseed = 1\n"),
                         doctest::Contains("unknown key"), ConfigError);
    CHECK_THROWS_WITH_AS((void)parse_config_text("dim = two\nseed = 1\n"),
                         doctest::Contains(":1"), ConfigError);
}

TEST_CASE("baseline mode forces the reference scheme") {
    std::string text = "dim = 2\nseed = 4\nmode = baseline\nnullify_period = 100\n"
                       "damping = 0.1\nsizing.h_min = 0.4\nsizing.h_max = 0.5\n";
    RunConfig cfg = parse_config_text(text);
    Pipeline p(cfg);
    CHECK(p.config().correction == false);
    CHECK(p.config().nullify_period == 1);
    CHECK(p.config().damping == 0.0);
}

TEST_CASE("canonical config round trip") {
    RunConfig cfg = parse_config(std::string(SPHMESH_CONFIG_DIR) + "/zalesak.cfg");
    RunConfig again = parse_config_text(canonical_config(cfg), "echo.cfg");
    CHECK(again.dim == cfg.dim);
    CHECK(again.geometry == cfg.geometry);
    CHECK(again.geo_radius == cfg.geo_radius);
    CHECK(again.geo_slot_width == cfg.geo_slot_width);
    CHECK(again.h_min == cfg.h_min);
    CHECK(again.h_max == cfg.h_max);
    CHECK(again.sizing_h0 == cfg.sizing_h0);
    CHECK(again.seed == cfg.seed);
    CHECK(again.init_sampling == cfg.init_sampling);
    CHECK(again.singularities.size() == cfg.singularities.size());
    for (std::size_t s = 0; s < cfg.singularities.size(); ++s)
        CHECK(norm(again.singularities[s].position - cfg.singularities[s].position) == 0.0);
    CHECK(canonical_config(again) == canonical_config(cfg));
}

TEST_CASE("curve declarations parse") {
    std::string text = "dim = 3\ngeometry = box\nseed = 1\nsizing.h_min = 0.4\n"
                       "sizing.h_max = 0.5\n"
                       "curve.0 = open  0 0 0  1 0 0\n"
                       "curve.1 = closed  0 0 0  1 0 0  1 1 0  0 1 0\n";
    RunConfig cfg = parse_config_text(text);
    REQUIRE(cfg.curves.size() == 2);
    CHECK(!cfg.curves[0].closed());
    CHECK(cfg.curves[1].closed());
    CHECK(cfg.curves[1].total_length() == doctest::Approx(4.0));
    RunConfig again = parse_config_text(canonical_config(cfg));
    CHECK(again.curves.size() == 2);
    CHECK(again.curves[1].total_length() == doctest::Approx(4.0));
}
