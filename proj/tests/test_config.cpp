#include "isothermic/run_config.hpp"

#include <doctest.h>

using namespace isothermic;
using namespace isothermic::config;

namespace {

const char* kFig2 = R"(
# Fig-2 style run
n = 3
mode = smooth
samples = 256
polarization = 1.0

[transform]
mu = 3
eigen_index = 0
off_plane_axis = 3
angle = 0.785398163397448279

[transform]
mu = 8
off_plane_axis = 3
angle = -0.785398163397448279

[grid]
type = default_2torus

[tolerances]
closure = 1e-6

[output]
precision = 9
)";

}  // namespace

TEST_CASE("a full configuration parses") {
    const RunConfig c = parse_config_text(kFig2);
    CHECK(c.n == 3);
    CHECK(c.smooth);
    CHECK(c.size == 256);
    CHECK(c.polarization == 1.0);
    REQUIRE(c.transforms.size() == 2);
    CHECK(c.transforms[0].mu == 3.0);
    CHECK(c.transforms[0].off_plane_axis == 3);
    CHECK(c.transforms[1].mu == 8.0);
    CHECK(c.transforms[1].angle_set);
    CHECK(c.grid_type == GridType::Default2Torus);
    CHECK(c.tol.closure == 1e-6);
    CHECK(c.precision == 9);
    require_loop_settings(c);
    require_transforms(c);
}

TEST_CASE("unknown keys are rejected") {
    CHECK_THROWS_AS(parse_config_text("bogus = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n = 3\n[transform]\nnu = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[mystery]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("n == 3\n"), ConfigError);
}

TEST_CASE("mu is mandatory and must be distinct") {
    RunConfig c = parse_config_text("n = 3\nsamples = 64\n[transform]\neigen_index = 0\n");
    CHECK_THROWS_AS(require_transforms(c), ConfigError);
    c = parse_config_text("n = 3\nsamples = 64\n[transform]\nmu = 3\n[transform]\nmu = 3\n");
    CHECK_THROWS_AS(require_transforms(c), ConfigError);
}

TEST_CASE("mode and polarization validation") {
    CHECK_THROWS_AS(parse_config_text("mode = wavy\n"), ConfigError);
    RunConfig c = parse_config_text("n = 3\nmode = smooth\nsamples = 64\npolarization = -2\n");
    CHECK_THROWS_AS(require_loop_settings(c), ConfigError);
    c = parse_config_text("n = 3\nmode = discrete\nvertices = 24\npolarization = arclength\n");
    require_loop_settings(c);
    CHECK(c.pol_arclength);
}

TEST_CASE("scan section validation") {
    RunConfig c = parse_config_text("n = 3\nsamples = 64\n[scan]\nmu_min = 0.1\nmu_max = 40\ngrid = 2000\n");
    require_scan(c);
    c = parse_config_text("n = 3\nsamples = 64\n[scan]\nmu_min = 0.5\nmu_max = 4\ngrid = 1\n");
    CHECK_THROWS_AS(require_scan(c), ConfigError);
    c = parse_config_text("n = 3\nsamples = 64\n[scan]\nmu_min = -1\nmu_max = 4\ngrid = 100\n");
    CHECK_THROWS_AS(require_scan(c), ConfigError);
}

TEST_CASE("tolerances must be positive and known") {
    CHECK_THROWS_AS(parse_config_text("[tolerances]\nclosure = -1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[tolerances]\nwhatever = 1\n"), ConfigError);
}

TEST_CASE("precision bounds") {
    CHECK_THROWS_AS(parse_config_text("[output]\nprecision = 0\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[output]\nprecision = 30\n"), ConfigError);
}
