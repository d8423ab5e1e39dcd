#include "isothermic/parallel.hpp"

#include "isothermic/bianchi.hpp"
#include "isothermic/darboux.hpp"
#include "isothermic/verify.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <vector>

using namespace isothermic;

// The OpenMP kernels write each index to its own slot, so the parallel path
// must reproduce the serial reference bit for bit.

TEST_CASE("for_each_index covers the range identically under both policies") {
    const int n = 1000;
    std::vector<double> serial(n), parallel(n);
    for_each_index(n, ExecPolicy::Serial,
                   [&](std::int64_t i) { serial[i] = std::sin(0.1 * i) * i; });
    for_each_index(n, ExecPolicy::Parallel,
                   [&](std::int64_t i) { parallel[i] = std::sin(0.1 * i) * i; });
    CHECK(serial == parallel);
}

TEST_CASE("resonance scan: serial and parallel agree bitwise") {
    const loops::LoopLift L = loops::lift_loop(loops::make_circle(3, 128, 1.0));
    darboux::ScanOptions so;
    so.policy = ExecPolicy::Serial;
    const auto a = darboux::resonance_scan(L, 0.5, 4.5, 150, so);
    so.policy = ExecPolicy::Parallel;
    const auto b = darboux::resonance_scan(L, 0.5, 4.5, 150, so);
    CHECK((a.grid_defect - b.grid_defect).cwiseAbs().maxCoeff() == 0.0);
    REQUIRE(a.points.size() == b.points.size());
    for (std::size_t i = 0; i < a.points.size(); ++i) {
        CHECK(a.points[i].mu == b.points[i].mu);
        CHECK(a.points[i].defect == b.points[i].defect);
    }
}

TEST_CASE("cube build: serial and parallel agree bitwise") {
    const loops::SmoothLoop circle = loops::make_circle(3, 96, 1.0);
    std::vector<darboux::DarbouxTransform> layer;
    for (double mu : {3.0, 8.0, 13.0})
        layer.push_back(darboux::closed_darboux_smooth(circle, mu, 0));

    bianchi::BuildOptions opts;
    opts.policy = ExecPolicy::Serial;
    const auto a = bianchi::build_cube(circle.samples, circle.polarization, true, layer, opts);
    opts.policy = ExecPolicy::Parallel;
    const auto b = bianchi::build_cube(circle.samples, circle.polarization, true, layer, opts);
    for (int m = 0; m < a.vertex_count(); ++m)
        CHECK((a.loops[m] - b.loops[m]).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("verification sweeps: serial and parallel agree bitwise") {
    const loops::SmoothLoop circle = loops::make_circle(3, 128, 1.0);
    std::vector<darboux::DarbouxTransform> layer;
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 3.0, 0), 3, M_PI / 4));
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 5.0, 0), 3, -M_PI / 4));
    const auto cube = bianchi::build_cube(circle.samples, circle.polarization, true, layer);
    const auto net = torus::extract_torus(cube, torus::default_walk_2torus(2), true);

    const auto a = verify::check_semidiscrete_ribbons(net, {}, ExecPolicy::Serial);
    const auto b = verify::check_semidiscrete_ribbons(net, {}, ExecPolicy::Parallel);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].value == b[i].value);
        CHECK(a[i].pass == b[i].pass);
        CHECK(a[i].worst_location == b[i].worst_location);
    }
}
