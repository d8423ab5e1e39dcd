#include "isothermic/torus.hpp"

#include "isothermic/darboux.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <filesystem>

using namespace isothermic;
using namespace isothermic::torus;

TEST_CASE("default 2-torus walk") {
    SUBCASE("N=2 reproduces the four-circle cycle") {
        const GridMap g = default_walk_2torus(2);
        REQUIRE(g.shape == std::vector<int>{4});
        CHECK(g.assignment == std::vector<bianchi::CubeIndex>{0, 1, 3, 2});
    }
    SUBCASE("N=1 is the two-curve torus") {
        const GridMap g = default_walk_2torus(1);
        CHECK(g.assignment == std::vector<bianchi::CubeIndex>{0, 1});
    }
    SUBCASE("N=4 visits all singletons in a length-8 cycle") {
        const GridMap g = default_walk_2torus(4);
        CHECK(g.assignment.size() == 8);
        for (int d = 0; d < 4; ++d) {
            const bianchi::CubeIndex single = 1u << d;
            CHECK(std::count(g.assignment.begin(), g.assignment.end(), single) == 1);
        }
        CHECK(std::count(g.assignment.begin(), g.assignment.end(), 0u) == 1);
    }
}

TEST_CASE("product grid map") {
    SUBCASE("k=2 reduces to the snake walk") {
        const GridMap p = product_grid_map(3, 2);
        const GridMap d = default_walk_2torus(3);
        CHECK(p.assignment == d.assignment);
    }
    SUBCASE("k=3, N=3 gives a (4,2) cyclic grid") {
        const GridMap g = product_grid_map(3, 3);
        CHECK(g.shape == std::vector<int>{4, 2});
        validate_grid_map(g, 3);
    }
    SUBCASE("k=4, N=2 is rejected") {
        CHECK_THROWS_AS(product_grid_map(2, 4), InsufficientDirections);
    }
}

TEST_CASE("grid map validation catches broken maps") {
    GridMap g;
    g.shape = {4};
    g.assignment = {0, 1, 2, 3};  // 1 -> 2 flips two bits
    CHECK_THROWS_AS(validate_grid_map(g, 2), GridMapInvalid);

    GridMap h;
    h.shape = {3};
    h.assignment = {0, 1, 1};  // repeated neighbor
    CHECK_THROWS_AS(validate_grid_map(h, 1), GridMapInvalid);
}

TEST_CASE("grid map file round trip") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "isotorus_grid_test";
    fs::create_directories(dir);
    const std::string path = (dir / "grid.txt").string();
    const GridMap g = product_grid_map(3, 3);
    write_grid_map_file(path, g);
    const GridMap r = read_grid_map_file(path);
    CHECK(r.shape == g.shape);
    CHECK(r.assignment == g.assignment);
}

namespace {

torus::TorusNet small_net(int S = 128) {
    const loops::SmoothLoop circle = loops::make_circle(3, S, 1.0);
    std::vector<darboux::DarbouxTransform> layer;
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 3.0, 0), 3, M_PI / 4));
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 8.0, 0), 3, -M_PI / 4));
    const bianchi::BianchiCube cube =
        bianchi::build_cube(circle.samples, circle.polarization, true, layer);
    return extract_torus(cube, default_walk_2torus(2), true);
}

}  // namespace

TEST_CASE("extract_torus preserves loop data bit-for-bit") {
    const loops::SmoothLoop circle = loops::make_circle(3, 128, 1.0);
    std::vector<darboux::DarbouxTransform> layer;
    layer.push_back(darboux::closed_darboux_smooth(circle, 3.0, 0));
    layer.push_back(darboux::closed_darboux_smooth(circle, 8.0, 0));
    const bianchi::BianchiCube cube =
        bianchi::build_cube(circle.samples, circle.polarization, true, layer);
    const GridMap g = default_walk_2torus(2);
    const TorusNet net = extract_torus(cube, g, true);

    CHECK(net.loops.size() == 4);
    for (int p = 0; p < 4; ++p)
        CHECK((net.loops[p] - cube.loop(g.at(p))).cwiseAbs().maxCoeff() == 0.0);

    // Edge labels: the toggled direction between consecutive grid points.
    CHECK(net.edge_direction[0] == 1);  // {} -> {1}
    CHECK(net.edge_direction[1] == 2);  // {1} -> {1,2}
    CHECK(net.edge_direction[2] == 1);  // {1,2} -> {2}
    CHECK(net.edge_direction[3] == 2);  // {2} -> {}
}

TEST_CASE("fullness rank") {
    const loops::SmoothLoop circle = loops::make_circle(3, 64, 1.0);
    CHECK(fullness_rank(circle.samples) == 2);

    const TorusNet net = small_net();
    CHECK(fullness_rank(point_cloud(net)) == 3);

    SUBCASE("invariant under rigid motions") {
        oracles::Rng rng(12);
        Mat skew = Mat::Zero(3, 3);
        skew(0, 1) = 0.7;
        skew(1, 0) = -0.7;
        skew(0, 2) = -0.2;
        skew(2, 0) = 0.2;
        const Mat R = skew.exp();
        const Mat moved = point_cloud(net) * R.transpose();
        CHECK(fullness_rank(moved) == 3);
    }
}
