#include "isothermic/moebius.hpp"

#include "isothermic/lorentz.hpp"
#include "oracles.hpp"

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

using namespace isothermic;
using namespace isothermic::moebius;

namespace {

Vec pt2(double x, double y) {
    Vec p(2);
    p << x, y;
    return p;
}

}  // namespace

TEST_CASE("cross ratio of the harmonic square is -1") {
    const auto cr = cross_ratio(pt2(1, 0), pt2(0, 1), pt2(-1, 0), pt2(0, -1));
    CHECK(cr.value == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(cr.concircularity_defect <= 1e-14);
}

TEST_CASE("cross ratio of collinear (0,1,3,2) is 0.25") {
    const auto cr = cross_ratio(pt2(0, 0), pt2(1, 0), pt2(3, 0), pt2(2, 0));
    CHECK(cr.value == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(cr.concircularity_defect <= 1e-14);
}

TEST_CASE("cross ratio with y12 = y is 1") {
    const auto cr = cross_ratio(pt2(0, 0), pt2(1, 0), pt2(0, 0), pt2(2, 1));
    CHECK(cr.value == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("degenerate quadruple throws") {
    CHECK_THROWS_AS(cross_ratio(pt2(1, 1), pt2(0, 0), pt2(2, 0), pt2(1, 1)),
                    DegenerateQuadruple);
}

TEST_CASE("light-cone formula matches the complex cross ratio on concircular quads") {
    oracles::Rng rng(2024);
    for (int trial = 0; trial < 300; ++trial) {
        const auto q = oracles::random_concircular_quad(5, rng);
        const auto cr = cross_ratio(q.y, q.y1, q.y12, q.y2);
        const auto cx = oracles::complex_cross_ratio(q.a, q.b, q.c, q.d);
        CHECK(std::abs(cx.imag()) <= 1e-9 * (1.0 + std::abs(cx)));
        CHECK(std::abs(cr.value - cx.real()) <= 1e-9 * (1.0 + std::abs(cx.real())));
        CHECK(cr.concircularity_defect <= 1e-10);
    }
}

TEST_CASE("cross ratio is Moebius invariant") {
    oracles::Rng rng(55);
    const int n = 4, N = n + 2;
    for (int trial = 0; trial < 40; ++trial) {
        const auto q = oracles::random_concircular_quad(n, rng);
        const Mat G = (0.4 * lorentz::wedge_action(oracles::gaussian_point(N, rng),
                                                   oracles::gaussian_point(N, rng)))
                          .exp();
        auto apply = [&](const Vec& p) { return lorentz::project(G * lorentz::lift(p)); };
        const double before = cross_ratio(q.y, q.y1, q.y12, q.y2).value;
        const double after =
            cross_ratio(apply(q.y), apply(q.y1), apply(q.y12), apply(q.y2)).value;
        CHECK(std::abs(before - after) <= 1e-10 * (1.0 + std::abs(before)));
    }
}

TEST_CASE("solve_fourth_point reproduces the worked examples") {
    const Vec r = solve_fourth_point(pt2(0, 0), pt2(1, 0), pt2(2, 0), 0.25);
    CHECK((r - pt2(3, 0)).norm() <= 1e-12);

    const Vec h = solve_fourth_point(pt2(1, 0), pt2(0, 1), pt2(0, -1), -1.0);
    CHECK((h - pt2(-1, 0)).norm() <= 1e-12);
}

TEST_CASE("solve_fourth_point round trip on random concircular triples") {
    oracles::Rng rng(808);
    std::uniform_real_distribution<double> tgt(-4.0, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const auto q = oracles::random_concircular_quad(5, rng);
        double target = tgt(rng);
        if (std::abs(target) < 0.05 || std::abs(target - 1.0) < 0.05) target = 2.5;
        const Vec fourth = solve_fourth_point(q.y, q.y1, q.y2, target);
        const auto cr = cross_ratio(q.y, q.y1, fourth, q.y2);
        CHECK(std::abs(cr.value - target) <= 1e-10 * (1.0 + std::abs(target)));
        CHECK(cr.concircularity_defect <= 1e-10);
    }
}

TEST_CASE("solve_fourth_point error paths") {
    CHECK_THROWS_AS(solve_fourth_point(pt2(0, 0), pt2(0, 0), pt2(1, 0), 2.0),
                    DegenerateInput);
    CHECK_THROWS_AS(solve_fourth_point(pt2(0, 0), pt2(1, 0), pt2(2, 0), 0.0),
                    ForbiddenCrossRatio);
    CHECK_THROWS_AS(solve_fourth_point(pt2(0, 0), pt2(1, 0), pt2(2, 0), 1.0),
                    ForbiddenCrossRatio);
    // cr(a,b,c,d) = q pushes c to infinity exactly when (a-b) + q(d-a) = 0.
    CHECK_THROWS_AS(solve_fourth_point(pt2(0, 0), pt2(1, 0), pt2(2, 0), 0.5),
                    SolutionAtInfinity);
}

TEST_CASE("infinitesimal cross ratio of a manufactured Darboux ribbon") {
    // Concentric circles with ring invariant a b/(a-b)^2 = mu form an exact
    // ribbon; the estimator must converge to mu at second order.
    const double mu = 3.0;
    const double r = oracles::inner_ring_radius(mu);
    const int S = 2048;
    Mat A(S, 2), B(S, 2);
    for (int i = 0; i < S; ++i) {
        const double t = 2.0 * M_PI * i / S;
        A.row(i) << std::cos(t), std::sin(t);
        B.row(i) << r * std::cos(t), r * std::sin(t);
    }
    const auto icr = infinitesimal_cross_ratio(A, B, 17, 2);
    CHECK(std::abs(icr.value - mu) <= 1e-6);
    // Halving the step shrinks the raw error by at least 1.8x.
    const double e_coarse = std::abs(icr.raw_coarse - mu);
    const double e_fine = std::abs(icr.raw_fine - mu);
    CHECK(e_coarse / e_fine >= 1.8);
}

TEST_CASE("infinitesimal cross ratio guards against mantissa loss") {
    const Mat A = Mat::Zero(200000, 2);
    CHECK_THROWS_AS(infinitesimal_cross_ratio(A, A, 0, 2), StepTooSmall);
}

TEST_CASE("tangent circle through a point pair") {
    Vec p = pt2(0, 0), u = pt2(1, 0), ph = pt2(0, 2);
    const TangentCircle c = tangent_circle_through(p, u, ph);
    REQUIRE(!c.is_line);
    CHECK((c.center - pt2(0, 1)).norm() <= 1e-12);
    CHECK(c.radius == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(std::abs(c.tangent_at_far.dot(pt2(1, 0))) - 1.0) <= 1e-12);

    SUBCASE("degenerates to a line when p_hat is on the tangent ray") {
        const TangentCircle l = tangent_circle_through(p, u, pt2(3, 0));
        CHECK(l.is_line);
        CHECK(std::abs(std::abs(l.direction.dot(pt2(1, 0))) - 1.0) <= 1e-12);
    }

    SUBCASE("coincident points throw") {
        CHECK_THROWS_AS(tangent_circle_through(p, u, p), CoincidentPoints);
    }

    SUBCASE("random inputs: through both points, tangent at p") {
        oracles::Rng rng(4242);
        for (int trial = 0; trial < 100; ++trial) {
            const Vec pp = oracles::gaussian_point(3, rng);
            Vec uu = oracles::gaussian_point(3, rng);
            uu /= uu.norm();
            const Vec qq = oracles::gaussian_point(3, rng);
            if ((qq - pp).norm() < 1e-3) continue;
            const TangentCircle tc = tangent_circle_through(pp, uu, qq);
            if (tc.is_line) continue;
            CHECK(std::abs((tc.center - pp).norm() - tc.radius) <= 1e-12 * (1.0 + tc.radius));
            CHECK(std::abs((tc.center - qq).norm() - tc.radius) <= 1e-12 * (1.0 + tc.radius));
            CHECK(std::abs((pp - tc.center).dot(uu)) <= 1e-12 * (1.0 + tc.radius));
        }
    }
}

TEST_CASE("ribbon tangency defect") {
    CHECK(ribbon_tangency_defect(pt2(0, 0), pt2(1, 0), pt2(0, 2), pt2(1, 0)) <= 1e-12);
    CHECK(ribbon_tangency_defect(pt2(0, 0), pt2(1, 0), pt2(0, 2), pt2(0, 1)) ==
          doctest::Approx(M_PI / 2).epsilon(1e-12));
}
