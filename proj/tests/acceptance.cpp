// Acceptance suite: one criterion per function, one pass/fail line each.
// Every tolerance is pinned here, in code. The process exits nonzero if any
// criterion fails.

#include "isothermic/bianchi.hpp"
#include "isothermic/darboux.hpp"
#include "isothermic/lorentz.hpp"
#include "isothermic/moebius.hpp"
#include "isothermic/obj_export.hpp"
#include "isothermic/torus.hpp"
#include "isothermic/transport.hpp"
#include "isothermic/verify.hpp"

#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace isothermic;

namespace {

struct Criterion {
    std::string id;
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        detail += (detail.empty() ? "" : "; ") + what;
    }
};

int g_failures = 0;

template <typename Fn>
void run(const std::string& id, const std::string& title, Fn&& fn) {
    Criterion c;
    c.id = id;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        fn(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.detail += std::string("exception: ") + e.what();
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] %s: %s (%.2f s)%s%s\n", c.pass ? "PASS" : "FAIL", id.c_str(),
                title.c_str(), dt, c.detail.empty() ? "" : " -- ", c.detail.c_str());
    std::fflush(stdout);
    if (!c.pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3e", v);
    return buf;
}

// A1: lift identities over 10^4 random points per dimension pair.
void a1(Criterion& c) {
    oracles::Rng rng(101);
    double worst_rel = 0.0, worst_q = 0.0;
    for (int n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 2000; ++trial) {
            const Vec x = oracles::gaussian_point(n, rng);
            const Vec y = oracles::gaussian_point(n, rng);
            const double lhs = lorentz::inner(lorentz::lift(x), lorentz::lift(y));
            const double rhs = -2.0 * (x - y).squaredNorm();
            worst_rel = std::max(worst_rel, std::abs(lhs - rhs) / (1.0 + std::abs(rhs)));
            worst_q = std::max(worst_q,
                               std::abs(lorentz::inner_with_q(lorentz::lift(x)) + 1.0));
        }
    }
    c.require(worst_rel <= 1e-12, "distance identity " + fmt(worst_rel));
    c.require(worst_q <= 1e-14, "q normalization " + fmt(worst_q));
}

// A2: light-cone cross ratio vs the calibrated complex oracle.
void a2(Criterion& c) {
    oracles::Rng rng(202);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto q = oracles::random_concircular_quad(5, rng);
        const double lc = moebius::cross_ratio(q.y, q.y1, q.y12, q.y2).value;
        const auto cx = oracles::complex_cross_ratio(q.a, q.b, q.c, q.d);
        worst = std::max(worst, std::abs(lc - cx.real()) / (1.0 + std::abs(cx.real())));
    }
    c.require(worst <= 1e-9, "oracle agreement " + fmt(worst));

    Vec h1(2), h2(2), h3(2), h4(2);
    h1 << 1, 0;
    h2 << 0, 1;
    h3 << -1, 0;
    h4 << 0, -1;
    const double harmonic = moebius::cross_ratio(h1, h2, h3, h4).value;
    c.require(harmonic == -1.0, "harmonic square = " + fmt(harmonic));
    Vec c1(2), c2(2), c3(2), c4(2);
    c1 << 0, 0;
    c2 << 1, 0;
    c3 << 3, 0;
    c4 << 2, 0;
    const double collinear = moebius::cross_ratio(c1, c2, c3, c4).value;
    c.require(collinear == 0.25, "collinear quadruple = " + fmt(collinear));
}

// A3: transport quality at S = 256, 4 substeps.
void a3(Criterion& c) {
    const loops::LoopLift L = loops::lift_loop(loops::make_circle(3, 256, 1.0));
    for (double mu : {3.0, 8.0}) {
        const transport::Monodromy P = transport::monodromy_smooth(L, mu, 4, 1e-8);
        c.require(P.defect <= 1e-8, "Lorentz defect " + fmt(P.defect));
        const int sub = P.steps / 256;
        const Mat halved = transport::transport_smooth(L, mu, 0, 256, sub / 2);
        const double change = (halved - P.map).cwiseAbs().maxCoeff();
        c.require(change <= 1e-8, "halving change " + fmt(change));

        const Mat ref = transport::transport_smooth(L, mu, 0, 256, 32);
        const double e2 =
            (transport::transport_smooth(L, mu, 0, 256, 2) - ref).cwiseAbs().maxCoeff();
        const double e4 =
            (transport::transport_smooth(L, mu, 0, 256, 4) - ref).cwiseAbs().maxCoeff();
        const double ratio = e2 / e4;
        c.require(ratio >= 12.0 && ratio <= 20.0, "order-4 ratio " + fmt(ratio));
    }
}

// A4: closed planar circle transforms at mu in {0.5, 3, 8, 20} plus the
// random-initial-condition negative control at mu = 3.
void a4(Criterion& c) {
    const loops::SmoothLoop circle = loops::make_circle(3, 1024, 1.0);
    for (double mu : {0.5, 3.0, 8.0, 20.0}) {
        const darboux::DarbouxTransform t = darboux::closed_darboux_smooth(circle, mu, 0);
        c.require(t.closure_gap <= 1e-6,
                  "mu=" + fmt(mu) + " closure " + fmt(t.closure_gap));
        const darboux::CircleFit fit = darboux::fit_circle(t.result);
        c.require(fit.residual <= 1e-6, "mu=" + fmt(mu) + " circle fit " + fmt(fit.residual));
        c.require(fit.planar_residual <= 1e-6,
                  "mu=" + fmt(mu) + " planarity " + fmt(fit.planar_residual));
        if (t.resonant) c.note("mu=" + fmt(mu) + " built via resonance continuation");
    }

    oracles::Rng rng(404);
    int big_gap = 0;
    const int trials = 60;
    const loops::SmoothLoop small_circle = loops::make_circle(3, 256, 1.0);
    for (int i = 0; i < trials; ++i) {
        const Vec x = oracles::gaussian_point(3, rng);
        const auto t = darboux::darboux_smooth_from_vector(small_circle, 3.0,
                                                           lorentz::lift(x));
        if (t.closure_gap > 1e-3) ++big_gap;
    }
    c.require(big_gap * 100 >= trials * 95,
              "negative control " + std::to_string(big_gap) + "/" + std::to_string(trials));
}

// A5: permutability on the Fig. 2 configuration plus hexahedron consistency.
void a5(Criterion& c) {
    const loops::SmoothLoop circle = loops::make_circle(3, 256, 1.0);
    const auto t3 = darboux::closed_darboux_smooth(circle, 3.0, 0);
    const auto t8 = darboux::closed_darboux_smooth(circle, 8.0, 0);
    const Mat& y = circle.samples;
    const bianchi::PermuteResult y12 = bianchi::permute(y, t3.result, t8.result, 3.0, 8.0);

    double worst = 0.0;
    for (int i = 0; i < 256; ++i) {
        const double v = moebius::cross_ratio(y.row(i), t8.result.row(i), y12.loop.row(i),
                                              t3.result.row(i))
                             .value;
        worst = std::max(worst, std::abs(v - 3.0 / 8.0));
    }
    c.require(worst <= 1e-10, "per-sample cross ratio 3/8 dev " + fmt(worst));

    const bianchi::PermuteResult swapped =
        bianchi::permute(y, t8.result, t3.result, 8.0, 3.0);
    const double sym = (swapped.loop - y12.loop).cwiseAbs().maxCoeff();
    c.require(sym <= 1e-9, "swap symmetry " + fmt(sym));

    std::vector<darboux::DarbouxTransform> layer = {
        t3, t8, darboux::closed_darboux_smooth(circle, 13.0, 0)};
    const bianchi::BianchiCube cube =
        bianchi::build_cube(circle.samples, circle.polarization, true, layer);
    c.require(cube.max_consistency_dev <= 1e-7,
              "hexahedron consistency " + fmt(cube.max_consistency_dev));
}

torus::TorusNet fig2_net(int S) {
    const loops::SmoothLoop circle = loops::make_circle(3, S, 1.0);
    std::vector<darboux::DarbouxTransform> layer;
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 3.0, 0), 3, M_PI / 4));
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 8.0, 0), 3, -M_PI / 4));
    const bianchi::BianchiCube cube =
        bianchi::build_cube(circle.samples, circle.polarization, true, layer);
    return torus::extract_torus(cube, torus::default_walk_2torus(2), true);
}

// A6: the Fig. 2 torus at verification-grade sampling.
void a6(Criterion& c) {
    const torus::TorusNet net = fig2_net(1024);
    const auto ribbons = verify::check_semidiscrete_ribbons(net);
    for (const auto& r : ribbons) {
        if (r.name == "ribbon_tangency")
            c.require(r.value <= 1e-6, "tangency " + fmt(r.value));
        if (r.name == "ribbon_infinitesimal_cr")
            c.require(r.value <= 1e-4, "infinitesimal cr dev " + fmt(r.value));
        if (r.name == "ribbon_cr_ratio_constancy")
            c.require(r.pass, "cr ratio constancy " + fmt(r.value));
    }
    double closure = 0.0;
    for (double g : net.closure_gaps) closure = std::max(closure, g);
    c.require(closure <= 1e-6, "closure " + fmt(closure));
    const int rank = torus::fullness_rank(torus::point_cloud(net));
    c.require(rank == 3, "fullness rank " + std::to_string(rank));
}

// A7: fully discrete torus on the 24-gon.
void a7(Criterion& c) {
    const loops::DiscreteLoop poly = loops::make_discrete_circle(3, 24, 0.0);
    std::vector<darboux::DarbouxTransform> layer;
    layer.push_back(darboux::move_transform_off_plane(
        poly, darboux::closed_darboux_discrete(poly, 3.0, 0), 3, M_PI / 4));
    layer.push_back(darboux::move_transform_off_plane(
        poly, darboux::closed_darboux_discrete(poly, 8.0, 0), 3, -M_PI / 4));

    // Dual-route agreement for both parameters.
    for (int i = 0; i < 2; ++i) {
        const auto prop =
            darboux::cross_ratio_propagate(poly, layer[i].mu, layer[i].result.row(0));
        const double agree =
            (prop.propagated.topRows(24) - layer[i].result).rowwise().norm().maxCoeff();
        c.require(agree <= 1e-8, "dual route mu=" + fmt(layer[i].mu) + " " + fmt(agree));
    }

    const bianchi::BianchiCube cube =
        bianchi::build_cube(poly.vertices, poly.edge_polarization, false, layer);
    const torus::TorusNet net =
        torus::extract_torus(cube, torus::default_walk_2torus(2), false);

    const auto quads = verify::check_quads_concircular(net);
    c.require(quads.value <= 1e-9, "quad concircularity " + fmt(quads.value));
    const auto fact = verify::check_cr_factorization(net);
    c.require(fact.pass, "cross-ratio law/factorization " + fmt(fact.value));

    // Alternating product around every vertex, directly.
    double alt_worst = 0.0;
    for (int e = 0; e < 4; ++e) {
        for (int j = 0; j < 24; ++j) {
            const int jm = (j + 23) % 24;
            auto face = [&](int edge, int jj) {
                const int p = edge, q = (edge + 1) % 4;
                return moebius::cross_ratio(net.loops[p].row(jj),
                                            net.loops[p].row((jj + 1) % 24),
                                            net.loops[q].row(jj),
                                            net.loops[q].row((jj + 1) % 24))
                    .value;
            };
            const double prod =
                face(e, jm) / face((e + 1) % 4, jm) * face((e + 1) % 4, j) / face(e, j);
            alt_worst = std::max(alt_worst, std::abs(prod - 1.0));
        }
    }
    c.require(alt_worst <= 1e-10, "alternating product " + fmt(alt_worst));

    const int rank = torus::fullness_rank(torus::point_cloud(net));
    c.require(rank == 3, "fullness rank " + std::to_string(rank));
}

// A8: theorem instance at (k, n) = (3, 4).
void a8(Criterion& c) {
    const loops::SmoothLoop circle = loops::make_circle(4, 1024, 1.0);
    std::vector<darboux::DarbouxTransform> layer;
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 3.0, 0), 3, M_PI / 4));
    layer.push_back(darboux::move_transform_off_plane(
        circle, darboux::closed_darboux_smooth(circle, 8.0, 0), 4, M_PI / 8));
    const bianchi::BianchiCube cube =
        bianchi::build_cube(circle.samples, circle.polarization, true, layer);
    const torus::GridMap grid = torus::product_grid_map(2, 3);
    const torus::TorusNet net = torus::extract_torus(cube, grid, true);

    const auto reports = verify::check_theorem_instance(net, 4, 3);
    for (const auto& r : reports)
        c.require(r.pass, r.name + " " + fmt(r.value));
    const int rank = torus::fullness_rank(torus::point_cloud(net));
    c.require(rank == 4, "fullness rank " + std::to_string(rank));
}

// A9: resonance scan over [0.1, 40]. The refined locations are checked
// against the closed-form lattice (k^2 - 1)/4 from the rotating-frame
// reduction, recorded as regression goldens.
void a9(Criterion& c) {
    const loops::LoopLift L = loops::lift_loop(loops::make_circle(3, 256, 1.0));
    darboux::ScanOptions opts;
    const darboux::ResonanceReport rep = darboux::resonance_scan(L, 0.1, 40.0, 2000, opts);
    c.require(rep.points.size() >= 3,
              "found " + std::to_string(rep.points.size()) + " resonances");

    for (const auto& pt : rep.points) {
        c.require(pt.defect <= 1e-6, "defect " + fmt(pt.defect) + " at mu " + fmt(pt.mu));
        // Nearest golden lattice point.
        double best = 1e9;
        for (int k = 2; k <= 13; ++k)
            best = std::min(best, std::abs(pt.mu - oracles::circle_resonance_mu(k)));
        c.require(best <= 1e-6, "golden deviation " + fmt(best) + " at mu " + fmt(pt.mu));
    }

    const loops::SmoothLoop circle = loops::make_circle(3, 256, 1.0);
    oracles::Rng rng(909);
    for (std::size_t i = 0; i < rep.points.size(); i += 3) {
        const Vec x = oracles::gaussian_point(3, rng);
        const auto t = darboux::darboux_smooth_from_vector(circle, rep.points[i].mu,
                                                           lorentz::lift(x));
        c.require(t.closure_gap <= 1e-5,
                  "random-init closure " + fmt(t.closure_gap) + " at mu " +
                      fmt(rep.points[i].mu));
    }
}

// A10: byte-identical CLI outputs for identical configs.
void a10(Criterion& c) {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "isotorus_acceptance_a10";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "fig2.cfg";
    {
        std::ofstream f(cfg);
        f << "n = 3\nmode = smooth\nsamples = 1024\npolarization = 1.0\n"
          << "[transform]\nmu = 3\noff_plane_axis = 3\nangle = 0.7853981633974483\n"
          << "[transform]\nmu = 8\noff_plane_axis = 3\nangle = -0.7853981633974483\n"
          << "[grid]\ntype = default_2torus\n";
    }
    auto run_cli = [&](const std::string& out) {
        const std::string cmd = std::string(ISOTORUS_CLI_PATH) + " torus --config " +
                                cfg.string() + " --out " + (dir / out).string() +
                                " > /dev/null 2>&1";
        return std::system(cmd.c_str());
    };
    const int rc1 = run_cli("run1");
    const int rc2 = run_cli("run2");
    c.require(rc1 == 0, "first run exit " + std::to_string(rc1));
    c.require(rc2 == 0, "second run exit " + std::to_string(rc2));

    auto slurp = [](const fs::path& p) {
        std::ifstream f(p, std::ios::binary);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    };
    for (const char* name : {"mesh.obj", "report.txt"}) {
        const std::string one = slurp(dir / "run1" / name);
        const std::string two = slurp(dir / "run2" / name);
        c.require(!one.empty() && one == two, std::string(name) + " byte-identical");
    }
}

}  // namespace

int main() {
    run("A1", "lift identities", a1);
    run("A2", "cross-ratio oracle", a2);
    run("A3", "transport quality", a3);
    run("A4", "closed transforms", a4);
    run("A5", "permutability", a5);
    run("A6", "Fig. 2 torus reproduction", a6);
    run("A7", "fully discrete torus", a7);
    run("A8", "theorem instance (k,n) = (3,4)", a8);
    run("A9", "resonance scan", a9);
    run("A10", "determinism", a10);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
