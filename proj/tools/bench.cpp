// Serial vs OpenMP timing for the data-parallel kernels: the resonance-scan
// grid, cube construction, and the verification sweeps. Both paths run the
// same code through ExecPolicy and must produce identical results; this tool
// reports wall-clock ratios.
#include "isothermic/bianchi.hpp"
#include "isothermic/darboux.hpp"
#include "isothermic/loops.hpp"
#include "isothermic/pipeline.hpp"
#include "isothermic/verify.hpp"

#include <chrono>
#include <cstdio>
#include <string>

using namespace isothermic;

namespace {

template <typename Fn>
double time_of(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void row(const char* name, double serial, double parallel, bool identical) {
    std::printf("%-22s %10.3fs %10.3fs %8.2fx   results %s\n", name, serial, parallel,
                serial / parallel, identical ? "identical" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
    const bool full = argc > 1 && std::string(argv[1]) == "--full";
    const int S = full ? 512 : 256;
    const int grid = full ? 800 : 200;

    const loops::SmoothLoop circle = loops::make_circle(3, S, 1.0);
    const loops::LoopLift lift = loops::lift_loop(circle);

    // Resonance scan.
    darboux::ResonanceReport serial_scan, parallel_scan;
    darboux::ScanOptions so;
    const double t_scan_s = time_of([&] {
        so.policy = ExecPolicy::Serial;
        serial_scan = darboux::resonance_scan(lift, 0.1, full ? 40.0 : 10.0, grid, so);
    });
    const double t_scan_p = time_of([&] {
        so.policy = ExecPolicy::Parallel;
        parallel_scan = darboux::resonance_scan(lift, 0.1, full ? 40.0 : 10.0, grid, so);
    });
    bool scan_same = serial_scan.points.size() == parallel_scan.points.size() &&
                     (serial_scan.grid_defect - parallel_scan.grid_defect).cwiseAbs().maxCoeff() == 0.0;
    for (std::size_t i = 0; scan_same && i < serial_scan.points.size(); ++i)
        scan_same = serial_scan.points[i].mu == parallel_scan.points[i].mu;

    // Cube build over three directions.
    darboux::TransformOptions topts;
    std::vector<darboux::DarbouxTransform> layer;
    for (double mu : {3.0, 8.0, 13.0})
        layer.push_back(darboux::closed_darboux_smooth(circle, mu, 0, topts));
    bianchi::BianchiCube cube_s, cube_p;
    bianchi::BuildOptions bo;
    const double t_cube_s = time_of([&] {
        bo.policy = ExecPolicy::Serial;
        cube_s = bianchi::build_cube(circle.samples, circle.polarization, true, layer, bo);
    });
    const double t_cube_p = time_of([&] {
        bo.policy = ExecPolicy::Parallel;
        cube_p = bianchi::build_cube(circle.samples, circle.polarization, true, layer, bo);
    });
    bool cube_same = true;
    for (int m = 0; m < cube_s.vertex_count(); ++m)
        cube_same = cube_same && (cube_s.loops[m] - cube_p.loops[m]).cwiseAbs().maxCoeff() == 0.0;

    // Verification sweep on the default 2-torus.
    const torus::GridMap gm = torus::default_walk_2torus(3);
    const torus::TorusNet net = torus::extract_torus(cube_s, gm, true);
    std::vector<verify::CheckReport> rep_s, rep_p;
    const double t_ver_s =
        time_of([&] { rep_s = verify::check_semidiscrete_ribbons(net, {}, ExecPolicy::Serial); });
    const double t_ver_p =
        time_of([&] { rep_p = verify::check_semidiscrete_ribbons(net, {}, ExecPolicy::Parallel); });
    bool ver_same = rep_s.size() == rep_p.size();
    for (std::size_t i = 0; ver_same && i < rep_s.size(); ++i)
        ver_same = rep_s[i].value == rep_p[i].value;

    std::printf("kernel                    serial    parallel   speedup\n");
    row("resonance scan", t_scan_s, t_scan_p, scan_same);
    row("bianchi cube (N=3)", t_cube_s, t_cube_p, cube_same);
    row("ribbon verification", t_ver_s, t_ver_p, ver_same);
    return (scan_same && cube_same && ver_same) ? 0 : 1;
}
