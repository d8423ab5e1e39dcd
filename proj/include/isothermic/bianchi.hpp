#pragma once

#include "isothermic/darboux.hpp"
#include "isothermic/parallel.hpp"
#include "isothermic/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace isothermic::bianchi {

using CubeIndex = std::uint32_t;  // subset of directions {1..N} as a bitmask

// Result of the samplewise permutability solve.
struct PermuteResult {
    Mat loop;                          // same sample count as the inputs
    std::vector<int> continued_samples;  // filled by neighbor continuation
};

// Common Darboux transform of y through y1 (parameter nu1) and y2 (parameter
// nu2), determined samplewise by the cross-ratio equation. In the calibrated
// orientation the solved quad satisfies cr(y, y1, y12, y2) = nu2/nu1 for
// smooth loops, equivalently cr(y, y2, y12, y1) = nu1/nu2; that makes the
// edge (y1, y12) a Darboux pair with parameter nu2 and (y2, y12) one with
// nu1. Discrete loops pass their edge polarization: with the quad law
// cr = mu/m the matching static target becomes
//   nu2 (m - nu1) / (nu1 (m - nu2)),
// which recovers the smooth ratio as m -> infinity. Isolated degenerate
// samples (y1 = y2 etc.) are filled by continuation from their cyclic
// neighbors and reported.
PermuteResult permute(const Mat& y, const Mat& y1, const Mat& y2, double nu1, double nu2,
                      const Vec* edge_polarization = nullptr,
                      ExecPolicy policy = ExecPolicy::Serial);

struct BianchiCube {
    int directions = 0;             // N
    bool smooth = true;
    std::vector<double> mus;        // per direction, pairwise distinct nonzero
    Vec polarization;               // loop-direction polarization (samples/edges)
    std::vector<Mat> loops;         // 2^N sample matrices indexed by bitmask
    std::vector<double> closure_gaps;       // recorded from construction
    std::vector<std::string> provenance;    // per vertex
    double max_consistency_dev = 0.0;       // worst parent-triple disagreement

    int vertex_count() const { return 1 << directions; }
    const Mat& loop(CubeIndex s) const { return loops[s]; }
};

struct BuildOptions {
    ExecPolicy policy = ExecPolicy::Parallel;
    bool check_consistency = true;   // compare alternative parent triples
    double consistency_fail = 1e-6;  // hard failure threshold
    Tolerances tol;
};

// Fills all 2^N cube vertices from the base loop and N first-layer closed
// transforms, rank by rank. Vertices with several available parent triples
// use the lexicographically smallest direction pair and verify the others
// agree.
BianchiCube build_cube(const Mat& base_samples, const Vec& polarization, bool smooth,
                       const std::vector<darboux::DarbouxTransform>& first_layer,
                       BuildOptions opts = {});

struct EdgeReport {
    CubeIndex from = 0;
    int direction = 0;   // 1-based r
    double mu = 0.0;
    double max_quad_defect = 0.0;       // discrete: concircularity
    double max_law_dev = 0.0;           // |cr - mu/m| (discrete) or |cr_inf - mu/m| (smooth)
    double max_tangency = 0.0;          // smooth only
    bool pass = false;
};

// Checks the Darboux relation along the cube edge (S, S u {r}).
EdgeReport verify_cube_edge(const BianchiCube& cube, CubeIndex s, int r,
                            const Tolerances& tol = {});

}  // namespace isothermic::bianchi
