#include "isothermic/bianchi.hpp"

#include "isothermic/moebius.hpp"

#include <bit>
#include <cmath>

namespace isothermic::bianchi {

PermuteResult permute(const Mat& y, const Mat& y1, const Mat& y2, double nu1, double nu2,
                      const Vec* edge_polarization, ExecPolicy policy) {
    if (nu1 == nu2 || nu1 == 0.0 || nu2 == 0.0)
        throw EqualSpectralParameters("permute: parameters must be distinct and nonzero");
    const int S = static_cast<int>(y.rows());
    if (y1.rows() != S || y2.rows() != S)
        throw DimensionMismatch("permute: sample counts differ");
    if (edge_polarization && edge_polarization->size() != S)
        throw DimensionMismatch("permute: polarization size mismatch");

    auto target_at = [&](int i) {
        if (!edge_polarization) return nu2 / nu1;
        const double m = (*edge_polarization)(i);
        return nu2 * (m - nu1) / (nu1 * (m - nu2));
    };

    PermuteResult out;
    out.loop = Mat(S, y.cols());
    std::vector<char> ok(S, 0);
    for_each_index(S, policy, [&](std::int64_t i) {
        try {
            out.loop.row(i) =
                moebius::solve_fourth_point(y.row(i), y1.row(i), y2.row(i), target_at(i));
            ok[i] = 1;
        } catch (const NumericalError&) {
            ok[i] = 0;
        }
    });

    // Isolated degeneracies: continue linearly from the nearest valid cyclic
    // neighbors.
    for (int i = 0; i < S; ++i) {
        if (ok[i]) continue;
        int prev = -1, next = -1;
        for (int k = 1; k < S; ++k) {
            const int cand = ((i - k) % S + S) % S;
            if (ok[cand]) { prev = cand; break; }
        }
        for (int k = 1; k < S; ++k) {
            const int cand = (i + k) % S;
            if (ok[cand]) { next = cand; break; }
        }
        if (prev < 0 || next < 0)
            throw DegenerateInput("permute: no valid samples to continue from");
        out.loop.row(i) = 0.5 * (out.loop.row(prev) + out.loop.row(next));
        out.continued_samples.push_back(i);
    }
    return out;
}

BianchiCube build_cube(const Mat& base_samples, const Vec& polarization, bool smooth,
                       const std::vector<darboux::DarbouxTransform>& first_layer,
                       BuildOptions opts) {
    const int N = static_cast<int>(first_layer.size());
    if (N < 1) throw ConfigError("build_cube: need at least one first-layer transform");
    if (N > 24) throw ConfigError("build_cube: more than 24 directions");

    BianchiCube cube;
    cube.directions = N;
    cube.smooth = smooth;
    cube.polarization = polarization;
    cube.loops.assign(1u << N, Mat());
    cube.closure_gaps.assign(1u << N, 0.0);
    cube.provenance.assign(1u << N, "");

    for (int r = 0; r < N; ++r) {
        cube.mus.push_back(first_layer[r].mu);
        for (int s = 0; s < r; ++s)
            if (first_layer[r].mu == first_layer[s].mu)
                throw EqualSpectralParameters("build_cube: duplicate spectral parameter " +
                                              std::to_string(first_layer[r].mu));
        if (first_layer[r].mu == 0.0)
            throw ConfigError("build_cube: zero spectral parameter");
        if (static_cast<int>(first_layer[r].result.rows()) !=
            static_cast<int>(base_samples.rows()))
            throw DimensionMismatch("build_cube: first-layer sample count mismatch");
    }

    cube.loops[0] = base_samples;
    cube.provenance[0] = "base";
    for (int r = 0; r < N; ++r) {
        cube.loops[1u << r] = first_layer[r].result;
        cube.closure_gaps[1u << r] = first_layer[r].closure_gap;
        cube.provenance[1u << r] = "transform mu=" + std::to_string(first_layer[r].mu);
    }

    // Fill by increasing subset size. Vertices within a rank are independent.
    for (int rank = 2; rank <= N; ++rank) {
        std::vector<CubeIndex> masks;
        for (CubeIndex m = 0; m < (1u << N); ++m)
            if (std::popcount(m) == rank) masks.push_back(m);

        std::vector<double> devs(masks.size(), 0.0);
        for_each_index(static_cast<std::int64_t>(masks.size()), opts.policy,
                       [&](std::int64_t mi) {
            const CubeIndex mask = masks[mi];
            // Lexicographically smallest (r, s) pair of directions in the mask.
            std::vector<int> dirs;
            for (int d = 0; d < N; ++d)
                if (mask & (1u << d)) dirs.push_back(d);
            const int r = dirs[0], s = dirs[1];
            const CubeIndex base = mask & ~(1u << r) & ~(1u << s);
            const Vec* pol = smooth ? nullptr : &cube.polarization;
            const PermuteResult primary =
                permute(cube.loops[base], cube.loops[base | (1u << r)],
                        cube.loops[base | (1u << s)], cube.mus[r], cube.mus[s], pol,
                        ExecPolicy::Serial);
            cube.loops[mask] = primary.loop;
            cube.provenance[mask] = "permute r=" + std::to_string(r + 1) +
                                    " s=" + std::to_string(s + 1);

            if (opts.check_consistency) {
                double worst = 0.0;
                for (std::size_t a = 0; a < dirs.size(); ++a) {
                    for (std::size_t b = a + 1; b < dirs.size(); ++b) {
                        if (dirs[a] == r && dirs[b] == s) continue;
                        const int ra = dirs[a], sb = dirs[b];
                        const CubeIndex alt = mask & ~(1u << ra) & ~(1u << sb);
                        const PermuteResult other =
                            permute(cube.loops[alt], cube.loops[alt | (1u << ra)],
                                    cube.loops[alt | (1u << sb)], cube.mus[ra],
                                    cube.mus[sb], pol, ExecPolicy::Serial);
                        worst = std::max(
                            worst, (other.loop - primary.loop).rowwise().norm().maxCoeff());
                    }
                }
                devs[mi] = worst;
            }
        });
        for (std::size_t mi = 0; mi < masks.size(); ++mi) {
            cube.max_consistency_dev = std::max(cube.max_consistency_dev, devs[mi]);
            if (devs[mi] > opts.consistency_fail)
                throw CubeInconsistency("build_cube: parent triples disagree by " +
                                        std::to_string(devs[mi]) + " at vertex mask " +
                                        std::to_string(masks[mi]));
        }
    }
    return cube;
}

namespace {

Vec fd_tangent(const Mat& samples, int i) {
    const int S = static_cast<int>(samples.rows());
    auto row = [&](int k) { return Vec(samples.row(((k % S) + S) % S)); };
    Vec t = (row(i - 2) - 8.0 * row(i - 1) + 8.0 * row(i + 1) - row(i + 2)) / 12.0;
    return t / t.norm();
}

}  // namespace

EdgeReport verify_cube_edge(const BianchiCube& cube, CubeIndex s, int r,
                            const Tolerances& tol) {
    EdgeReport rep;
    rep.from = s;
    rep.direction = r;
    const int d = r - 1;
    if (d < 0 || d >= cube.directions || (s & (1u << d)))
        throw ConfigError("verify_cube_edge: bad edge");
    rep.mu = cube.mus[d];
    const Mat& A = cube.loops[s];
    const Mat& B = cube.loops[s | (1u << d)];
    const int S = static_cast<int>(A.rows());

    if (cube.smooth) {
        for (int i = 0; i < S; ++i) {
            const Vec u = fd_tangent(A, i), uh = fd_tangent(B, i);
            rep.max_tangency = std::max(
                rep.max_tangency,
                moebius::ribbon_tangency_defect(A.row(i), u, B.row(i), uh));
            const auto icr = moebius::infinitesimal_cross_ratio(A, B, i, 2);
            rep.max_law_dev = std::max(
                rep.max_law_dev, std::abs(icr.value - rep.mu / cube.polarization(i)));
        }
        rep.pass = rep.max_tangency <= tol.tangency && rep.max_law_dev <= tol.limit;
    } else {
        for (int j = 0; j < S; ++j) {
            const int j1 = (j + 1) % S;
            const auto cr =
                moebius::cross_ratio(A.row(j), A.row(j1), B.row(j), B.row(j1));
            rep.max_quad_defect = std::max(rep.max_quad_defect, cr.concircularity_defect);
            rep.max_law_dev = std::max(
                rep.max_law_dev, std::abs(cr.value - rep.mu / cube.polarization(j)));
        }
        rep.pass = rep.max_quad_defect <= tol.quad_concircularity &&
                   rep.max_law_dev <= tol.algebraic;
    }
    return rep;
}

}  // namespace isothermic::bianchi
