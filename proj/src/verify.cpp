#include "isothermic/verify.hpp"

#include "isothermic/lorentz.hpp"
#include "isothermic/moebius.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

namespace isothermic::verify {

namespace {

struct GridEdge {
    int from = 0;       // flat grid index
    int to = 0;
    int direction = 0;  // cube direction r (1-based)
};

// Unordered grid edges, each once (length-2 grid circles would otherwise
// repeat their single geometric edge).
std::vector<GridEdge> grid_edges(const torus::TorusNet& net) {
    std::vector<GridEdge> edges;
    const auto& g = net.grid;
    for (int p = 0; p < g.point_count(); ++p) {
        for (int d = 0; d < g.dims(); ++d) {
            const int q = g.neighbor(p, d);
            if (g.shape[d] == 2 && q < p) continue;  // wrap duplicates the same pair
            edges.push_back({p, q, net.edge_direction[p * g.dims() + d]});
        }
    }
    return edges;
}

double concircularity_defect(const Vec& a, const Vec& b, const Vec& c, const Vec& d) {
    Mat L(4, a.size() + 2);
    L.row(0) = lorentz::lift(a);
    L.row(1) = lorentz::lift(b);
    L.row(2) = lorentz::lift(c);
    L.row(3) = lorentz::lift(d);
    Eigen::JacobiSVD<Mat> svd(L);
    return svd.singularValues()(3) / svd.singularValues()(0);
}

Vec fd_tangent(const Mat& samples, int i) {
    const int S = static_cast<int>(samples.rows());
    auto row = [&](int k) { return Vec(samples.row(((k % S) + S) % S)); };
    Vec t = (row(i - 2) - 8.0 * row(i - 1) + 8.0 * row(i + 1) - row(i + 2)) / 12.0;
    return t / t.norm();
}

std::string loc(const std::string& what, int a, int b) {
    return what + "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

}  // namespace

CheckReport check_quads_concircular(const torus::TorusNet& net, const Tolerances& tol,
                                    ExecPolicy policy) {
    if (net.semi_discrete)
        throw ConfigError("check_quads_concircular: net has no discrete-discrete 2-cells");
    CheckReport rep;
    rep.name = "quads_concircular";
    rep.scope = "quad";
    rep.tol = tol.quad_concircularity;

    const auto edges = grid_edges(net);
    const int S = net.samples;
    const std::int64_t total = static_cast<std::int64_t>(edges.size()) * S;
    std::vector<double> defect(total, 0.0);
    std::vector<char> distinct(total, 1);
    for_each_index(total, policy, [&](std::int64_t idx) {
        const GridEdge& e = edges[idx / S];
        const int j = static_cast<int>(idx % S);
        const int j1 = (j + 1) % S;
        const Vec a = net.loops[e.from].row(j), b = net.loops[e.from].row(j1);
        const Vec c = net.loops[e.to].row(j1), d = net.loops[e.to].row(j);
        defect[idx] = concircularity_defect(a, b, c, d);
        const double scale = (a - c).norm() + (b - d).norm();
        if ((a - b).norm() < 1e-12 * scale || (b - c).norm() < 1e-12 * scale ||
            (c - d).norm() < 1e-12 * scale || (d - a).norm() < 1e-12 * scale ||
            (a - c).norm() < 1e-12 * scale || (b - d).norm() < 1e-12 * scale)
            distinct[idx] = 0;
    });

    // Static quads between grid directions at a fixed sample (k >= 3 nets).
    std::vector<double> static_defect;
    const auto& g = net.grid;
    for (int p = 0; p < g.point_count(); ++p) {
        for (int a = 0; a < g.dims(); ++a) {
            for (int b = a + 1; b < g.dims(); ++b) {
                const int pa = g.neighbor(p, a), pb = g.neighbor(p, b);
                const int pab = g.neighbor(pa, b);
                for (int j = 0; j < S; ++j) {
                    static_defect.push_back(
                        concircularity_defect(net.loops[p].row(j), net.loops[pa].row(j),
                                              net.loops[pab].row(j), net.loops[pb].row(j)));
                }
            }
        }
    }

    rep.value = 0.0;
    bool all_distinct = true;
    for (std::int64_t i = 0; i < total; ++i) {
        if (defect[i] > rep.value) {
            rep.value = defect[i];
            const GridEdge& e = edges[i / S];
            rep.worst_location = loc("edge" + std::to_string(e.from) + "-quad", e.direction,
                                     static_cast<int>(i % S));
        }
        all_distinct = all_distinct && distinct[i];
    }
    for (double d : static_defect) rep.value = std::max(rep.value, d);
    rep.pass = rep.value <= rep.tol && all_distinct;
    if (!all_distinct) rep.worst_location += " [coincident vertices]";
    return rep;
}

CheckReport check_cr_factorization(const torus::TorusNet& net, const Tolerances& tol,
                                   ExecPolicy policy) {
    if (net.semi_discrete)
        throw ConfigError("check_cr_factorization: net has no discrete-discrete 2-cells");
    CheckReport rep;
    rep.name = "cr_factorization";
    rep.scope = "quad";
    rep.tol = tol.algebraic * 100.0;  // 1e-8: alternating products and the fit

    const auto edges = grid_edges(net);
    const int S = net.samples;
    const int E = static_cast<int>(edges.size());
    Mat cr(E, S);  // face cross ratios, crossed orientation: value mu_r / m_j
    for_each_index(static_cast<std::int64_t>(E) * S, policy, [&](std::int64_t idx) {
        const GridEdge& e = edges[idx / S];
        const int j = static_cast<int>(idx % S);
        const int j1 = (j + 1) % S;
        cr(static_cast<int>(idx / S), j) =
            moebius::cross_ratio(net.loops[e.from].row(j), net.loops[e.from].row(j1),
                                 net.loops[e.to].row(j), net.loops[e.to].row(j1))
                .value;
    });

    double worst = 0.0;
    std::string where;
    // (a) Alternating product around each net vertex: for the two grid edges
    // e1, e2 meeting at a grid vertex along one grid direction, the four
    // incident faces give f(j-1,e1) f(j-1,e2)^-1 f(j,e2) f(j,e1)^-1 = 1.
    const auto& g = net.grid;
    for (int p = 0; p < g.point_count(); ++p) {
        for (int d = 0; d < g.dims(); ++d) {
            // Edges meeting at grid vertex p along direction d.
            const int pm_flat = [&] {
                auto c = g.coord_of(p);
                c[d] = (c[d] - 1 + g.shape[d]) % g.shape[d];
                return g.flat_index(c);
            }();
            int e1 = -1, e2 = -1;
            for (int e = 0; e < E; ++e) {
                if ((edges[e].from == pm_flat && edges[e].to == p) ||
                    (edges[e].from == p && edges[e].to == pm_flat))
                    e1 = e;
                if (edges[e].from == p && g.neighbor(p, d) == edges[e].to) e2 = e;
            }
            if (e1 < 0 || e2 < 0 || e1 == e2) continue;
            for (int j = 0; j < S; ++j) {
                const int jm = (j - 1 + S) % S;
                const double prod =
                    cr(e1, jm) / cr(e2, jm) * cr(e2, j) / cr(e1, j);
                const double dev = std::abs(prod - 1.0);
                if (dev > worst) {
                    worst = dev;
                    where = loc("vertex", p, j);
                }
            }
        }
    }

    // (b) rank-one factorization fit in log space: log|cr(e,j)| = B_e - A_j.
    Vec A = Vec::Zero(S), B = Vec::Zero(E);
    Mat L(E, S);
    for (int e = 0; e < E; ++e)
        for (int j = 0; j < S; ++j) L(e, j) = std::log(std::abs(cr(e, j)));
    for (int sweep = 0; sweep < 2; ++sweep) {
        for (int e = 0; e < E; ++e) B(e) = (L.row(e).transpose() + A).mean();
        for (int j = 0; j < S; ++j) A(j) = (B - L.col(j)).mean();
    }
    for (int e = 0; e < E; ++e) {
        for (int j = 0; j < S; ++j) {
            const double dev = std::abs(L(e, j) - (B(e) - A(j)));
            if (dev > worst) {
                worst = dev;
                where = loc("fit", e, j);
            }
        }
    }

    // Sign pattern: sign(cr(e,j)) must split as sigma_e * s_j, i.e. the
    // negativity of any face is the XOR of its row, column and corner faces.
    bool signs_ok = true;
    for (int e = 0; e < E && signs_ok; ++e) {
        for (int j = 0; j < S && signs_ok; ++j) {
            const bool expected =
                ((cr(0, j) < 0) != (cr(e, 0) < 0)) != (cr(0, 0) < 0);
            if ((cr(e, j) < 0) != expected) signs_ok = false;
        }
    }

    // (c) the face law itself: cr(e, j) = mu_r / m_j, at the tighter
    // algebraic tolerance.
    double law = 0.0;
    std::string law_where;
    for (int e = 0; e < E; ++e) {
        const double mu = net.mus[edges[e].direction - 1];
        for (int j = 0; j < S; ++j) {
            const double dev = std::abs(cr(e, j) - mu / net.polarization(j));
            if (dev > law) {
                law = dev;
                law_where = loc("face", e, j);
            }
        }
    }

    rep.value = std::max(worst, law);
    rep.worst_location = law > worst ? law_where : where;
    rep.pass = worst <= rep.tol && law <= tol.algebraic && signs_ok;
    if (!signs_ok) rep.worst_location += " [sign pattern]";
    return rep;
}

std::vector<CheckReport> check_semidiscrete_ribbons(const torus::TorusNet& net,
                                                    const Tolerances& tol,
                                                    ExecPolicy policy) {
    if (!net.semi_discrete)
        throw ConfigError("check_semidiscrete_ribbons: net is fully discrete");
    const auto edges = grid_edges(net);
    const int S = net.samples;
    const int E = static_cast<int>(edges.size());

    CheckReport tangency;
    tangency.name = "ribbon_tangency";
    tangency.scope = "ribbon";
    tangency.tol = tol.tangency;
    CheckReport law;
    law.name = "ribbon_infinitesimal_cr";
    law.scope = "ribbon";
    law.tol = tol.limit;
    CheckReport ratio;
    ratio.name = "ribbon_cr_ratio_constancy";
    ratio.scope = "global";
    ratio.tol = tol.limit;

    Mat icr(E, S);
    std::vector<double> tang(static_cast<std::size_t>(E) * S, 0.0);
    for_each_index(static_cast<std::int64_t>(E) * S, policy, [&](std::int64_t idx) {
        const int e = static_cast<int>(idx / S);
        const int i = static_cast<int>(idx % S);
        const Mat& A = net.loops[edges[e].from];
        const Mat& Bm = net.loops[edges[e].to];
        tang[idx] = moebius::ribbon_tangency_defect(A.row(i), fd_tangent(A, i), Bm.row(i),
                                                    fd_tangent(Bm, i));
        icr(e, i) = moebius::infinitesimal_cross_ratio(A, Bm, i, 2).value;
    });

    for (int e = 0; e < E; ++e) {
        const double mu = net.mus[edges[e].direction - 1];
        for (int i = 0; i < S; ++i) {
            const double td = tang[static_cast<std::size_t>(e) * S + i];
            if (td > tangency.value) {
                tangency.value = td;
                tangency.worst_location = loc("ribbon", e, i);
            }
            const double dev = std::abs(icr(e, i) - mu / net.polarization(i));
            if (dev > law.value) {
                law.value = dev;
                law.worst_location = loc("ribbon", e, i);
            }
        }
    }
    tangency.pass = tangency.value <= tangency.tol;
    law.pass = law.value <= law.tol;

    // Cross-ribbon factorization: the ratio of two ribbons' infinitesimal
    // cross ratios must not depend on t.
    ratio.value = 0.0;
    for (int e = 1; e < E; ++e) {
        const double expect = net.mus[edges[e].direction - 1] /
                              net.mus[edges[0].direction - 1];
        for (int i = 0; i < S; ++i) {
            const double r = icr(e, i) / icr(0, i);
            const double dev = std::abs(r - expect) / std::abs(expect);
            if (dev > ratio.value) {
                ratio.value = dev;
                ratio.worst_location = loc("ribbons", e, i);
            }
        }
    }
    ratio.pass = ratio.value <= ratio.tol;
    return {tangency, law, ratio};
}

std::vector<CheckReport> check_theorem_instance(const torus::TorusNet& net, int n, int k,
                                                const Tolerances& tol, ExecPolicy policy) {
    std::vector<CheckReport> out;

    CheckReport dim;
    dim.name = "dimension_audit";
    dim.scope = "global";
    dim.tol = 0.0;
    dim.value = std::abs((net.grid.dims() + 1) - k);
    dim.pass = net.grid.dims() + 1 == k && net.ambient_dim == n;
    out.push_back(dim);

    CheckReport closure;
    closure.name = "closure";
    closure.scope = "global";
    closure.tol = net.semi_discrete ? tol.closure : tol.closure_discrete;
    closure.value = 0.0;
    for (std::size_t p = 0; p < net.closure_gaps.size(); ++p) {
        if (net.closure_gaps[p] > closure.value) {
            closure.value = net.closure_gaps[p];
            closure.worst_location = "grid_point(" + std::to_string(p) + ")";
        }
    }
    closure.pass = closure.value <= closure.tol;
    out.push_back(closure);

    if (net.semi_discrete) {
        const auto ribbons = check_semidiscrete_ribbons(net, tol, policy);
        out.insert(out.end(), ribbons.begin(), ribbons.end());
    } else {
        out.push_back(check_quads_concircular(net, tol, policy));
        out.push_back(check_cr_factorization(net, tol, policy));
    }

    CheckReport full;
    full.name = "fullness_rank";
    full.scope = "global";
    full.tol = 0.0;
    const int rank = torus::fullness_rank(torus::point_cloud(net), tol.rank_rel);
    full.value = rank;
    full.pass = rank == n;
    full.worst_location = "rank=" + std::to_string(rank) + " n=" + std::to_string(n);
    out.push_back(full);
    return out;
}

bool all_pass(const std::vector<CheckReport>& reports) {
    for (const auto& r : reports)
        if (!r.pass) return false;
    return true;
}

std::string format_report(const std::vector<CheckReport>& reports, int precision) {
    std::string out;
    char buf[128];
    int failed = 0;
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof(buf), "check=%s scope=%s value=%.*e tol=%.*e pass=%d\n",
                      r.name.c_str(), r.scope.c_str(), precision, r.value, precision, r.tol,
                      r.pass ? 1 : 0);
        out += buf;
        if (!r.pass) ++failed;
    }
    std::snprintf(buf, sizeof(buf), "summary checks=%zu failed=%d pass=%d\n", reports.size(),
                  failed, failed == 0 ? 1 : 0);
    out += buf;
    return out;
}

void write_report(const std::string& path, const std::vector<CheckReport>& reports,
                  int precision) {
    std::ofstream f(path);
    if (!f) throw ConfigError("write_report: cannot open " + path);
    f << format_report(reports, precision);
}

}  // namespace isothermic::verify
