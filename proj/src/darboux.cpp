#include "isothermic/darboux.hpp"

#include "isothermic/moebius.hpp"
#include "isothermic/transport.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace isothermic::darboux {

using lorentz::inner;
using lorentz::inner_with_q;
using lorentz::lift;

namespace {

// Project a section row, flagging samples that pass through infinity instead
// of aborting. Flagged samples get the direction-clamped projection.
Vec project_flagged(const Vec& tau, int i, std::vector<int>& flags) {
    const double c = inner_with_q(tau);
    if (std::abs(c) <= 1e-12 * tau.norm()) {
        flags.push_back(i);
        const double clamped = (c >= 0.0 ? 1.0 : -1.0) * 1e-12 * tau.norm();
        const int N = static_cast<int>(tau.size());
        return (tau / (-clamped)).head(N - 2) / 2.0;
    }
    return lorentz::project(tau);
}

// Force an almost-lightlike vector exactly onto the cone by rescaling its
// timelike component.
Vec snap_lightlike(Vec v) {
    const int N = static_cast<int>(v.size());
    const double s = v.head(N - 1).norm();
    if (s == 0.0) return v;
    v(N - 1) = (v(N - 1) >= 0.0 ? s : -s);
    return v;
}

DarbouxTransform finish_smooth(const loops::SmoothLoop& loop, double mu, const Vec& v0,
                               int substeps, const TransformOptions& opts) {
    const loops::LoopLift lift_data = loops::lift_loop(loop);
    const int S = loop.size();
    const int n = loop.dim();

    DarbouxTransform out;
    out.smooth = true;
    out.mu = mu;
    out.initial_vector = v0;
    out.section = transport::transport_section(lift_data, mu, v0, substeps);

    out.propagated = Mat(S + 1, n);
    for (int i = 0; i <= S; ++i) {
        const Vec tau = out.section.row(i);
        out.propagated.row(i) = project_flagged(tau, i, out.infinity_flags);
        const double ld = std::abs(inner(tau, tau)) / tau.squaredNorm();
        out.max_lightlike_defect = std::max(out.max_lightlike_defect, ld);
        if (i < S) {
            const Vec X = lift_data.X.row(i);
            const double overlap =
                std::abs(inner(tau, X));  // vanishes iff tau is parallel to X
            const Vec xh = out.propagated.row(i);
            const Vec xb = loop.samples.row(i);
            if (overlap <= 1e-10 && (xh - xb).norm() <= 1e-6) out.touch_flags.push_back(i);
        }
    }
    out.result = out.propagated.topRows(S);
    out.closure_gap = loops::closure_gap(out.propagated);
    (void)opts;
    return out;
}

Vec continued_eigenvector(const loops::LoopLift& lift_data, double mu, int eigen_index,
                          const TransformOptions& opts, bool smooth) {
    // Symmetric probe around the resonance; averaging cancels the first-order
    // motion of the eigenvector family in mu.
    const double eps = opts.resonance_probe * std::max(1.0, std::abs(mu));
    auto spectrum_at = [&](double m) {
        if (smooth) {
            const transport::Monodromy P =
                transport::monodromy_smooth(lift_data, m, opts.substeps, opts.gate_tol);
            return lorentz::real_lightlike_eigenvectors(P.map, opts.tol);
        }
        const transport::Monodromy P = transport::monodromy_discrete(lift_data, m);
        return lorentz::real_lightlike_eigenvectors(P.map, opts.tol);
    };
    const lorentz::EigenSpectrum sp = spectrum_at(mu + eps);
    const lorentz::EigenSpectrum sm = spectrum_at(mu - eps);
    if (sp.resonant || sm.resonant || sp.vectors.empty() || sm.vectors.empty())
        throw NoRealLightlikeEigenvector(
            "resonance continuation failed near mu = " + std::to_string(mu));
    if (eigen_index < 0 || eigen_index >= static_cast<int>(sp.vectors.size()))
        throw EigenIndexOutOfRange("eigen_index " + std::to_string(eigen_index));
    Vec a = sp.vectors[eigen_index].vector;
    // Match the partner by direction overlap rather than by index.
    int best = 0;
    double best_ov = -1.0;
    for (int i = 0; i < static_cast<int>(sm.vectors.size()); ++i) {
        const Vec& b = sm.vectors[i].vector;
        const double ov = std::abs(a.dot(b)) / (a.norm() * b.norm());
        if (ov > best_ov) { best_ov = ov; best = i; }
    }
    Vec b = sm.vectors[best].vector;
    if (a.dot(b) < 0.0) b = -b;
    return snap_lightlike(0.5 * (a + b));
}

}  // namespace

DarbouxTransform closed_darboux_smooth(const loops::SmoothLoop& loop, double mu,
                                       int eigen_index, TransformOptions opts) {
    if (mu == 0.0) throw ConfigError("closed_darboux_smooth: mu must be nonzero");
    const loops::LoopLift lift_data = loops::lift_loop(loop);
    const transport::Monodromy P =
        transport::monodromy_smooth(lift_data, mu, opts.substeps, opts.gate_tol);
    const int sub_used = P.steps / loop.size();

    const lorentz::EigenSpectrum spec = lorentz::real_lightlike_eigenvectors(P.map, opts.tol);
    Vec v0;
    double rho = spec.resonance_sign != 0 ? spec.resonance_sign : 1.0;
    bool resonant = spec.resonant;
    if (spec.resonant) {
        v0 = continued_eigenvector(lift_data, mu, eigen_index, opts, true);
    } else {
        if (spec.vectors.empty())
            throw NoRealLightlikeEigenvector("no real lightlike eigenvector at mu = " +
                                             std::to_string(mu));
        if (eigen_index < 0 || eigen_index >= static_cast<int>(spec.vectors.size()))
            throw EigenIndexOutOfRange("eigen_index " + std::to_string(eigen_index) +
                                       " of " + std::to_string(spec.vectors.size()));
        v0 = spec.vectors[eigen_index].vector;
        rho = spec.vectors[eigen_index].eigenvalue;
    }
    DarbouxTransform out = finish_smooth(loop, mu, v0, sub_used, opts);
    out.eigen_index = eigen_index;
    out.eigenvalue = rho;
    out.resonant = resonant;
    return out;
}

DarbouxTransform darboux_smooth_from_vector(const loops::SmoothLoop& loop, double mu,
                                            const Vec& v0, TransformOptions opts) {
    if (mu == 0.0) throw ConfigError("darboux_smooth_from_vector: mu must be nonzero");
    const loops::LoopLift lift_data = loops::lift_loop(loop);
    const transport::Monodromy P =
        transport::monodromy_smooth(lift_data, mu, opts.substeps, opts.gate_tol);
    DarbouxTransform out = finish_smooth(loop, mu, v0, P.steps / loop.size(), opts);
    out.eigen_index = -1;
    return out;
}

namespace {

DarbouxTransform finish_discrete(const loops::DiscreteLoop& loop, double mu, const Vec& v0,
                                 double rho) {
    const loops::LoopLift lift_data = loops::lift_loop(loop);
    const int l = loop.size();
    const int n = loop.dim();
    const int N = n + 2;

    DarbouxTransform out;
    out.smooth = false;
    out.mu = mu;
    out.initial_vector = v0;
    out.eigenvalue = rho;
    out.section = Mat(l + 1, N);

    // Propagate in the numerically stable direction: expanding sections
    // forward, contracting ones backward through the exact Lorentz inverses.
    const bool forward = std::abs(rho) >= 1.0;
    if (forward) {
        Vec tau = v0 / v0.norm();
        out.section.row(0) = tau;
        for (int j = 0; j < l; ++j) {
            tau = transport::discrete_edge_connection(lift_data, j, mu) * tau;
            tau /= tau.norm();
            out.section.row(j + 1) = tau;
        }
    } else {
        Vec tau = v0 / v0.norm();
        out.section.row(l) = tau;
        for (int j = l - 1; j >= 0; --j) {
            tau = lorentz::lorentz_inverse(
                      transport::discrete_edge_connection(lift_data, j, mu)) *
                  tau;
            tau /= tau.norm();
            out.section.row(j) = tau;
        }
    }

    out.propagated = Mat(l + 1, n);
    for (int j = 0; j <= l; ++j) {
        const Vec tau = out.section.row(j);
        out.propagated.row(j) = project_flagged(tau, j, out.infinity_flags);
        const double ld = std::abs(inner(tau, tau)) / tau.squaredNorm();
        out.max_lightlike_defect = std::max(out.max_lightlike_defect, ld);
    }
    out.result = out.propagated.topRows(l);
    out.closure_gap = loops::closure_gap(out.propagated);
    return out;
}

}  // namespace

DarbouxTransform closed_darboux_discrete(const loops::DiscreteLoop& loop, double mu,
                                         int eigen_index, TransformOptions opts) {
    if (mu == 0.0) throw ConfigError("closed_darboux_discrete: mu must be nonzero");
    const loops::LoopLift lift_data = loops::lift_loop(loop);
    const transport::Monodromy P = transport::monodromy_discrete(lift_data, mu);
    const lorentz::EigenSpectrum spec = lorentz::real_lightlike_eigenvectors(P.map, opts.tol);

    Vec v0;
    double rho = spec.resonance_sign != 0 ? spec.resonance_sign : 1.0;
    bool resonant = spec.resonant;
    if (spec.resonant) {
        v0 = continued_eigenvector(lift_data, mu, eigen_index, opts, false);
    } else {
        if (spec.vectors.empty())
            throw NoRealLightlikeEigenvector("no real lightlike eigenvector at mu = " +
                                             std::to_string(mu));
        if (eigen_index < 0 || eigen_index >= static_cast<int>(spec.vectors.size()))
            throw EigenIndexOutOfRange("eigen_index " + std::to_string(eigen_index));
        v0 = spec.vectors[eigen_index].vector;
        rho = spec.vectors[eigen_index].eigenvalue;
    }
    DarbouxTransform out = finish_discrete(loop, mu, v0, rho);
    out.eigen_index = eigen_index;
    out.resonant = resonant;
    return out;
}

DarbouxTransform darboux_discrete_from_vector(const loops::DiscreteLoop& loop, double mu,
                                              const Vec& v0, TransformOptions opts) {
    (void)opts;
    if (mu == 0.0) throw ConfigError("darboux_discrete_from_vector: mu must be nonzero");
    DarbouxTransform out = finish_discrete(loop, mu, v0, 1.0);
    out.eigen_index = -1;
    return out;
}

PropagationResult cross_ratio_propagate(const loops::DiscreteLoop& loop, double mu,
                                        const Vec& xhat0) {
    const int l = loop.size();
    const int n = loop.dim();
    if ((xhat0 - Vec(loop.vertices.row(0))).norm() == 0.0)
        throw DegenerateInput("cross_ratio_propagate: xhat0 coincides with x0");
    for (int j = 0; j < l; ++j) {
        const double q = mu / loop.edge_polarization(j);
        if (q == 0.0 || q == 1.0)
            throw ForbiddenCrossRatio("cross_ratio_propagate: mu/m in {0,1} on edge " +
                                      std::to_string(j));
    }
    PropagationResult out;
    out.propagated = Mat(l + 1, n);
    out.propagated.row(0) = xhat0;
    Vec cur = xhat0;
    for (int j = 0; j < l; ++j) {
        const Vec xj = loop.vertices.row(j);
        const Vec xj1 = loop.vertices.row((j + 1) % l);
        const double q = mu / loop.edge_polarization(j);
        // cr(x_j, x_{j+1}, xhat_j, c) = q  <=>  cr(x_{j+1}, x_j, c, xhat_j) = q.
        cur = moebius::solve_fourth_point(xj1, xj, cur, q);
        out.propagated.row(j + 1) = cur;
    }
    out.closure_gap = loops::closure_gap(out.propagated);
    return out;
}

ResonanceReport resonance_scan(const loops::LoopLift& lift_data, double mu_min,
                               double mu_max, int grid, ScanOptions opts) {
    if (grid < 3) throw ConfigError("resonance_scan: need at least 3 grid points");
    if (mu_min >= mu_max) throw ConfigError("resonance_scan: empty range");
    if (mu_min <= 0.0 && mu_max >= 0.0)
        throw ConfigError("resonance_scan: range must exclude 0");
    if (!lift_data.smooth) {
        for (int j = 0; j < lift_data.size(); ++j) {
            const double m = lift_data.polarization(j);
            if (m >= mu_min && m <= mu_max)
                throw ConfigError("resonance_scan: range contains the pole at m = " +
                                  std::to_string(m));
        }
    }

    const int N = lift_data.ambient_dim() + 2;
    const Mat I = Mat::Identity(N, N);
    auto defect_of = [&](const Mat& P, int* sign) {
        const double dp = (P - I).cwiseAbs().maxCoeff();
        const double dm = (P + I).cwiseAbs().maxCoeff();
        if (sign) *sign = dp <= dm ? 1 : -1;
        return std::min(dp, dm);
    };
    // Grid pass at fixed resolution (bracketing only); refinement below runs
    // through the convergence-gated monodromy.
    auto d_coarse = [&](double mu) {
        if (lift_data.smooth) {
            const Mat P =
                transport::transport_smooth(lift_data, mu, 0, lift_data.size(), opts.substeps);
            return defect_of(P, nullptr);
        }
        return defect_of(transport::monodromy_discrete(lift_data, mu).map, nullptr);
    };
    auto d_fine = [&](double mu, int* sign) {
        if (lift_data.smooth) {
            const transport::Monodromy P =
                transport::monodromy_smooth(lift_data, mu, opts.substeps, opts.gate_tol);
            return defect_of(P.map, sign);
        }
        return defect_of(transport::monodromy_discrete(lift_data, mu).map, sign);
    };

    ResonanceReport report;
    report.grid_mu = Vec(grid);
    report.grid_defect = Vec(grid);
    for (int i = 0; i < grid; ++i)
        report.grid_mu(i) = mu_min + (mu_max - mu_min) * i / (grid - 1);
    for_each_index(grid, opts.policy, [&](std::int64_t i) {
        report.grid_defect(i) = d_coarse(report.grid_mu(i));
    });

    // Bracket interior local minima.
    std::vector<std::pair<double, double>> brackets;
    for (int i = 1; i + 1 < grid; ++i) {
        if (report.grid_defect(i) < report.grid_defect(i - 1) &&
            report.grid_defect(i) <= report.grid_defect(i + 1))
            brackets.emplace_back(report.grid_mu(i - 1), report.grid_mu(i + 1));
    }

    std::vector<ResonancePoint> points(brackets.size());
    std::vector<char> accepted(brackets.size(), 0);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    for_each_index(static_cast<std::int64_t>(brackets.size()), opts.policy,
                   [&](std::int64_t bi) {
        double a = brackets[bi].first, b = brackets[bi].second;
        double x1 = b - inv_phi * (b - a), x2 = a + inv_phi * (b - a);
        double f1 = d_fine(x1, nullptr), f2 = d_fine(x2, nullptr);
        while (b - a > opts.refine_width) {
            if (f1 <= f2) {
                b = x2; x2 = x1; f2 = f1;
                x1 = b - inv_phi * (b - a);
                f1 = d_fine(x1, nullptr);
            } else {
                a = x1; x1 = x2; f1 = f2;
                x2 = a + inv_phi * (b - a);
                f2 = d_fine(x2, nullptr);
            }
        }
        ResonancePoint pt;
        pt.mu = 0.5 * (a + b);
        pt.width = b - a;
        pt.defect = d_fine(pt.mu, &pt.sign);
        points[bi] = pt;
        accepted[bi] = pt.defect <= opts.accept ? 1 : 0;
    });
    for (std::size_t i = 0; i < points.size(); ++i)
        if (accepted[i]) report.points.push_back(points[i]);
    return report;
}

namespace {

DarbouxTransform move_impl(const Mat& base_samples, const DarbouxTransform& transform,
                           int axis, double angle) {
    const int n = static_cast<int>(base_samples.cols());
    if (axis < 3 || axis > n)
        throw ConfigError("move_transform_off_plane: axis must be in [3, n]");
    const int rows = static_cast<int>(base_samples.rows());
    std::vector<Vec> circle_pts = {base_samples.row(0), base_samples.row(rows / 3),
                                   base_samples.row((2 * rows) / 3)};
    // Rotation plane: (1-|x|^2 slot, chosen Euclidean axis).
    const Mat G = lorentz::circle_fixing_rotation(circle_pts, n, axis - 1, angle);

    DarbouxTransform out = transform;
    for (int i = 0; i < out.section.rows(); ++i) {
        const Vec tau = G * Vec(out.section.row(i));
        out.section.row(i) = tau;
        out.propagated.row(i) = lorentz::project(tau);
    }
    out.result = out.propagated.topRows(out.result.rows());
    out.closure_gap = loops::closure_gap(out.propagated);
    out.initial_vector = G * transform.initial_vector;
    return out;
}

}  // namespace

DarbouxTransform move_transform_off_plane(const loops::SmoothLoop& base,
                                          const DarbouxTransform& transform, int axis,
                                          double angle) {
    return move_impl(base.samples, transform, axis, angle);
}

DarbouxTransform move_transform_off_plane(const loops::DiscreteLoop& base,
                                          const DarbouxTransform& transform, int axis,
                                          double angle) {
    return move_impl(base.vertices, transform, axis, angle);
}

CircleFit fit_circle(const Mat& points) {
    const int S = static_cast<int>(points.rows());
    const int n = static_cast<int>(points.cols());
    CircleFit out;
    const Vec mean = points.colwise().mean();
    Mat centered = points.rowwise() - mean.transpose();
    Eigen::JacobiSVD<Mat> svd(centered, Eigen::ComputeFullV);
    const Mat V = svd.matrixV();
    const Vec e1 = V.col(0), e2 = V.col(1);

    // In-plane coordinates and out-of-plane residual.
    Vec u(S), v(S);
    out.planar_residual = 0.0;
    for (int i = 0; i < S; ++i) {
        const Vec p = centered.row(i);
        u(i) = p.dot(e1);
        v(i) = p.dot(e2);
        const Vec off = p - u(i) * e1 - v(i) * e2;
        out.planar_residual = std::max(out.planar_residual, off.norm());
    }

    // Kasa algebraic fit: |p|^2 = 2 a.u + 2 b.v + c.
    Mat A(S, 3);
    Vec rhs(S);
    for (int i = 0; i < S; ++i) {
        A(i, 0) = 2.0 * u(i);
        A(i, 1) = 2.0 * v(i);
        A(i, 2) = 1.0;
        rhs(i) = u(i) * u(i) + v(i) * v(i);
    }
    const Vec sol = A.colPivHouseholderQr().solve(rhs);
    const double cu = sol(0), cv = sol(1);
    out.radius = std::sqrt(std::max(0.0, sol(2) + cu * cu + cv * cv));
    out.center = mean + cu * e1 + cv * e2;
    out.residual = 0.0;
    for (int i = 0; i < S; ++i) {
        const double r = std::hypot(u(i) - cu, v(i) - cv);
        out.residual = std::max(out.residual, std::abs(r - out.radius));
    }
    (void)n;
    return out;
}

}  // namespace isothermic::darboux
