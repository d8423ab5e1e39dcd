#include "isothermic/lorentz.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace isothermic::lorentz {

Mat signature_matrix(int N) {
    Mat J = Mat::Identity(N, N);
    J(N - 1, N - 1) = -1.0;
    return J;
}

Vec infinity_vector(int N) {
    Vec q = Vec::Zero(N);
    q(N - 2) = -0.5;
    q(N - 1) = 0.5;
    return q;
}

double inner(const Vec& a, const Vec& b) {
    if (a.size() != b.size())
        throw DimensionMismatch("inner: vectors of size " + std::to_string(a.size()) +
                                " and " + std::to_string(b.size()));
    const int N = static_cast<int>(a.size());
    return a.head(N - 1).dot(b.head(N - 1)) - a(N - 1) * b(N - 1);
}

Vec lift(const Vec& x) {
    const int n = static_cast<int>(x.size());
    Vec X(n + 2);
    X.head(n) = 2.0 * x;
    const double r2 = x.squaredNorm();
    X(n) = 1.0 - r2;
    X(n + 1) = 1.0 + r2;
    return X;
}

double inner_with_q(const Vec& v) {
    const int N = static_cast<int>(v.size());
    return -0.5 * v(N - 2) - 0.5 * v(N - 1);
}

Vec project(const Vec& v, double tol) {
    const int N = static_cast<int>(v.size());
    const double c = inner_with_q(v);
    if (std::abs(c) <= tol * v.norm())
        throw PointAtInfinity("project: inner(v,q) = " + std::to_string(c));
    return (v / (-c)).head(N - 2) / 2.0;
}

Mat wedge_action(const Vec& a, const Vec& b) {
    const int N = static_cast<int>(a.size());
    if (b.size() != N) throw DimensionMismatch("wedge_action: size mismatch");
    Vec Ja = a, Jb = b;
    Ja(N - 1) = -Ja(N - 1);
    Jb(N - 1) = -Jb(N - 1);
    // c -> <a,c> b - <b,c> a  ==  b (Ja)^T - a (Jb)^T
    return b * Ja.transpose() - a * Jb.transpose();
}

double lorentz_defect(const Mat& M) {
    const int N = static_cast<int>(M.rows());
    const Mat J = signature_matrix(N);
    return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

Mat lorentz_inverse(const Mat& M) {
    const int N = static_cast<int>(M.rows());
    const Mat J = signature_matrix(N);
    return J * M.transpose() * J;
}

Mat reorthonormalize(const Mat& M) {
    const double defect = lorentz_defect(M);
    // Negated comparisons throughout so NaN input cannot slip through.
    if (!(defect <= 1e-3))
        throw TooFarFromGroup("reorthonormalize: defect " + std::to_string(defect));
    const int N = static_cast<int>(M.rows());
    Mat out = M;
    // Spacelike columns first.
    for (int j = 0; j < N - 1; ++j) {
        Vec c = out.col(j);
        for (int k = 0; k < j; ++k) c -= inner(out.col(k), c) * out.col(k);
        const double nn = inner(c, c);
        if (!(nn > 0.0)) throw TooFarFromGroup("reorthonormalize: lost spacelike column");
        out.col(j) = c / std::sqrt(nn);
    }
    // Timelike column: J-orthogonalize (note negative signature).
    Vec c = out.col(N - 1);
    for (int k = 0; k < N - 1; ++k) c -= inner(out.col(k), c) * out.col(k);
    const double nn = -inner(c, c);
    if (!(nn > 0.0)) throw TooFarFromGroup("reorthonormalize: lost timelike column");
    out.col(N - 1) = c / std::sqrt(nn);
    return out;
}

namespace {

// Canonical sign: first coordinate above the noise floor is positive.
void canonical_sign(Vec& v) {
    const double floor = 1e-9 * v.cwiseAbs().maxCoeff();
    for (int i = 0; i < v.size(); ++i) {
        if (std::abs(v(i)) > floor) {
            if (v(i) < 0) v = -v;
            return;
        }
    }
}

// Normalize a lightlike representative against q when possible.
LightlikeEigenvector finalize(Vec v, double rho) {
    LightlikeEigenvector out;
    const double c = inner_with_q(v);
    if (std::abs(c) > 1e-10 * v.norm()) {
        v /= -c;  // inner(v,q) = -1
    } else {
        v /= v.norm();
        out.at_infinity = true;
        canonical_sign(v);
    }
    out.lightlike_defect = std::abs(inner(v, v)) / v.squaredNorm();
    out.vector = std::move(v);
    out.eigenvalue = rho;
    return out;
}

bool lex_less(const Vec& a, const Vec& b) {
    for (int i = 0; i < a.size(); ++i) {
        if (a(i) < b(i) - 1e-12) return true;
        if (a(i) > b(i) + 1e-12) return false;
    }
    return false;
}

// Lightlike directions inside the (possibly degenerate) eigenspace spanned by
// the columns of E. The induced metric B = E^T J E is diagonalized; a single
// negative direction paired with each positive direction yields the two null
// lines of their span. The positive-definite block is based on coordinate
// axes taken in descending index order so the selection is reproducible and,
// for monodromies of planar loops, starts with the non-Euclidean slot axis.
std::vector<Vec> lightlike_in_subspace(const Mat& E, const Mat& J) {
    std::vector<Vec> out;
    const Mat B = E.transpose() * J * E;
    Eigen::SelfAdjointEigenSolver<Mat> es(B);
    const Vec lam = es.eigenvalues();
    const int g = static_cast<int>(lam.size());
    int ineg = 0;
    for (int i = 1; i < g; ++i)
        if (lam(i) < lam(ineg)) ineg = i;

    if (lam(ineg) >= -1e-10) {
        // Non-negative induced metric: null directions of B are the only
        // lightlike vectors.
        for (int i = 0; i < g; ++i) {
            if (std::abs(lam(i)) <= 1e-10) {
                Vec v = E * es.eigenvectors().col(i);
                canonical_sign(v);
                out.push_back(v);
            }
        }
        return out;
    }

    Vec uneg = E * es.eigenvectors().col(ineg);
    uneg /= std::sqrt(-inner(uneg, uneg));
    canonical_sign(uneg);

    const int N = static_cast<int>(E.rows());
    std::vector<Vec> pos;
    for (int ax = N - 1; ax >= 0; --ax) {
        Vec e = Vec::Zero(N);
        e(ax) = 1.0;
        Vec p = E * (E.transpose() * e);       // Euclidean projection onto the eigenspace
        p += inner(p, uneg) * uneg;            // J-orthogonalize against the timelike axis
        for (const Vec& prev : pos) p -= inner(p, prev) * prev;
        const double nn = inner(p, p);
        if (nn > 1e-12) pos.push_back(p / std::sqrt(nn));
    }
    for (const Vec& p : pos) {
        out.push_back(uneg + p);
        out.push_back(uneg - p);
    }
    return out;
}

}  // namespace

EigenSpectrum real_lightlike_eigenvectors(const Mat& M, const Tolerances& tol) {
    const int N = static_cast<int>(M.rows());
    const Mat J = signature_matrix(N);
    const double defect = lorentz_defect(M);
    const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
    if (!(defect <= std::max(tol.lorentz_defect, 1e-12 * scale * scale) * 100.0))
        throw NotLorentzOrthogonal("real_lightlike_eigenvectors: defect " + std::to_string(defect));

    EigenSpectrum spec;
    const Mat I = Mat::Identity(N, N);
    const double dplus = (M - I).cwiseAbs().maxCoeff();
    const double dminus = (M + I).cwiseAbs().maxCoeff();
    if (std::min(dplus, dminus) <= tol.resonance) {
        spec.resonant = true;
        spec.resonance_sign = dplus <= dminus ? 1 : -1;
        return spec;
    }

    // Candidate real eigenvalues from M and from its exact Lorentz inverse;
    // the inverse resolves contracting directions of strongly boosted maps
    // that the forward problem represents poorly.
    std::vector<double> reals;
    auto collect = [&](const Mat& A, bool invert) {
        Eigen::EigenSolver<Mat> es(A);
        for (int i = 0; i < N; ++i) {
            const auto w = es.eigenvalues()(i);
            if (std::abs(w.imag()) <= tol.eigen_real * (1.0 + std::abs(w)))
                reals.push_back(invert ? 1.0 / w.real() : w.real());
        }
    };
    collect(M, false);
    collect(lorentz_inverse(M), true);

    // Cluster eigenvalues.
    std::sort(reals.begin(), reals.end());
    std::vector<double> clustered;
    for (double r : reals) {
        if (clustered.empty() || std::abs(r - clustered.back()) > 1e-6 * (1.0 + std::abs(r)))
            clustered.push_back(r);
    }

    std::vector<LightlikeEigenvector> found;
    for (double rho : clustered) {
        // Null space of (A - I) where A = M/rho for |rho| >= 1, else
        // (M^{-1} * rho) — keeps the shifted matrix O(1) for extreme boosts.
        Mat A;
        if (std::abs(rho) >= 1.0)
            A = M / rho - I;
        else
            A = lorentz_inverse(M) * rho - I;
        Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullV);
        const Vec sv = svd.singularValues();
        const double cutoff = std::max(1e-7, 1e-12 * sv(0));
        int g = 0;
        for (int i = 0; i < N; ++i)
            if (sv(i) <= cutoff) ++g;
        if (g == 0) continue;
        const Mat E = svd.matrixV().rightCols(g);

        std::vector<Vec> candidates;
        if (g == 1) {
            Vec v = E.col(0);
            canonical_sign(v);
            candidates.push_back(v);
        } else {
            candidates = lightlike_in_subspace(E, J);
        }
        for (Vec& v : candidates) {
            const double ln = std::abs(inner(v, v)) / v.squaredNorm();
            if (ln > tol.lightlike) continue;
            const double resid = (M * v - rho * v).norm() / (v.norm() * (1.0 + std::abs(rho)));
            if (resid > tol.eigen_residual * 10.0) continue;
            // Deduplicate directions.
            bool dup = false;
            for (const auto& f : found) {
                Vec a = f.vector / f.vector.norm();
                Vec b = v / v.norm();
                if ((a - b).norm() < 1e-7 || (a + b).norm() < 1e-7) { dup = true; break; }
            }
            if (!dup) found.push_back(finalize(v, rho));
        }
    }

    std::stable_sort(found.begin(), found.end(),
                     [](const LightlikeEigenvector& a, const LightlikeEigenvector& b) {
                         const double ma = std::abs(a.eigenvalue), mb = std::abs(b.eigenvalue);
                         if (std::abs(ma - mb) > 1e-9 * (1.0 + std::max(ma, mb)))
                             return ma > mb;
                         return lex_less(b.vector, a.vector);
                     });
    spec.vectors = std::move(found);
    return spec;
}

Mat circle_fixing_rotation(const std::vector<Vec>& circle_points,
                           int axis_a, int axis_b, double angle) {
    if (circle_points.size() != 3)
        throw DegenerateCircle("circle_fixing_rotation: need exactly three points");
    const int n = static_cast<int>(circle_points[0].size());
    const int N = n + 2;

    // Coincident or collinear triples determine no circle (collinear points
    // still lift to a rank-3 space, so test in Euclidean coordinates).
    Mat chords(2, n);
    chords.row(0) = circle_points[1] - circle_points[0];
    chords.row(1) = circle_points[2] - circle_points[0];
    Eigen::JacobiSVD<Mat> chord_svd(chords);
    if (chord_svd.singularValues()(1) <= 1e-10 * chord_svd.singularValues()(0) ||
        chord_svd.singularValues()(0) == 0.0)
        throw DegenerateCircle("circle_fixing_rotation: points collinear or coincident");

    Mat L(N, 3);
    for (int i = 0; i < 3; ++i) L.col(i) = lift(circle_points[i]);

    if (axis_a < 0 || axis_a >= N || axis_b < 0 || axis_b >= N || axis_a == axis_b)
        throw PlaneNotInComplement("circle_fixing_rotation: bad axis pair");
    Vec ea = Vec::Zero(N), eb = Vec::Zero(N);
    ea(axis_a) = 1.0;
    eb(axis_b) = 1.0;
    for (int i = 0; i < 3; ++i) {
        if (std::abs(inner(L.col(i), ea)) > 1e-9 * L.col(i).norm() ||
            std::abs(inner(L.col(i), eb)) > 1e-9 * L.col(i).norm())
            throw PlaneNotInComplement("circle_fixing_rotation: plane meets the circle's 3-space");
    }

    Mat G = Mat::Identity(N, N);
    const double c = std::cos(angle), s = std::sin(angle);
    G(axis_a, axis_a) = c;
    G(axis_b, axis_b) = c;
    G(axis_b, axis_a) = s;
    G(axis_a, axis_b) = -s;
    return G;
}

}  // namespace isothermic::lorentz
