#include "isothermic/moebius.hpp"

#include "isothermic/lorentz.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <complex>

namespace isothermic::moebius {

using lorentz::inner;
using lorentz::lift;

CrossRatioValue cross_ratio(const Vec& y, const Vec& y1, const Vec& y12, const Vec& y2) {
    const Vec Y = lift(y), Y1 = lift(y1), Y12 = lift(y12), Y2 = lift(y2);
    const double a01 = inner(Y, Y1), a23 = inner(Y12, Y2);
    const double a03 = inner(Y, Y2), a12 = inner(Y1, Y12);
    const double a02 = inner(Y, Y12), a13 = inner(Y1, Y2);
    const double den = 2.0 * a03 * a12;
    const double scale = Y.squaredNorm() * Y2.squaredNorm();
    if (std::abs(den) <= 1e-14 * scale)
        throw DegenerateQuadruple("cross_ratio: y = y2 or y1 = y12");

    CrossRatioValue out;
    out.value = (a01 * a23 + a03 * a12 - a02 * a13) / den;

    Mat L(4, Y.size());
    L.row(0) = Y; L.row(1) = Y1; L.row(2) = Y12; L.row(3) = Y2;
    Eigen::JacobiSVD<Mat> svd(L);
    const Vec sv = svd.singularValues();
    out.concircularity_defect = sv(3) / sv(0);
    return out;
}

namespace {

using Cx = std::complex<double>;

// Orthonormal 2-frame spanning the plane through y, y1, y2 (through y). For
// collinear triples the second direction comes from the lowest-index
// coordinate axis not parallel to the line.
void plane_frame(const Vec& y, const Vec& y1, const Vec& y2, Vec& e1, Vec& e2) {
    const Vec d1 = y1 - y, d2 = y2 - y;
    const double n1 = d1.norm();
    if (n1 == 0.0) throw DegenerateInput("solve_fourth_point: coincident points");
    e1 = d1 / n1;
    Vec p = d2 - d2.dot(e1) * e1;
    if (p.norm() > 1e-9 * d2.norm()) {
        e2 = p / p.norm();
        return;
    }
    for (int ax = 0; ax < y.size(); ++ax) {
        Vec e = Vec::Zero(y.size());
        e(ax) = 1.0;
        Vec cand = e - e.dot(e1) * e1;
        if (cand.norm() > 1e-6) {
            e2 = cand / cand.norm();
            return;
        }
    }
    throw DegenerateInput("solve_fourth_point: no auxiliary plane axis");
}

}  // namespace

Vec solve_fourth_point(const Vec& y, const Vec& y1, const Vec& y2, double target) {
    if ((y1 - y).norm() == 0.0 || (y2 - y).norm() == 0.0 || (y2 - y1).norm() == 0.0)
        throw DegenerateInput("solve_fourth_point: coincident input points");
    if (target == 0.0 || target == 1.0)
        throw ForbiddenCrossRatio("solve_fourth_point: target " + std::to_string(target));

    Vec e1, e2;
    plane_frame(y, y1, y2, e1, e2);
    auto to_cx = [&](const Vec& p) { return Cx((p - y).dot(e1), (p - y).dot(e2)); };
    const Cx a = 0.0;  // y itself
    const Cx b = to_cx(y1);
    const Cx d = to_cx(y2);
    // cr(a,b,c,d) = ((a-b)(c-d)) / ((b-c)(d-a)) = target, solved for c.
    const Cx q(target, 0.0);
    const Cx denom = (a - b) + q * (d - a);
    const double scale = std::max(std::abs(a - b), std::abs(d - a));
    if (std::abs(denom) <= 1e-13 * std::max(1.0, std::abs(q)) * scale)
        throw SolutionAtInfinity("solve_fourth_point: fourth point escapes to infinity");
    const Cx c = ((a - b) * d + q * b * (d - a)) / denom;
    return y + c.real() * e1 + c.imag() * e2;
}

InfinitesimalCrossRatio infinitesimal_cross_ratio(const Mat& curve_a, const Mat& curve_b,
                                                  int i, int step) {
    const int S = static_cast<int>(curve_a.rows());
    if (curve_b.rows() != S)
        throw DimensionMismatch("infinitesimal_cross_ratio: sample counts differ");
    if (step < 2 || step % 2 != 0)
        throw ConfigError("infinitesimal_cross_ratio: step must be even and >= 2");

    auto estimate = [&](int k) {
        const double dt = 2.0 * M_PI * k / S;
        // The quad degenerates quadratically in dt; below dt^2 ~ sqrt(eps)
        // the cross ratio has lost half its mantissa to cancellation.
        if (dt * dt < 1e-8)
            throw StepTooSmall("infinitesimal_cross_ratio: step " + std::to_string(dt));
        const Vec a0 = curve_a.row(i), a1 = curve_a.row((i + k) % S);
        const Vec b0 = curve_b.row(i), b1 = curve_b.row((i + k) % S);
        const CrossRatioValue cr = cross_ratio(a0, a1, b0, b1);
        return cr.value / (dt * dt);
    };

    InfinitesimalCrossRatio out;
    out.raw_coarse = estimate(step);
    out.raw_fine = estimate(step / 2);
    out.value = (4.0 * out.raw_fine - out.raw_coarse) / 3.0;
    return out;
}

TangentCircle tangent_circle_through(const Vec& p, const Vec& u, const Vec& p_hat) {
    TangentCircle out;
    const Vec w = p_hat - p;
    const double wn = w.norm();
    if (wn == 0.0) throw CoincidentPoints("tangent_circle_through: p = p_hat");
    const Vec uu = u / u.norm();

    // Normal component of the chord relative to the tangent direction.
    const Vec nperp = w - w.dot(uu) * uu;
    const double np = nperp.norm();
    // Tangent direction at p_hat: reflect u across the chord. Holds for the
    // line case as well (w parallel to u gives back u).
    Vec t = 2.0 * (w.dot(uu)) / (wn * wn) * w - uu;
    out.tangent_at_far = t / t.norm();

    if (np <= 1e-12 * wn) {
        out.is_line = true;
        out.point = p;
        out.direction = uu;
        return out;
    }
    const Vec nhat = nperp / np;
    const double s = (wn * wn) / (2.0 * w.dot(nhat));
    out.center = p + s * nhat;
    out.radius = std::abs(s);
    return out;
}

double ribbon_tangency_defect(const Vec& p, const Vec& u, const Vec& p_hat, const Vec& u_hat) {
    const TangentCircle c = tangent_circle_through(p, u, p_hat);
    const Vec t = c.tangent_at_far;
    const Vec uh = u_hat / u_hat.norm();
    double d = std::abs(t.dot(uh));
    if (d > 1.0) d = 1.0;
    return std::acos(d);
}

}  // namespace isothermic::moebius
