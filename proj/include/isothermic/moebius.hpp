#pragma once

#include "isothermic/types.hpp"

namespace isothermic::moebius {

// Cross ratio of four points computed through the light-cone inner products:
//   cr(y,y1,y12,y2) = [<Y,Y1><Y12,Y2> + <Y,Y2><Y1,Y12> - <Y,Y12><Y1,Y2>]
//                     / (2 <Y,Y2><Y1,Y12>).
// The value is the genuine Moebius cross ratio exactly when the four lifts
// span at most three dimensions; the concircularity defect reports the
// normalized smallest singular value of the lift matrix.
struct CrossRatioValue {
    double value = 0.0;
    double concircularity_defect = 0.0;
};

CrossRatioValue cross_ratio(const Vec& y, const Vec& y1, const Vec& y12, const Vec& y2);

// Fourth concircular point with cross_ratio(y, y1, result, y2) = target.
// Solved as a linear-fractional equation in the complexified plane of the
// three input points; collinear triples use the lowest-index coordinate axis
// not parallel to the line as the auxiliary plane direction.
Vec solve_fourth_point(const Vec& y, const Vec& y1, const Vec& y2, double target);

struct InfinitesimalCrossRatio {
    double value = 0.0;        // Richardson-extrapolated limit
    double raw_coarse = 0.0;   // estimate at step delta
    double raw_fine = 0.0;     // estimate at step delta/2
};

// Limit (dt)^-2 * cr of the quadrilateral cut from two corresponding curves,
// estimated at sample i from index steps `step` and `step/2` (step must be
// even and >= 2) and Richardson-extrapolated at second order. Curves are
// S x n sample matrices over the uniform parameter grid t_i = 2 pi i / S,
// indexed cyclically. Orientation: the quadruple is taken as
// (a_i, a_{i+k}, b_i, b_{i+k}), which makes the ribbon law of a Darboux pair
// come out as +mu/m.
InfinitesimalCrossRatio infinitesimal_cross_ratio(const Mat& curve_a, const Mat& curve_b,
                                                  int i, int step);

struct TangentCircle {
    bool is_line = false;
    Vec center;       // circle case
    double radius = 0.0;
    Vec point;        // line case: base point
    Vec direction;    // line case: unit direction
    Vec tangent_at_far;  // unit tangent direction at the second point
};

// Unique circle (or line) through p and p_hat tangent to direction u at p.
TangentCircle tangent_circle_through(const Vec& p, const Vec& u, const Vec& p_hat);

// Angle in [0, pi/2] between tangent_circle_through(p,u,p_hat)'s tangent at
// p_hat and the line spanned by u_hat. Zero iff the two curve elements share
// a tangent circle.
double ribbon_tangency_defect(const Vec& p, const Vec& u, const Vec& p_hat, const Vec& u_hat);

}  // namespace isothermic::moebius
