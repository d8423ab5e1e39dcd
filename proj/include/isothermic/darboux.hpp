#pragma once

#include "isothermic/loops.hpp"
#include "isothermic/lorentz.hpp"
#include "isothermic/parallel.hpp"
#include "isothermic/types.hpp"

#include <vector>

namespace isothermic::darboux {

struct DarbouxTransform {
    bool smooth = true;
    double mu = 0.0;
    int eigen_index = 0;
    double eigenvalue = 0.0;
    Mat result;            // S x n (or l x n) transformed loop samples
    Mat propagated;        // (S+1) x n including the once-around continuation
    Mat section;           // (S+1) x (n+2) renormalized parallel section
    double closure_gap = 0.0;
    double max_lightlike_defect = 0.0;   // of the section along the curve
    std::vector<int> infinity_flags;     // samples where projection is singular
    std::vector<int> touch_flags;        // samples where the section meets the base lift
    bool resonant = false;               // built at a resonance point
    Vec initial_vector;
};

struct TransformOptions {
    int substeps = 4;
    double gate_tol = 1e-8;
    // Offset used to select eigenvectors by continuity at resonance points:
    // the spectrum is extracted at mu(1 +- eps) and averaged.
    double resonance_probe = 1e-3;
    Tolerances tol;
};

// Closed Darboux transform from the eigen_index-th lightlike monodromy
// eigenvector. At a resonance point every lightlike vector closes; with no
// explicit initial vector the eigenvector family is continued through the
// resonance by probing nearby spectral parameters.
DarbouxTransform closed_darboux_smooth(const loops::SmoothLoop& loop, double mu,
                                       int eigen_index = 0, TransformOptions opts = {});

// Same with an explicit lightlike initial vector (resonance points, controls).
DarbouxTransform darboux_smooth_from_vector(const loops::SmoothLoop& loop, double mu,
                                            const Vec& v0, TransformOptions opts = {});

DarbouxTransform closed_darboux_discrete(const loops::DiscreteLoop& loop, double mu,
                                         int eigen_index = 0, TransformOptions opts = {});

DarbouxTransform darboux_discrete_from_vector(const loops::DiscreteLoop& loop, double mu,
                                              const Vec& v0, TransformOptions opts = {});

// Vertex-by-vertex propagation through the cross-ratio law: each quad
// (x_j, x_{j+1}, xhat_j, xhat_{j+1}) gets cross ratio mu/m_{j,j+1}. Returns
// the propagated polygon ((l+1) x n) whose closure gap measures whether
// xhat_0 was a closing initial point.
struct PropagationResult {
    Mat propagated;  // (l+1) x n
    double closure_gap = 0.0;
};
PropagationResult cross_ratio_propagate(const loops::DiscreteLoop& loop, double mu,
                                        const Vec& xhat0);

struct ResonancePoint {
    double mu = 0.0;
    double defect = 0.0;  // min(|P-I|, |P+I|)_inf at the refined point
    int sign = 0;         // +1 for +id, -1 for -id
    double width = 0.0;   // final bracket width of the refinement
};

struct ResonanceReport {
    std::vector<ResonancePoint> points;
    Vec grid_mu;      // diagnostic: the scanned grid
    Vec grid_defect;
};

struct ScanOptions {
    int substeps = 4;
    double gate_tol = 1e-8;
    double refine_width = 1e-9;
    double accept = 1e-6;
    ExecPolicy policy = ExecPolicy::Parallel;
    Tolerances tol;
};

// Scans d(mu) = min(|P(mu)-I|, |P(mu)+I|)_inf on a uniform grid, brackets the
// local minima and refines each by golden section. Works on smooth and
// discrete loops; the range must exclude 0 and all discrete poles.
ResonanceReport resonance_scan(const loops::LoopLift& lift, double mu_min, double mu_max,
                               int grid, ScanOptions opts = {});

// Applies a Moebius rotation fixing the base circle to every point of the
// transform, pushing it into span{e1, e2, e_axis}. axis is 1-based (3..n);
// the rotation plane is (slot axis, e_axis).
DarbouxTransform move_transform_off_plane(const loops::SmoothLoop& base,
                                          const DarbouxTransform& transform, int axis,
                                          double angle = M_PI / 4.0);
DarbouxTransform move_transform_off_plane(const loops::DiscreteLoop& base,
                                          const DarbouxTransform& transform, int axis,
                                          double angle = M_PI / 4.0);

// Least-squares plane + circle fit diagnostic.
struct CircleFit {
    Vec center;             // in ambient coordinates
    double radius = 0.0;
    double residual = 0.0;  // max | |p-center| - radius | over points (in-plane)
    double planar_residual = 0.0;  // max out-of-plane deviation
};
CircleFit fit_circle(const Mat& points);

}  // namespace isothermic::darboux
