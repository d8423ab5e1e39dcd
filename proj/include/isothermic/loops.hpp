#pragma once

#include "isothermic/types.hpp"

#include <optional>
#include <string>

namespace isothermic::loops {

// Analytic tag for loops constructed as circles: enables exact derivatives.
struct CircleTag {
    Vec center;
    double radius = 1.0;
    int axis_u = 0;  // the circle lives in the (axis_u, axis_v) coordinate plane
    int axis_v = 1;
};

// Closed curve sampled at t_i = 2 pi i / S with positive polarization m(t_i).
// Indexing is cyclic.
struct SmoothLoop {
    Mat samples;       // S x n
    Vec polarization;  // S, all positive
    std::optional<CircleTag> circle;

    int size() const { return static_cast<int>(samples.rows()); }
    int dim() const { return static_cast<int>(samples.cols()); }
    Vec point(int i) const { return samples.row(((i % size()) + size()) % size()); }
};

// Closed polygon x_0..x_{l-1} (x_l = x_0) with nonzero edge polarization.
struct DiscreteLoop {
    Mat vertices;           // l x n
    Vec edge_polarization;  // l, entry j for edge (j, j+1)

    int size() const { return static_cast<int>(vertices.rows()); }
    int dim() const { return static_cast<int>(vertices.cols()); }
    Vec point(int i) const { return vertices.row(((i % size()) + size()) % size()); }
};

// Per-sample light-cone data of a loop.
struct LoopLift {
    Mat X;   // S x (n+2) lightlike lifts, inner(X,q) = -1
    Mat Xt;  // smooth loops only: derivative lifts (2 x_t, -2<x,x_t>, 2<x,x_t>)
    Vec polarization;  // copied from the loop (samples or edges)
    bool smooth = false;
    // Carried over from an analytic circle with constant polarization;
    // lets the transport integrator evaluate the connection off-grid exactly.
    std::optional<CircleTag> circle;

    int size() const { return static_cast<int>(X.rows()); }
    int ambient_dim() const { return static_cast<int>(X.cols()) - 2; }
};

// Unit circle in the (e1,e2) plane of R^n, S samples, constant polarization.
SmoothLoop make_circle(int n, int S, double polarization = 1.0);

// Regular l-gon on the unit circle in the (e1,e2) plane with uniform edge
// polarization (nonzero, negative allowed). polarization = 0 selects the
// inverse squared edge length 1/|x_{j+1}-x_j|^2, the discrete analogue of
// arc-length polarization.
DiscreteLoop make_discrete_circle(int n, int l, double polarization = 0.0);

// Arbitrary sampled loop from raw data (validates invariants).
SmoothLoop make_smooth_loop(Mat samples, Vec polarization);
DiscreteLoop make_discrete_loop(Mat vertices, Vec edge_polarization);

LoopLift lift_loop(const SmoothLoop& loop);
LoopLift lift_loop(const DiscreteLoop& loop);

// |x_end - x_start| of a propagated sample sequence ((S+1) x n; the final row
// is the once-around continuation of the first).
double closure_gap(const Mat& propagated);

// Plain-text loop files:
//   loop n=<int> kind=<smooth|discrete> size=<int>
//   <one sample per line, space-separated decimals>
//   polarization            (optional block)
//   <one value per sample/edge>
struct LoopFile {
    bool smooth = true;
    Mat samples;
    Vec polarization;  // empty when the block is absent
};
LoopFile read_loop_file(const std::string& path);
void write_loop_file(const std::string& path, const SmoothLoop& loop, int precision = 17);
void write_loop_file(const std::string& path, const DiscreteLoop& loop, int precision = 17);

}  // namespace isothermic::loops
