#pragma once

#include "isothermic/loops.hpp"
#include "isothermic/types.hpp"

namespace isothermic::transport {

// The flat connection family used throughout is
//   nabla^lambda = d + 2 lambda (X /\ X_t) / (m <X_t, X_t>) dt,
// and parallel sections integrate Y' = -A(t) Y with A the coefficient above.
// The factor 2 calibrates the spectral parameter so that the cross-ratio laws
// hold literally: the ribbon of a transform with parameter mu has
// infinitesimal cross ratio mu/m, and discrete quads carry mu/m_{j,j+1}.
inline constexpr double kSpectralScale = 2.0;

// Connection coefficient at sample i (J-skew, linear in lambda).
Mat smooth_coefficient(const loops::LoopLift& lift, int i, double lambda);

struct Monodromy {
    Mat map;
    double spectral_parameter = 0.0;
    int steps = 0;        // total RK4 steps over the period
    double defect = 0.0;  // Lorentz defect after reorthonormalization
};

// Classical RK4 transport of Y' = -A(t) Y across samples [i_from, i_to]
// (i_to >= i_from; indices wrap), with `substeps` integration steps per
// sample interval and reorthonormalization every 64 steps. The connection
// coefficient between samples is evaluated by 4th-order interpolation of the
// loop data.
Mat transport_smooth(const loops::LoopLift& lift, double lambda, int i_from, int i_to,
                     int substeps = 4);

// Full-period monodromy with a convergence gate: the substep count doubles
// until one more doubling changes the result by at most gate_tol (default
// from tolerances). Deterministic given the inputs.
Monodromy monodromy_smooth(const loops::LoopLift& lift, double lambda,
                           int base_substeps = 4, double gate_tol = 1e-8,
                           int max_substeps = 256);

// Discrete edge connection for edge (j, j+1):
//   Y -> Y + lambda/(m <X_j,X_{j+1}>) *
//        ( m/(m-lambda) <Y,X_j> X_{j+1} - <Y,X_{j+1}> X_j ).
// Lorentz-orthogonal exactly; pole at lambda = m.
Mat discrete_edge_connection(const loops::LoopLift& lift, int j, double lambda);

// Ordered product of the l edge connections.
Monodromy monodromy_discrete(const loops::LoopLift& lift, double lambda);

Monodromy monodromy(const loops::LoopLift& lift, double lambda,
                    int base_substeps = 4, double gate_tol = 1e-8);

// Parallel section from initial vector v0 across one full period, sampled at
// every grid point ((S+1) rows, the last being the once-around continuation
// of the first). Rows are renormalized to unit Euclidean norm; the scale of a
// parallel section is immaterial for projection.
Mat transport_section(const loops::LoopLift& lift, double lambda, const Vec& v0,
                      int substeps = 4);

}  // namespace isothermic::transport
