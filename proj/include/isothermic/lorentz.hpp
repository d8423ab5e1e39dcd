#pragma once

#include "isothermic/types.hpp"

#include <vector>

namespace isothermic::lorentz {

// Linear algebra of R^{n+1,1}. Coordinates are ordered with the n Euclidean
// entries first, then the (1-|x|^2) slot, then the timelike (1+|x|^2) slot,
// so the signature matrix is J = diag(1,...,1,-1).

// Signature matrix J of the given total dimension N = n+2.
Mat signature_matrix(int N);

// The point-at-infinity vector q = (0,...,0,-1/2,1/2).
Vec infinity_vector(int N);

double inner(const Vec& a, const Vec& b);

// Lightlike lift X = (2x, 1-|x|^2, 1+|x|^2) with inner(X, q) = -1.
Vec lift(const Vec& x);

// Euclidean point recovered from any vector with inner(v, q) != 0.
// Throws PointAtInfinity when the q-pairing vanishes (relative to |v|).
Vec project(const Vec& v, double tol = 1e-12);

double inner_with_q(const Vec& v);

// a /\ b as a matrix: c -> inner(a,c) b - inner(b,c) a. J-skew.
Mat wedge_action(const Vec& a, const Vec& b);

// |M^T J M - J|_inf.
double lorentz_defect(const Mat& M);

// Exact inverse of a Lorentz-orthogonal map: J M^T J.
Mat lorentz_inverse(const Mat& M);

// Lorentz Gram-Schmidt on columns: the n+1 spacelike columns first, then the
// timelike column. Input must be within defect 1e-3 of the group.
Mat reorthonormalize(const Mat& M);

struct LightlikeEigenvector {
    Vec vector;            // normalized to inner(v,q) = -1 when possible
    double eigenvalue = 0.0;
    double lightlike_defect = 0.0;  // |inner(v,v)| / |v|^2
    bool at_infinity = false;       // inner(v,q) == 0; vector has unit norm instead
};

struct EigenSpectrum {
    std::vector<LightlikeEigenvector> vectors;
    bool resonant = false;  // |M -+ I|_inf below the resonance threshold
    int resonance_sign = 0; // +1 for |M-I| small, -1 for |M+I| small
};

// All real lightlike eigendirections of a Lorentz-orthogonal map, sorted by
// descending |eigenvalue| then lexicographic coordinates. Degenerate
// eigenspaces with indefinite induced metric contribute canonical cone
// representatives (see the implementation notes). When M is within the
// resonance threshold of +-identity the spectrum is flagged resonant and no
// vectors are returned.
EigenSpectrum real_lightlike_eigenvectors(const Mat& M, const Tolerances& tol = {});

// Lorentz-orthogonal map fixing the circle through three points pointwise and
// rotating the (axis_a, axis_b) plane of its orthogonal complement by angle.
// Axis indices address R^{n+2} coordinates (0-based); they must span a plane
// J-orthogonal to the lifted 3-space of the circle.
Mat circle_fixing_rotation(const std::vector<Vec>& circle_points,
                           int axis_a, int axis_b, double angle);

}  // namespace isothermic::lorentz
