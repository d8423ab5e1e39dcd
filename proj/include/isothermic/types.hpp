#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace isothermic {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Error hierarchy. Numerical-domain failures derive from NumericalError so
// the driver can map them to a dedicated exit code; malformed inputs derive
// from ConfigError.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& what) : Error(what) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& what) : Error(what) {}
};

struct DimensionMismatch : NumericalError {
    explicit DimensionMismatch(const std::string& what) : NumericalError(what) {}
};
struct PointAtInfinity : NumericalError {
    explicit PointAtInfinity(const std::string& what) : NumericalError(what) {}
};
struct NotLorentzOrthogonal : NumericalError {
    explicit NotLorentzOrthogonal(const std::string& what) : NumericalError(what) {}
};
struct TooFarFromGroup : NumericalError {
    explicit TooFarFromGroup(const std::string& what) : NumericalError(what) {}
};
struct DegenerateCircle : NumericalError {
    explicit DegenerateCircle(const std::string& what) : NumericalError(what) {}
};
struct PlaneNotInComplement : NumericalError {
    explicit PlaneNotInComplement(const std::string& what) : NumericalError(what) {}
};
struct DegenerateQuadruple : NumericalError {
    explicit DegenerateQuadruple(const std::string& what) : NumericalError(what) {}
};
struct DegenerateInput : NumericalError {
    explicit DegenerateInput(const std::string& what) : NumericalError(what) {}
};
struct ForbiddenCrossRatio : NumericalError {
    explicit ForbiddenCrossRatio(const std::string& what) : NumericalError(what) {}
};
struct SolutionAtInfinity : NumericalError {
    explicit SolutionAtInfinity(const std::string& what) : NumericalError(what) {}
};
struct CoincidentPoints : NumericalError {
    explicit CoincidentPoints(const std::string& what) : NumericalError(what) {}
};
struct StepTooSmall : NumericalError {
    explicit StepTooSmall(const std::string& what) : NumericalError(what) {}
};
struct NonImmersedSample : NumericalError {
    explicit NonImmersedSample(const std::string& what) : NumericalError(what) {}
};
struct StepFailure : NumericalError {
    explicit StepFailure(const std::string& what) : NumericalError(what) {}
};
struct PoleAtLambdaEqualsM : NumericalError {
    explicit PoleAtLambdaEqualsM(const std::string& what) : NumericalError(what) {}
};
struct CoincidentVertices : NumericalError {
    explicit CoincidentVertices(const std::string& what) : NumericalError(what) {}
};
struct NoRealLightlikeEigenvector : NumericalError {
    explicit NoRealLightlikeEigenvector(const std::string& what) : NumericalError(what) {}
};
struct EigenIndexOutOfRange : NumericalError {
    explicit EigenIndexOutOfRange(const std::string& what) : NumericalError(what) {}
};
struct EqualSpectralParameters : NumericalError {
    explicit EqualSpectralParameters(const std::string& what) : NumericalError(what) {}
};
struct CubeInconsistency : NumericalError {
    explicit CubeInconsistency(const std::string& what) : NumericalError(what) {}
};
struct InsufficientDirections : NumericalError {
    explicit InsufficientDirections(const std::string& what) : NumericalError(what) {}
};
struct GridMapInvalid : NumericalError {
    explicit GridMapInvalid(const std::string& what) : NumericalError(what) {}
};

// Tolerance ladder. Algebraic identities are checked near machine precision,
// integrated quantities at 1e-6, limit-based estimates at 1e-4. A global
// scale factor is applied by the driver's --tolerance-scale flag.
struct Tolerances {
    double algebraic = 1e-10;
    double lightlike = 1e-8;       // |<v,v>| / |v|^2 acceptance for lightlike vectors
    double lorentz_defect = 1e-8;  // |M^T J M - J|_inf for integrated transports
    double reorth_target = 1e-12;
    double eigen_real = 1e-9;      // |Im rho| <= eigen_real * (1 + |rho|)
    double eigen_residual = 1e-8;  // |Mv - rho v| <= eigen_residual * |v| * (1+|rho|)
    double resonance = 1e-6;       // |M -+ I|_inf
    double concircularity = 1e-8;
    double quad_concircularity = 1e-9;  // net quads from verified constructions
    double closure = 1e-6;         // smooth transform closure gap
    double closure_discrete = 1e-10;
    double integrated = 1e-6;
    double limit = 1e-4;           // Richardson-extrapolated quantities
    double tangency = 1e-6;
    double rank_rel = 1e-8;        // singular value cutoff for affine rank
    double cube_consistency = 1e-7;
    double monodromy_gate = 1e-8;  // substep-doubling convergence gate

    Tolerances scaled(double s) const {
        Tolerances t = *this;
        t.algebraic *= s; t.lightlike *= s; t.lorentz_defect *= s;
        t.eigen_residual *= s; t.resonance *= s; t.concircularity *= s;
        t.quad_concircularity *= s;
        t.closure *= s; t.closure_discrete *= s; t.integrated *= s;
        t.limit *= s; t.tangency *= s; t.cube_consistency *= s;
        t.monodromy_gate *= s;
        return t;
    }
};

}  // namespace isothermic
