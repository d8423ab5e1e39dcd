#include "isothermic/transport.hpp"

#include "isothermic/lorentz.hpp"

#include <cmath>
#include <vector>

namespace isothermic::transport {

using lorentz::inner;

Mat smooth_coefficient(const loops::LoopLift& lift, int i, double lambda) {
    if (!lift.smooth)
        throw ConfigError("smooth_coefficient: lift is not a smooth loop lift");
    const int S = lift.size();
    i = ((i % S) + S) % S;
    const Vec X = lift.X.row(i);
    const Vec Xt = lift.Xt.row(i);
    const double speed2 = inner(Xt, Xt);
    if (speed2 <= 0.0)
        throw NonImmersedSample("smooth_coefficient: <X_t,X_t> <= 0 at sample " +
                                std::to_string(i));
    const double m = lift.polarization(i);
    if (m == 0.0) throw NonImmersedSample("smooth_coefficient: zero polarization");
    return (kSpectralScale * lambda / (m * speed2)) * lorentz::wedge_action(X, Xt);
}

namespace {

// Centered cubic Lagrange weights for u in [0,1] over nodes {-1,0,1,2}.
void lagrange_weights(double u, double w[4]) {
    w[0] = -u * (u - 1.0) * (u - 2.0) / 6.0;
    w[1] = (u + 1.0) * (u - 1.0) * (u - 2.0) / 2.0;
    w[2] = -(u + 1.0) * u * (u - 2.0) / 2.0;
    w[3] = (u + 1.0) * u * (u - 1.0) / 6.0;
}

// Connection coefficient evaluated between samples: exactly for analytic
// circles with constant polarization, otherwise by centered cubic
// interpolation of the per-sample coefficients.
struct CoefficientTable {
    std::vector<Mat> A;  // per-sample connection coefficients (interpolation path)
    int S = 0;
    bool analytic = false;
    loops::CircleTag circle;
    double m = 1.0;
    double lambda = 0.0;
    int n = 0;

    Mat eval(int interval, double u) const {
        if (analytic) {
            const double t = 2.0 * M_PI * (interval + u) / S;
            Vec x = circle.center;
            x(circle.axis_u) += circle.radius * std::cos(t);
            x(circle.axis_v) += circle.radius * std::sin(t);
            Vec xt = Vec::Zero(n);
            xt(circle.axis_u) = -circle.radius * std::sin(t);
            xt(circle.axis_v) = circle.radius * std::cos(t);
            const Vec X = lorentz::lift(x);
            Vec Xt(n + 2);
            Xt.head(n) = 2.0 * xt;
            const double dot = x.dot(xt);
            Xt(n) = -2.0 * dot;
            Xt(n + 1) = 2.0 * dot;
            return (kSpectralScale * lambda / (m * inner(Xt, Xt))) *
                   lorentz::wedge_action(X, Xt);
        }
        double w[4];
        lagrange_weights(u, w);
        const int i0 = ((interval - 1) % S + S) % S;
        const int i1 = interval % S;
        const int i2 = (interval + 1) % S;
        const int i3 = (interval + 2) % S;
        return w[0] * A[i0] + w[1] * A[i1] + w[2] * A[i2] + w[3] * A[i3];
    }
};

CoefficientTable build_table(const loops::LoopLift& lift, double lambda) {
    CoefficientTable t;
    t.S = lift.size();
    if (lift.circle) {
        t.analytic = true;
        t.circle = *lift.circle;
        t.m = lift.polarization(0);
        t.lambda = lambda;
        t.n = lift.ambient_dim();
        return t;
    }
    t.A.reserve(t.S);
    for (int i = 0; i < t.S; ++i) t.A.push_back(smooth_coefficient(lift, i, lambda));
    return t;
}

// One RK4 step of Y' = -A(t) Y on the interval-local parameter.
template <typename State>
State rk4_step(const CoefficientTable& tab, int interval, double u0, double du, double h,
               const State& Y) {
    const Mat A1 = tab.eval(interval, u0);
    const Mat A2 = tab.eval(interval, u0 + 0.5 * du);
    const Mat A3 = tab.eval(interval, u0 + du);
    const State k1 = -(A1 * Y);
    const State k2 = -(A2 * (Y + (0.5 * h) * k1));
    const State k3 = -(A2 * (Y + (0.5 * h) * k2));
    const State k4 = -(A3 * (Y + h * k3));
    return Y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Mat transport_smooth(const loops::LoopLift& lift, double lambda, int i_from, int i_to,
                     int substeps) {
    if (!lift.smooth) throw ConfigError("transport_smooth: discrete lift");
    if (substeps < 1) throw ConfigError("transport_smooth: substeps must be >= 1");
    if (i_to < i_from) throw ConfigError("transport_smooth: i_to < i_from");
    const int S = lift.size();
    const int N = lift.ambient_dim() + 2;
    const CoefficientTable tab = build_table(lift, lambda);
    const double h = (2.0 * M_PI / S) / substeps;

    Mat Y = Mat::Identity(N, N);
    int steps_done = 0;
    for (int iv = i_from; iv < i_to; ++iv) {
        for (int k = 0; k < substeps; ++k) {
            const double u0 = static_cast<double>(k) / substeps;
            Y = rk4_step<Mat>(tab, iv, u0, 1.0 / substeps, h, Y);
            if (++steps_done % 64 == 0) {
                const double defect = lorentz::lorentz_defect(Y);
                // Negated comparison so NaN from a blown-up step also lands here.
                if (!(defect <= 1e-3))
                    throw StepFailure("transport_smooth: defect " + std::to_string(defect));
                Y = lorentz::reorthonormalize(Y);
            }
        }
    }
    if (!(lorentz::lorentz_defect(Y) <= 1e-3))
        throw StepFailure("transport_smooth: final defect too large");
    return lorentz::reorthonormalize(Y);
}

Monodromy monodromy_smooth(const loops::LoopLift& lift, double lambda,
                           int base_substeps, double gate_tol, int max_substeps) {
    const int S = lift.size();
    Monodromy out;
    out.spectral_parameter = lambda;
    Mat coarse = transport_smooth(lift, lambda, 0, S, base_substeps);
    int sub = base_substeps;
    while (true) {
        const Mat fine = transport_smooth(lift, lambda, 0, S, 2 * sub);
        const double change = (fine - coarse).cwiseAbs().maxCoeff();
        if (change <= gate_tol || 2 * sub >= max_substeps) {
            out.map = fine;
            out.steps = S * 2 * sub;
            out.defect = lorentz::lorentz_defect(out.map);
            return out;
        }
        coarse = fine;
        sub *= 2;
    }
}

Mat discrete_edge_connection(const loops::LoopLift& lift, int j, double lambda) {
    if (lift.smooth) throw ConfigError("discrete_edge_connection: smooth lift");
    const int l = lift.size();
    const int N = lift.ambient_dim() + 2;
    j = ((j % l) + l) % l;
    const Vec Xj = lift.X.row(j);
    const Vec Xj1 = lift.X.row((j + 1) % l);
    const double m = lift.polarization(j);
    if (std::abs(m - lambda) <= 1e-12 * (std::abs(m) + std::abs(lambda)))
        throw PoleAtLambdaEqualsM("discrete_edge_connection: lambda = m on edge " +
                                  std::to_string(j));
    const double ip = inner(Xj, Xj1);
    if (std::abs(ip) <= 1e-14 * Xj.norm() * Xj1.norm())
        throw CoincidentVertices("discrete_edge_connection: coincident vertices at edge " +
                                 std::to_string(j));
    Vec JXj = Xj, JXj1 = Xj1;
    JXj(N - 1) = -JXj(N - 1);
    JXj1(N - 1) = -JXj1(N - 1);
    const double c = lambda / (m * ip);
    return Mat::Identity(N, N) +
           c * ((m / (m - lambda)) * (Xj1 * JXj.transpose()) - Xj * JXj1.transpose());
}

Monodromy monodromy_discrete(const loops::LoopLift& lift, double lambda) {
    const int l = lift.size();
    const int N = lift.ambient_dim() + 2;
    Monodromy out;
    out.spectral_parameter = lambda;
    out.steps = l;
    Mat P = Mat::Identity(N, N);
    for (int j = 0; j < l; ++j) P = discrete_edge_connection(lift, j, lambda) * P;
    out.map = std::move(P);
    out.defect = lorentz::lorentz_defect(out.map);
    return out;
}

Monodromy monodromy(const loops::LoopLift& lift, double lambda,
                    int base_substeps, double gate_tol) {
    if (lift.smooth) return monodromy_smooth(lift, lambda, base_substeps, gate_tol);
    return monodromy_discrete(lift, lambda);
}

Mat transport_section(const loops::LoopLift& lift, double lambda, const Vec& v0,
                      int substeps) {
    if (!lift.smooth) throw ConfigError("transport_section: discrete lift");
    const int S = lift.size();
    const int N = lift.ambient_dim() + 2;
    if (v0.size() != N) throw DimensionMismatch("transport_section: bad initial vector");
    const CoefficientTable tab = build_table(lift, lambda);
    const double h = (2.0 * M_PI / S) / substeps;

    Mat out(S + 1, N);
    Vec tau = v0 / v0.norm();
    out.row(0) = tau;
    for (int iv = 0; iv < S; ++iv) {
        for (int k = 0; k < substeps; ++k) {
            const double u0 = static_cast<double>(k) / substeps;
            tau = rk4_step<Vec>(tab, iv, u0, 1.0 / substeps, h, tau);
        }
        tau /= tau.norm();
        out.row(iv + 1) = tau;
    }
    return out;
}

}  // namespace isothermic::transport
