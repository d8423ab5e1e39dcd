#include "isothermic/loops.hpp"

#include "isothermic/lorentz.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace isothermic::loops {

SmoothLoop make_circle(int n, int S, double polarization) {
    if (n < 2) throw ConfigError("make_circle: ambient dimension must be >= 2");
    if (S < 16) throw ConfigError("make_circle: need at least 16 samples");
    if (polarization <= 0.0) throw ConfigError("make_circle: polarization must be positive");
    SmoothLoop loop;
    loop.samples = Mat::Zero(S, n);
    for (int i = 0; i < S; ++i) {
        const double t = 2.0 * M_PI * i / S;
        loop.samples(i, 0) = std::cos(t);
        loop.samples(i, 1) = std::sin(t);
    }
    loop.polarization = Vec::Constant(S, polarization);
    CircleTag tag;
    tag.center = Vec::Zero(n);
    tag.radius = 1.0;
    loop.circle = tag;
    return loop;
}

DiscreteLoop make_discrete_circle(int n, int l, double polarization) {
    if (n < 2) throw ConfigError("make_discrete_circle: ambient dimension must be >= 2");
    if (l < 3) throw ConfigError("make_discrete_circle: need l >= 3");
    DiscreteLoop loop;
    loop.vertices = Mat::Zero(l, n);
    for (int j = 0; j < l; ++j) {
        const double t = 2.0 * M_PI * j / l;
        loop.vertices(j, 0) = std::cos(t);
        loop.vertices(j, 1) = std::sin(t);
    }
    double m = polarization;
    if (m == 0.0) {
        // Discrete arc-length polarization: inverse squared edge length.
        const double edge = 2.0 * std::sin(M_PI / l);
        m = 1.0 / (edge * edge);
    }
    loop.edge_polarization = Vec::Constant(l, m);
    return loop;
}

SmoothLoop make_smooth_loop(Mat samples, Vec polarization) {
    const int S = static_cast<int>(samples.rows());
    if (S < 16) throw ConfigError("make_smooth_loop: need at least 16 samples");
    if (polarization.size() == 0) polarization = Vec::Constant(S, 1.0);
    if (polarization.size() != S)
        throw ConfigError("make_smooth_loop: polarization size mismatch");
    for (int i = 0; i < S; ++i)
        if (polarization(i) <= 0.0)
            throw ConfigError("make_smooth_loop: smooth polarization must be positive");
    SmoothLoop loop;
    loop.samples = std::move(samples);
    loop.polarization = std::move(polarization);
    return loop;
}

DiscreteLoop make_discrete_loop(Mat vertices, Vec edge_polarization) {
    const int l = static_cast<int>(vertices.rows());
    if (l < 3) throw ConfigError("make_discrete_loop: need l >= 3");
    for (int j = 0; j < l; ++j) {
        const Vec d = vertices.row((j + 1) % l) - vertices.row(j);
        if (d.norm() == 0.0)
            throw ConfigError("make_discrete_loop: consecutive vertices coincide at " +
                              std::to_string(j));
    }
    if (edge_polarization.size() == 0) edge_polarization = Vec::Constant(l, 1.0);
    if (edge_polarization.size() != l)
        throw ConfigError("make_discrete_loop: polarization size mismatch");
    for (int j = 0; j < l; ++j)
        if (edge_polarization(j) == 0.0)
            throw ConfigError("make_discrete_loop: edge polarization must be nonzero");
    DiscreteLoop loop;
    loop.vertices = std::move(vertices);
    loop.edge_polarization = std::move(edge_polarization);
    return loop;
}

namespace {

Vec derivative_lift(const Vec& x, const Vec& xt) {
    const int n = static_cast<int>(x.size());
    Vec Xt(n + 2);
    Xt.head(n) = 2.0 * xt;
    const double dot = x.dot(xt);
    Xt(n) = -2.0 * dot;
    Xt(n + 1) = 2.0 * dot;
    return Xt;
}

}  // namespace

LoopLift lift_loop(const SmoothLoop& loop) {
    const int S = loop.size();
    const int n = loop.dim();
    LoopLift out;
    out.smooth = true;
    out.polarization = loop.polarization;
    out.X = Mat(S, n + 2);
    out.Xt = Mat(S, n + 2);
    for (int i = 0; i < S; ++i) out.X.row(i) = lorentz::lift(loop.samples.row(i));

    if (loop.circle) {
        const CircleTag& c = *loop.circle;
        const bool constant_m =
            (loop.polarization.maxCoeff() - loop.polarization.minCoeff()) == 0.0;
        if (constant_m) out.circle = c;
        for (int i = 0; i < S; ++i) {
            const double t = 2.0 * M_PI * i / S;
            Vec xt = Vec::Zero(n);
            xt(c.axis_u) = -c.radius * std::sin(t);
            xt(c.axis_v) = c.radius * std::cos(t);
            out.Xt.row(i) = derivative_lift(loop.samples.row(i), xt);
        }
    } else {
        // Order-4 periodic central differences.
        const double h = 2.0 * M_PI / S;
        for (int i = 0; i < S; ++i) {
            const Vec xm2 = loop.point(i - 2), xm1 = loop.point(i - 1);
            const Vec xp1 = loop.point(i + 1), xp2 = loop.point(i + 2);
            const Vec xt = (xm2 - 8.0 * xm1 + 8.0 * xp1 - xp2) / (12.0 * h);
            if (xt.norm() == 0.0)
                throw NonImmersedSample("lift_loop: vanishing derivative at sample " +
                                        std::to_string(i));
            out.Xt.row(i) = derivative_lift(loop.samples.row(i), xt);
        }
    }
    return out;
}

LoopLift lift_loop(const DiscreteLoop& loop) {
    const int l = loop.size();
    LoopLift out;
    out.smooth = false;
    out.polarization = loop.edge_polarization;
    out.X = Mat(l, loop.dim() + 2);
    for (int j = 0; j < l; ++j) out.X.row(j) = lorentz::lift(loop.vertices.row(j));
    return out;
}

double closure_gap(const Mat& propagated) {
    const int rows = static_cast<int>(propagated.rows());
    if (rows < 2) return 0.0;
    return (propagated.row(rows - 1) - propagated.row(0)).norm();
}

LoopFile read_loop_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("read_loop_file: cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("read_loop_file: empty file " + path);

    int n = -1, size = -1;
    std::string kind;
    std::istringstream hs(header);
    std::string tok;
    hs >> tok;
    if (tok != "loop") throw ConfigError("read_loop_file: bad header: " + header);
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ConfigError("read_loop_file: bad header token: " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "n") n = std::stoi(val);
        else if (key == "kind") kind = val;
        else if (key == "size") size = std::stoi(val);
        else throw ConfigError("read_loop_file: unknown header key: " + key);
    }
    if (n < 2 || size < 3 || (kind != "smooth" && kind != "discrete"))
        throw ConfigError("read_loop_file: invalid header: " + header);

    LoopFile out;
    out.smooth = (kind == "smooth");
    out.samples = Mat(size, n);
    std::string line;
    for (int i = 0; i < size; ++i) {
        if (!std::getline(in, line))
            throw ConfigError("read_loop_file: truncated sample block");
        std::istringstream ls(line);
        for (int j = 0; j < n; ++j)
            if (!(ls >> out.samples(i, j)))
                throw ConfigError("read_loop_file: bad sample line: " + line);
    }
    if (std::getline(in, line) && !line.empty()) {
        if (line != "polarization")
            throw ConfigError("read_loop_file: expected 'polarization', got: " + line);
        out.polarization = Vec(size);
        for (int i = 0; i < size; ++i) {
            if (!std::getline(in, line))
                throw ConfigError("read_loop_file: truncated polarization block");
            out.polarization(i) = std::stod(line);
        }
    }
    return out;
}

namespace {

void write_loop_impl(const std::string& path, const Mat& samples, const Vec& pol,
                     bool smooth, int precision) {
    std::ofstream outf(path);
    if (!outf) throw ConfigError("write_loop_file: cannot open " + path);
    outf << "loop n=" << samples.cols() << " kind=" << (smooth ? "smooth" : "discrete")
         << " size=" << samples.rows() << "\n";
    char buf[64];
    for (int i = 0; i < samples.rows(); ++i) {
        for (int j = 0; j < samples.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.*g", precision, samples(i, j));
            outf << (j ? " " : "") << buf;
        }
        outf << "\n";
    }
    outf << "polarization\n";
    for (int i = 0; i < pol.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, pol(i));
        outf << buf << "\n";
    }
}

}  // namespace

void write_loop_file(const std::string& path, const SmoothLoop& loop, int precision) {
    write_loop_impl(path, loop.samples, loop.polarization, true, precision);
}

void write_loop_file(const std::string& path, const DiscreteLoop& loop, int precision) {
    write_loop_impl(path, loop.vertices, loop.edge_polarization, false, precision);
}

}  // namespace isothermic::loops
