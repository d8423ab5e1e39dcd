#include "isothermic/torus.hpp"

#include <Eigen/SVD>

#include <bit>
#include <fstream>
#include <sstream>

namespace isothermic::torus {

int GridMap::point_count() const {
    int n = 1;
    for (int l : shape) n *= l;
    return n;
}

int GridMap::flat_index(const std::vector<int>& coord) const {
    int idx = 0;
    for (int d = 0; d < dims(); ++d) idx = idx * shape[d] + coord[d];
    return idx;
}

std::vector<int> GridMap::coord_of(int flat) const {
    std::vector<int> c(dims());
    for (int d = dims() - 1; d >= 0; --d) {
        c[d] = flat % shape[d];
        flat /= shape[d];
    }
    return c;
}

int GridMap::neighbor(int flat, int direction) const {
    std::vector<int> c = coord_of(flat);
    c[direction] = (c[direction] + 1) % shape[direction];
    return flat_index(c);
}

void validate_grid_map(const GridMap& grid, int N) {
    if (grid.dims() < 1) throw GridMapInvalid("grid map: no directions");
    for (int l : grid.shape)
        if (l < 2) throw GridMapInvalid("grid map: every shape entry must be >= 2");
    if (static_cast<int>(grid.assignment.size()) != grid.point_count())
        throw GridMapInvalid("grid map: assignment size mismatch");
    for (bianchi::CubeIndex s : grid.assignment)
        if (s >= (1u << N)) throw GridMapInvalid("grid map: subset uses unknown direction");

    const int P = grid.point_count();
    for (int p = 0; p < P; ++p) {
        for (int d = 0; d < grid.dims(); ++d) {
            const int q = grid.neighbor(p, d);
            const bianchi::CubeIndex diff = grid.at(p) ^ grid.at(q);
            if (std::popcount(diff) != 1)
                throw GridMapInvalid("grid map: neighbors differ in " +
                                     std::to_string(std::popcount(diff)) + " directions");
        }
    }
    // Elementary 2-cells: distinct toggles, four distinct subsets.
    for (int p = 0; p < P; ++p) {
        for (int a = 0; a < grid.dims(); ++a) {
            for (int b = a + 1; b < grid.dims(); ++b) {
                const int pa = grid.neighbor(p, a);
                const int pb = grid.neighbor(p, b);
                const int pab = grid.neighbor(pa, b);
                const bianchi::CubeIndex ta = grid.at(p) ^ grid.at(pa);
                const bianchi::CubeIndex tb = grid.at(p) ^ grid.at(pb);
                if (ta == tb)
                    throw GridMapInvalid("grid map: 2-cell toggles the same direction twice");
                const bianchi::CubeIndex s0 = grid.at(p), s1 = grid.at(pa),
                                         s2 = grid.at(pab), s3 = grid.at(pb);
                if (s0 == s2 || s1 == s3 || s0 == s1 || s0 == s3 || s1 == s2 || s2 == s3)
                    throw GridMapInvalid("grid map: degenerate 2-cell");
            }
        }
    }
}

GridMap default_walk_2torus(int N) {
    if (N < 1) throw ConfigError("default_walk_2torus: N >= 1 required");
    GridMap g;
    std::vector<bianchi::CubeIndex> cyc;
    cyc.push_back(0);
    for (int d = 1; d < N; ++d) {
        cyc.push_back(1u << (d - 1));
        cyc.push_back((1u << (d - 1)) | (1u << d));
    }
    cyc.push_back(1u << (N - 1));
    g.shape = {static_cast<int>(cyc.size())};
    g.assignment = std::move(cyc);
    validate_grid_map(g, N);
    return g;
}

GridMap product_grid_map(int N, int k) {
    if (k < 2) throw ConfigError("product_grid_map: k >= 2 required");
    if (N < k - 1) throw InsufficientDirections("product_grid_map: need N >= k-1, got N = " +
                                                std::to_string(N));
    // Direction 1: snake over direction indices {k-1, ..., N} (1-based).
    std::vector<bianchi::CubeIndex> snake;
    snake.push_back(0);
    for (int d = k - 1; d < N; ++d) {
        snake.push_back(1u << (d - 1));
        snake.push_back((1u << (d - 1)) | (1u << d));
    }
    snake.push_back(1u << (N - 1));

    GridMap g;
    g.shape.push_back(static_cast<int>(snake.size()));
    for (int d = 2; d <= k - 1; ++d) g.shape.push_back(2);

    const int P = g.point_count();
    g.assignment.resize(P);
    for (int p = 0; p < P; ++p) {
        // Row-major coordinates.
        int rest = p;
        std::vector<int> coord(g.dims());
        for (int d = g.dims() - 1; d >= 0; --d) {
            coord[d] = rest % g.shape[d];
            rest /= g.shape[d];
        }
        bianchi::CubeIndex s = snake[coord[0]];
        for (int d = 1; d < g.dims(); ++d)
            if (coord[d] == 1) s ^= 1u << (d - 1);  // toggle direction index d (1-based d+1-1)
        g.assignment[p] = s;
    }
    validate_grid_map(g, N);
    return g;
}

GridMap read_grid_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("read_grid_map_file: cannot open " + path);
    std::string header;
    if (!std::getline(in, header)) throw ConfigError("read_grid_map_file: empty file");
    std::istringstream hs(header);
    std::string tok;
    hs >> tok;
    if (tok != "gridmap") throw ConfigError("read_grid_map_file: bad header: " + header);
    GridMap g;
    int k = -1;
    while (hs >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            throw ConfigError("read_grid_map_file: bad token " + tok);
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "k") {
            k = std::stoi(val);
        } else if (key == "shape") {
            std::istringstream ss(val);
            std::string item;
            while (std::getline(ss, item, ',')) g.shape.push_back(std::stoi(item));
        } else {
            throw ConfigError("read_grid_map_file: unknown key " + key);
        }
    }
    if (k < 2 || g.dims() != k - 1)
        throw ConfigError("read_grid_map_file: shape does not match k");
    g.assignment.assign(g.point_count(), 0);
    std::string line;
    int seen = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto colon = line.find(':');
        if (colon == std::string::npos)
            throw ConfigError("read_grid_map_file: bad line " + line);
        std::istringstream cs(line.substr(0, colon));
        std::vector<int> coord(g.dims());
        for (int d = 0; d < g.dims(); ++d)
            if (!(cs >> coord[d])) throw ConfigError("read_grid_map_file: bad coords " + line);
        std::istringstream ds(line.substr(colon + 1));
        bianchi::CubeIndex mask = 0;
        std::string item;
        while (ds >> item) {
            if (item == "-") break;
            mask |= 1u << (std::stoi(item) - 1);
        }
        g.assignment[g.flat_index(coord)] = mask;
        ++seen;
    }
    if (seen != g.point_count())
        throw ConfigError("read_grid_map_file: expected " + std::to_string(g.point_count()) +
                          " grid points, got " + std::to_string(seen));
    return g;
}

void write_grid_map_file(const std::string& path, const GridMap& grid) {
    std::ofstream out(path);
    if (!out) throw ConfigError("write_grid_map_file: cannot open " + path);
    out << "gridmap k=" << grid.dims() + 1 << " shape=";
    for (int d = 0; d < grid.dims(); ++d) out << (d ? "," : "") << grid.shape[d];
    out << "\n";
    for (int p = 0; p < grid.point_count(); ++p) {
        const auto coord = grid.coord_of(p);
        for (int d = 0; d < grid.dims(); ++d) out << coord[d] << " ";
        out << ":";
        const bianchi::CubeIndex mask = grid.at(p);
        if (mask == 0) {
            out << " -";
        } else {
            for (int b = 0; b < 32; ++b)
                if (mask & (1u << b)) out << " " << (b + 1);
        }
        out << "\n";
    }
}

TorusNet extract_torus(const bianchi::BianchiCube& cube, const GridMap& grid,
                       bool semi_discrete) {
    validate_grid_map(grid, cube.directions);
    if (semi_discrete != cube.smooth)
        throw ConfigError("extract_torus: net kind does not match cube loop kind");
    TorusNet net;
    net.semi_discrete = semi_discrete;
    net.grid = grid;
    net.polarization = cube.polarization;
    net.mus = cube.mus;
    const int P = grid.point_count();
    net.loops.reserve(P);
    for (int p = 0; p < P; ++p) {
        net.loops.push_back(cube.loop(grid.at(p)));
        net.closure_gaps.push_back(cube.closure_gaps[grid.at(p)]);
    }
    net.ambient_dim = static_cast<int>(net.loops[0].cols());
    net.samples = static_cast<int>(net.loops[0].rows());
    net.edge_direction.assign(P * grid.dims(), 0);
    for (int p = 0; p < P; ++p) {
        for (int d = 0; d < grid.dims(); ++d) {
            const bianchi::CubeIndex diff = grid.at(p) ^ grid.at(grid.neighbor(p, d));
            net.edge_direction[p * grid.dims() + d] = std::countr_zero(diff) + 1;
        }
    }
    return net;
}

int fullness_rank(const Mat& points, double rel_tol) {
    if (points.rows() < 2) throw ConfigError("fullness_rank: need at least 2 points");
    const Vec mean = points.colwise().mean();
    const Mat centered = points.rowwise() - mean.transpose();
    Eigen::JacobiSVD<Mat> svd(centered);
    const Vec sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * sv(0)) ++rank;
    return rank;
}

Mat point_cloud(const TorusNet& net) {
    const int P = static_cast<int>(net.loops.size());
    Mat cloud(P * net.samples, net.ambient_dim);
    for (int p = 0; p < P; ++p)
        cloud.middleRows(p * net.samples, net.samples) = net.loops[p];
    return cloud;
}

}  // namespace isothermic::torus
