#pragma once

#include "isothermic/bianchi.hpp"
#include "isothermic/types.hpp"

#include <string>
#include <vector>

namespace isothermic::torus {

// Cyclic (k-1)-dimensional grid of cube vertices. Neighboring grid points
// must map to subsets differing in exactly one direction.
struct GridMap {
    std::vector<int> shape;                  // l_1, ..., l_{k-1}, each >= 2
    std::vector<bianchi::CubeIndex> assignment;  // row-major over the shape

    int dims() const { return static_cast<int>(shape.size()); }
    int point_count() const;
    int flat_index(const std::vector<int>& coord) const;
    std::vector<int> coord_of(int flat) const;
    int neighbor(int flat, int direction) const;  // +1 step, cyclic
    bianchi::CubeIndex at(int flat) const { return assignment[flat]; }
};

// Throws GridMapInvalid unless adjacency and quad nondegeneracy hold and all
// subsets address directions below N.
void validate_grid_map(const GridMap& grid, int N);

// Snake cycle {}, {1}, {1,2}, {2}, {2,3}, {3}, ..., {N-1,N}, {N} of length 2N
// (for N = 1: {}, {1}). Visits the base loop and every singleton.
GridMap default_walk_2torus(int N);

// (k-1)-dimensional product: direction 1 snakes over direction indices
// {k-1, ..., N}; directions d = 2..k-1 toggle index d-1; assignments combine
// by symmetric difference.
GridMap product_grid_map(int N, int k);

// GridMap files:
//   gridmap k=<int> shape=<l1,l2,...>
//   <coord...> : <sorted direction indices or -> (one line per grid point)
GridMap read_grid_map_file(const std::string& path);
void write_grid_map_file(const std::string& path, const GridMap& grid);

struct TorusNet {
    bool semi_discrete = true;  // smooth loop direction
    int ambient_dim = 0;
    int samples = 0;
    GridMap grid;
    std::vector<Mat> loops;     // per grid point, samples x n (loop data bit-for-bit)
    Vec polarization;           // loop-direction polarization
    std::vector<double> mus;    // cube spectral parameters (per direction)
    std::vector<double> closure_gaps;  // per grid point, from cube provenance
    // Spectral label of each grid edge: direction r (1-based) toggled between
    // grid point `flat` and its +1 neighbor in grid direction d; indexed
    // [flat * dims + d].
    std::vector<int> edge_direction;
};

TorusNet extract_torus(const bianchi::BianchiCube& cube, const GridMap& grid,
                       bool semi_discrete);

// Affine rank: singular values of the centered cloud above rel_tol * largest.
int fullness_rank(const Mat& points, double rel_tol = 1e-8);

// All net points stacked (loops concatenated) for rank checks and export.
Mat point_cloud(const TorusNet& net);

}  // namespace isothermic::torus
