#pragma once

#include "isothermic/parallel.hpp"
#include "isothermic/types.hpp"

#include <string>
#include <vector>

namespace isothermic::config {

struct TransformSpec {
    double mu = 0.0;
    int eigen_index = 0;
    int off_plane_axis = 0;  // 0 = keep in place; otherwise 3..n (1-based axis)
    double angle = M_PI / 4.0;
    bool angle_set = false;
};

enum class GridType { Default2Torus, Product, File };

struct RunConfig {
    int n = 0;
    bool smooth = true;
    int size = 0;            // samples (smooth) or vertices (discrete)
    double polarization = 1.0;
    bool pol_arclength = false;  // discrete: inverse squared edge length
    std::string loop_file;       // base loop from file instead of the circle

    std::vector<TransformSpec> transforms;

    GridType grid_type = GridType::Default2Torus;
    int k = 2;
    std::string grid_path;

    double scan_min = 0.0, scan_max = 0.0;
    int scan_grid = 0;

    int substeps = 4;
    bool parallel = true;
    int precision = 9;

    Tolerances tol;

    ExecPolicy policy() const { return parallel ? ExecPolicy::Parallel : ExecPolicy::Serial; }
};

// Line-oriented `key = value` format with bracketed sections ([transform],
// [grid], [scan], [tolerances], [output]). Unknown keys are rejected.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

// Validation shared by the commands that need each piece.
void require_loop_settings(const RunConfig& c);
void require_transforms(const RunConfig& c);
void require_scan(const RunConfig& c);

}  // namespace isothermic::config
