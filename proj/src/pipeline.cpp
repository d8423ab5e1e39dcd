#include "isothermic/pipeline.hpp"

namespace isothermic::pipeline {

BaseLoop make_base_loop(const config::RunConfig& c) {
    config::require_loop_settings(c);
    BaseLoop base;
    if (!c.loop_file.empty()) {
        const loops::LoopFile f = loops::read_loop_file(c.loop_file);
        base.smooth = f.smooth;
        if (f.smooth)
            base.smooth_loop = loops::make_smooth_loop(f.samples, f.polarization);
        else
            base.discrete_loop = loops::make_discrete_loop(f.samples, f.polarization);
        return base;
    }
    base.smooth = c.smooth;
    if (c.smooth) {
        base.smooth_loop = loops::make_circle(c.n, c.size, c.polarization);
    } else {
        base.discrete_loop =
            loops::make_discrete_circle(c.n, c.size, c.pol_arclength ? 0.0 : c.polarization);
    }
    return base;
}

std::vector<darboux::DarbouxTransform> build_first_layer(const config::RunConfig& c,
                                                         const BaseLoop& base) {
    config::require_transforms(c);
    darboux::TransformOptions opts;
    opts.substeps = c.substeps;
    opts.gate_tol = c.tol.monodromy_gate;
    opts.tol = c.tol;

    std::vector<darboux::DarbouxTransform> layer;
    int moved = 0;
    for (const config::TransformSpec& spec : c.transforms) {
        darboux::DarbouxTransform t =
            base.smooth
                ? darboux::closed_darboux_smooth(*base.smooth_loop, spec.mu,
                                                 spec.eigen_index, opts)
                : darboux::closed_darboux_discrete(*base.discrete_loop, spec.mu,
                                                   spec.eigen_index, opts);
        if (spec.off_plane_axis != 0) {
            const double angle = spec.angle_set ? spec.angle : M_PI / (4 << moved);
            t = base.smooth
                    ? darboux::move_transform_off_plane(*base.smooth_loop, t,
                                                        spec.off_plane_axis, angle)
                    : darboux::move_transform_off_plane(*base.discrete_loop, t,
                                                        spec.off_plane_axis, angle);
            ++moved;
        }
        layer.push_back(std::move(t));
    }
    return layer;
}

bianchi::BianchiCube build_cube(const config::RunConfig& c, const BaseLoop& base,
                                const std::vector<darboux::DarbouxTransform>& layer) {
    bianchi::BuildOptions opts;
    opts.policy = c.policy();
    opts.tol = c.tol;
    opts.consistency_fail = c.tol.cube_consistency * 10.0;
    return bianchi::build_cube(base.samples(), base.polarization(), base.smooth, layer, opts);
}

torus::GridMap make_grid(const config::RunConfig& c, int directions) {
    switch (c.grid_type) {
        case config::GridType::Default2Torus:
            return torus::default_walk_2torus(directions);
        case config::GridType::Product:
            if (c.k < 2) throw ConfigError("config: [grid] k must be >= 2");
            return torus::product_grid_map(directions, c.k);
        case config::GridType::File: {
            if (c.grid_path.empty())
                throw ConfigError("config: [grid] type=file requires path");
            torus::GridMap g = torus::read_grid_map_file(c.grid_path);
            torus::validate_grid_map(g, directions);
            return g;
        }
    }
    throw ConfigError("config: unreachable grid type");
}

torus::TorusNet build_net(const config::RunConfig& c, const bianchi::BianchiCube& cube,
                          const torus::GridMap& grid) {
    (void)c;
    return torus::extract_torus(cube, grid, cube.smooth);
}

int net_k(const torus::TorusNet& net) { return net.grid.dims() + 1; }

}  // namespace isothermic::pipeline
