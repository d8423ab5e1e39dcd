#pragma once

#include "isothermic/bianchi.hpp"
#include "isothermic/run_config.hpp"
#include "isothermic/torus.hpp"
#include "isothermic/verify.hpp"

#include <optional>

namespace isothermic::pipeline {

// Shared orchestration for the transform -> cube -> torus -> verify commands.
struct BaseLoop {
    bool smooth = true;
    std::optional<loops::SmoothLoop> smooth_loop;
    std::optional<loops::DiscreteLoop> discrete_loop;

    const Mat& samples() const {
        return smooth ? smooth_loop->samples : discrete_loop->vertices;
    }
    Vec polarization() const {
        return smooth ? smooth_loop->polarization : discrete_loop->edge_polarization;
    }
};

BaseLoop make_base_loop(const config::RunConfig& c);

// First-layer transforms per the config, with off-plane moves applied. The
// default off-plane angles are pi/4, pi/8, ... per distinct axis when a
// transform does not set one.
std::vector<darboux::DarbouxTransform> build_first_layer(const config::RunConfig& c,
                                                         const BaseLoop& base);

bianchi::BianchiCube build_cube(const config::RunConfig& c, const BaseLoop& base,
                                const std::vector<darboux::DarbouxTransform>& layer);

torus::GridMap make_grid(const config::RunConfig& c, int directions);

torus::TorusNet build_net(const config::RunConfig& c, const bianchi::BianchiCube& cube,
                          const torus::GridMap& grid);

int net_k(const torus::TorusNet& net);

}  // namespace isothermic::pipeline
