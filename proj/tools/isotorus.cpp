#include "isothermic/darboux.hpp"
#include "isothermic/lorentz.hpp"
#include "isothermic/obj_export.hpp"
#include "isothermic/pipeline.hpp"
#include "isothermic/run_config.hpp"
#include "isothermic/transport.hpp"
#include "isothermic/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>

namespace {

using namespace isothermic;

struct CommonArgs {
    std::string config_path;
    std::string out_dir = ".";
    unsigned long long seed = 0;
    double tolerance_scale = 1.0;
};

config::RunConfig load(const CommonArgs& args) {
    config::RunConfig c = config::parse_config_file(args.config_path);
    if (args.tolerance_scale <= 0.0)
        throw ConfigError("--tolerance-scale must be positive");
    c.tol = c.tol.scaled(args.tolerance_scale);
    std::filesystem::create_directories(args.out_dir);
    return c;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    return (std::filesystem::path(args.out_dir) / name).string();
}

void add_check(std::vector<verify::CheckReport>& reports, const std::string& name,
               const std::string& scope, double value, double tol) {
    verify::CheckReport r;
    r.name = name;
    r.scope = scope;
    r.value = value;
    r.tol = tol;
    r.pass = value <= tol;
    reports.push_back(r);
}

void write_eigen_diagnostics(const std::string& path, const pipeline::BaseLoop& base,
                             const config::RunConfig& c) {
    std::ofstream f(path);
    char buf[160];
    for (const config::TransformSpec& spec : c.transforms) {
        const loops::LoopLift lift = base.smooth ? loops::lift_loop(*base.smooth_loop)
                                                 : loops::lift_loop(*base.discrete_loop);
        const transport::Monodromy P =
            transport::monodromy(lift, spec.mu, c.substeps, c.tol.monodromy_gate);
        const lorentz::EigenSpectrum spec_out =
            lorentz::real_lightlike_eigenvectors(P.map, c.tol);
        std::snprintf(buf, sizeof(buf),
                      "mu=%.12g monodromy_defect=%.3e steps=%d resonant=%d count=%zu\n",
                      spec.mu, P.defect, P.steps, spec_out.resonant ? 1 : 0,
                      spec_out.vectors.size());
        f << buf;
        for (std::size_t i = 0; i < spec_out.vectors.size(); ++i) {
            const auto& ev = spec_out.vectors[i];
            std::snprintf(buf, sizeof(buf),
                          "  eigenvector index=%zu eigenvalue=%.12g lightlike_defect=%.3e "
                          "at_infinity=%d\n",
                          i, ev.eigenvalue, ev.lightlike_defect, ev.at_infinity ? 1 : 0);
            f << buf;
        }
    }
}

int cmd_transform(const CommonArgs& args) {
    const config::RunConfig c = load(args);
    config::require_loop_settings(c);
    config::require_transforms(c);
    const pipeline::BaseLoop base = pipeline::make_base_loop(c);
    const auto layer = pipeline::build_first_layer(c, base);

    if (base.smooth)
        loops::write_loop_file(out_path(args, "loop_base.txt"), *base.smooth_loop);
    else
        loops::write_loop_file(out_path(args, "loop_base.txt"), *base.discrete_loop);

    std::vector<verify::CheckReport> reports;
    for (std::size_t i = 0; i < layer.size(); ++i) {
        const auto& t = layer[i];
        const std::string name = "transform_" + std::to_string(i) + ".txt";
        if (base.smooth) {
            loops::SmoothLoop out_loop;
            out_loop.samples = t.result;
            out_loop.polarization = base.smooth_loop->polarization;
            loops::write_loop_file(out_path(args, name), out_loop);
        } else {
            loops::DiscreteLoop out_loop;
            out_loop.vertices = t.result;
            out_loop.edge_polarization = base.discrete_loop->edge_polarization;
            loops::write_loop_file(out_path(args, name), out_loop);
        }
        add_check(reports, "transform_closure", "transform(" + std::to_string(i) + ")",
                  t.closure_gap, base.smooth ? c.tol.closure : c.tol.closure_discrete);
        add_check(reports, "section_lightlike", "transform(" + std::to_string(i) + ")",
                  t.max_lightlike_defect, c.tol.lightlike);
        if (!base.smooth) {
            // Dual-route agreement against cross-ratio propagation.
            const auto prop = darboux::cross_ratio_propagate(
                *base.discrete_loop, t.mu, t.result.row(0));
            const double agree =
                (prop.propagated.topRows(t.result.rows()) - t.result)
                    .rowwise().norm().maxCoeff();
            add_check(reports, "dual_route_agreement",
                      "transform(" + std::to_string(i) + ")", agree,
                      c.tol.lorentz_defect);
        }
    }
    write_eigen_diagnostics(out_path(args, "eigen.txt"), base, c);
    {
        // Per-transform section diagnostics (reported, not fatal).
        std::ofstream f(out_path(args, "eigen.txt"), std::ios::app);
        for (std::size_t i = 0; i < layer.size(); ++i) {
            f << "transform " << i << " mu=" << layer[i].mu
              << " resonant=" << (layer[i].resonant ? 1 : 0)
              << " infinity_samples=" << layer[i].infinity_flags.size()
              << " touch_samples=" << layer[i].touch_flags.size() << "\n";
        }
    }
    verify::write_report(out_path(args, "report.txt"), reports, c.precision);
    std::cout << verify::format_report(reports, c.precision);
    return verify::all_pass(reports) ? 0 : 1;
}

int cmd_resonance_scan(const CommonArgs& args) {
    const config::RunConfig c = load(args);
    config::require_loop_settings(c);
    config::require_scan(c);
    const pipeline::BaseLoop base = pipeline::make_base_loop(c);
    const loops::LoopLift lift = base.smooth ? loops::lift_loop(*base.smooth_loop)
                                             : loops::lift_loop(*base.discrete_loop);
    darboux::ScanOptions opts;
    opts.substeps = c.substeps;
    opts.gate_tol = c.tol.monodromy_gate;
    opts.accept = c.tol.resonance;
    opts.policy = c.policy();
    opts.tol = c.tol;
    const darboux::ResonanceReport report =
        darboux::resonance_scan(lift, c.scan_min, c.scan_max, c.scan_grid, opts);

    std::ofstream f(out_path(args, "resonances.txt"));
    char buf[160];
    std::mt19937_64 rng(args.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int n = lift.ambient_dim();
    for (const auto& pt : report.points) {
        std::snprintf(buf, sizeof(buf), "resonance mu=%.12e defect=%.3e sign=%+d width=%.3e",
                      pt.mu, pt.defect, pt.sign, pt.width);
        f << buf;
        // Closure of a random lightlike initial condition at the refined point.
        Vec x(n);
        for (int d = 0; d < n; ++d) x(d) = gauss(rng);
        darboux::TransformOptions topts;
        topts.substeps = c.substeps;
        topts.gate_tol = c.tol.monodromy_gate;
        topts.tol = c.tol;
        const double gap =
            base.smooth
                ? darboux::darboux_smooth_from_vector(*base.smooth_loop, pt.mu,
                                                      lorentz::lift(x), topts)
                      .closure_gap
                : darboux::darboux_discrete_from_vector(*base.discrete_loop, pt.mu,
                                                        lorentz::lift(x), topts)
                      .closure_gap;
        std::snprintf(buf, sizeof(buf), " random_init_closure=%.3e\n", gap);
        f << buf;
    }
    std::snprintf(buf, sizeof(buf), "summary points=%zu\n", report.points.size());
    f << buf;
    std::cout << "resonance points: " << report.points.size() << "\n";
    return 0;
}

int run_net_command(const CommonArgs& args, bool want_obj, bool want_checks,
                    bool want_manifest) {
    const config::RunConfig c = load(args);
    const pipeline::BaseLoop base = pipeline::make_base_loop(c);
    const auto layer = pipeline::build_first_layer(c, base);
    const bianchi::BianchiCube cube = pipeline::build_cube(c, base, layer);
    const torus::GridMap grid = pipeline::make_grid(c, cube.directions);
    const torus::TorusNet net = pipeline::build_net(c, cube, grid);

    if (want_manifest) {
        std::ofstream f(out_path(args, "cube_manifest.txt"));
        char buf[200];
        for (int mask = 0; mask < cube.vertex_count(); ++mask) {
            std::string subset;
            for (int b = 0; b < cube.directions; ++b)
                if (mask & (1 << b)) subset += (subset.empty() ? "" : ",") + std::to_string(b + 1);
            if (subset.empty()) subset = "-";
            std::snprintf(buf, sizeof(buf),
                          "vertex mask=%d subset=%s closure_gap=%.*e provenance=%s\n", mask,
                          subset.c_str(), c.precision, cube.closure_gaps[mask],
                          cube.provenance[mask].c_str());
            f << buf;
        }
        std::snprintf(buf, sizeof(buf), "consistency max_dev=%.*e\n", c.precision,
                      cube.max_consistency_dev);
        f << buf;
        std::filesystem::create_directories(out_path(args, "loops"));
        for (int mask = 0; mask < cube.vertex_count(); ++mask) {
            const std::string path =
                out_path(args, "loops/vertex_" + std::to_string(mask) + ".txt");
            if (cube.smooth) {
                loops::SmoothLoop l;
                l.samples = cube.loops[mask];
                l.polarization = cube.polarization;
                loops::write_loop_file(path, l);
            } else {
                loops::DiscreteLoop l;
                l.vertices = cube.loops[mask];
                l.edge_polarization = cube.polarization;
                loops::write_loop_file(path, l);
            }
        }
    }

    std::vector<verify::CheckReport> reports;
    if (want_checks) {
        reports = verify::check_theorem_instance(net, c.n, pipeline::net_k(net), c.tol,
                                                 c.policy());
        // Cube edge laws along every grid edge.
        double edge_worst = 0.0;
        bool edge_pass = true;
        for (int p = 0; p < grid.point_count(); ++p) {
            for (int d = 0; d < grid.dims(); ++d) {
                const int q = grid.neighbor(p, d);
                if (grid.shape[d] == 2 && q < p) continue;
                const bianchi::CubeIndex s =
                    grid.at(p) & grid.at(q);  // common subset is the smaller one
                const int r = net.edge_direction[p * grid.dims() + d];
                const auto er = bianchi::verify_cube_edge(cube, s, r, c.tol);
                edge_worst = std::max(edge_worst, er.max_law_dev);
                edge_pass = edge_pass && er.pass;
            }
        }
        verify::CheckReport edge;
        edge.name = "cube_edge_law";
        edge.scope = "edge";
        edge.value = edge_worst;
        edge.tol = cube.smooth ? c.tol.limit : c.tol.algebraic;
        edge.pass = edge_pass;
        reports.push_back(edge);
        verify::write_report(out_path(args, "report.txt"), reports, c.precision);
        std::cout << verify::format_report(reports, c.precision);
    }

    if (want_obj) obj::export_obj(net, out_path(args, "mesh.obj"), c.precision);

    if (want_checks && !verify::all_pass(reports)) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"isotorus: isothermic tori from Darboux transforms of polarized loops"};
    app.require_subcommand(1);

    CommonArgs args;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", args.config_path, "configuration file")->required();
        sub->add_option("--out", args.out_dir, "output directory");
        sub->add_option("--seed", args.seed, "seed for randomized diagnostics");
        sub->add_option("--tolerance-scale", args.tolerance_scale,
                        "scale factor applied to all tolerances");
    };

    CLI::App* transform = app.add_subcommand("transform", "closed Darboux transforms");
    CLI::App* scan = app.add_subcommand("resonance-scan", "scan for resonance points");
    CLI::App* cube = app.add_subcommand("cube", "build a Bianchi cube and its manifest");
    CLI::App* torus_cmd = app.add_subcommand("torus", "build, verify and export a torus");
    CLI::App* verify_cmd = app.add_subcommand("verify", "build and verify (no export)");
    CLI::App* export_cmd = app.add_subcommand("export", "build and export (no checks)");
    for (CLI::App* sub : {transform, scan, cube, torus_cmd, verify_cmd, export_cmd})
        add_common(sub);

    CLI11_PARSE(app, argc, argv);

    try {
        if (transform->parsed()) return cmd_transform(args);
        if (scan->parsed()) return cmd_resonance_scan(args);
        if (cube->parsed()) return run_net_command(args, false, true, true);
        if (torus_cmd->parsed()) return run_net_command(args, true, true, true);
        if (verify_cmd->parsed()) return run_net_command(args, false, true, false);
        if (export_cmd->parsed()) return run_net_command(args, true, false, false);
    } catch (const isothermic::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const isothermic::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
