#include "isothermic/obj_export.hpp"

#include <cstdio>
#include <fstream>

namespace isothermic::obj {

std::string format_obj(const torus::TorusNet& net, int precision) {
    std::string out;
    out += "# isotorus net: grid points=" + std::to_string(net.grid.point_count()) +
           " samples=" + std::to_string(net.samples) + "\n";
    char buf[160];
    const int P = net.grid.point_count();
    const int S = net.samples;
    const int nc = std::min(3, net.ambient_dim);

    for (int p = 0; p < P; ++p) {
        for (int s = 0; s < S; ++s) {
            out += "v";
            for (int c = 0; c < nc; ++c) {
                std::snprintf(buf, sizeof(buf), " %.*f", precision, net.loops[p](s, c));
                out += buf;
            }
            for (int c = nc; c < 3; ++c) {
                std::snprintf(buf, sizeof(buf), " %.*f", precision, 0.0);
                out += buf;
            }
            out += "\n";
        }
    }
    // Closed polyline per loop (1-based indices, repeating the start).
    for (int p = 0; p < P; ++p) {
        out += "l";
        for (int s = 0; s < S; ++s) out += " " + std::to_string(p * S + s + 1);
        out += " " + std::to_string(p * S + 1) + "\n";
    }
    // Quads across every grid edge (each unordered edge once).
    const auto& g = net.grid;
    for (int p = 0; p < P; ++p) {
        for (int d = 0; d < g.dims(); ++d) {
            const int q = g.neighbor(p, d);
            if (g.shape[d] == 2 && q < p) continue;
            for (int s = 0; s < S; ++s) {
                const int s1 = (s + 1) % S;
                std::snprintf(buf, sizeof(buf), "f %d %d %d %d\n", p * S + s + 1,
                              p * S + s1 + 1, q * S + s1 + 1, q * S + s + 1);
                out += buf;
            }
        }
    }
    return out;
}

void export_obj(const torus::TorusNet& net, const std::string& path, int precision) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("export_obj: cannot open " + path);
    const std::string data = format_obj(net, precision);
    f.write(data.data(), static_cast<std::streamsize>(data.size()));
}

}  // namespace isothermic::obj
