#pragma once

#include "isothermic/torus.hpp"

#include <string>

namespace isothermic::obj {

// Wavefront OBJ export. Vertices in grid-major, sample-minor order with fixed
// decimal precision (so identical configurations produce byte-identical
// files); one `l` polyline per loop; `f` quads between adjacent loops at
// adjacent samples with consistent orientation. Ambient dimensions above 3
// export their first three coordinates (full-precision data lives in the
// loop files).
std::string format_obj(const torus::TorusNet& net, int precision = 9);
void export_obj(const torus::TorusNet& net, const std::string& path, int precision = 9);

}  // namespace isothermic::obj
