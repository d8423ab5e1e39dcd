#include "isothermic/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace isothermic::config {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad number for " + key + ": " + v);
    }
}

int to_int(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v, &used);
        if (used != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config: bad integer for " + key + ": " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError("config: bad flag for " + key + ": " + v);
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
    RunConfig c;
    std::istringstream in(text);
    std::string line;
    std::string section;  // "", transform, grid, scan, tolerances, output
    bool have_tolscale = false;
    (void)have_tolscale;

    auto tolerance_key = [&](const std::string& key, double v) {
        if (v <= 0.0) throw ConfigError("config: tolerance " + key + " must be positive");
        if (key == "algebraic") c.tol.algebraic = v;
        else if (key == "lightlike") c.tol.lightlike = v;
        else if (key == "lorentz_defect") c.tol.lorentz_defect = v;
        else if (key == "resonance") c.tol.resonance = v;
        else if (key == "concircularity") c.tol.concircularity = v;
        else if (key == "quad_concircularity") c.tol.quad_concircularity = v;
        else if (key == "closure") c.tol.closure = v;
        else if (key == "closure_discrete") c.tol.closure_discrete = v;
        else if (key == "integrated") c.tol.integrated = v;
        else if (key == "limit") c.tol.limit = v;
        else if (key == "tangency") c.tol.tangency = v;
        else if (key == "cube_consistency") c.tol.cube_consistency = v;
        else if (key == "monodromy_gate") c.tol.monodromy_gate = v;
        else throw ConfigError("config: unknown tolerance key: " + key);
    };

    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError("config: bad section line: " + line);
            section = trim(line.substr(1, line.size() - 2));
            if (section == "transform") {
                c.transforms.emplace_back();
            } else if (section != "grid" && section != "scan" && section != "tolerances" &&
                       section != "output") {
                throw ConfigError("config: unknown section [" + section + "]");
            }
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("config: expected key = value: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("config: empty key or value: " + line);

        if (section.empty()) {
            if (key == "n") c.n = to_int(key, val);
            else if (key == "mode") {
                if (val == "smooth") c.smooth = true;
                else if (val == "discrete") c.smooth = false;
                else throw ConfigError("config: mode must be smooth or discrete");
            } else if (key == "samples" || key == "vertices") c.size = to_int(key, val);
            else if (key == "loop_file") c.loop_file = val;
            else if (key == "polarization") {
                if (val == "arclength") c.pol_arclength = true;
                else c.polarization = to_double(key, val);
            } else if (key == "substeps") c.substeps = to_int(key, val);
            else if (key == "parallel") c.parallel = to_bool(key, val);
            else throw ConfigError("config: unknown key: " + key);
        } else if (section == "transform") {
            TransformSpec& t = c.transforms.back();
            if (key == "mu") t.mu = to_double(key, val);
            else if (key == "eigen_index") t.eigen_index = to_int(key, val);
            else if (key == "off_plane_axis") t.off_plane_axis = to_int(key, val);
            else if (key == "angle") { t.angle = to_double(key, val); t.angle_set = true; }
            else throw ConfigError("config: unknown transform key: " + key);
        } else if (section == "grid") {
            if (key == "type") {
                if (val == "default_2torus") c.grid_type = GridType::Default2Torus;
                else if (val == "product") c.grid_type = GridType::Product;
                else if (val == "file") c.grid_type = GridType::File;
                else throw ConfigError("config: unknown grid type: " + val);
            } else if (key == "k") c.k = to_int(key, val);
            else if (key == "path") c.grid_path = val;
            else throw ConfigError("config: unknown grid key: " + key);
        } else if (section == "scan") {
            if (key == "mu_min") c.scan_min = to_double(key, val);
            else if (key == "mu_max") c.scan_max = to_double(key, val);
            else if (key == "grid") c.scan_grid = to_int(key, val);
            else throw ConfigError("config: unknown scan key: " + key);
        } else if (section == "tolerances") {
            tolerance_key(key, to_double(key, val));
        } else if (section == "output") {
            if (key == "precision") c.precision = to_int(key, val);
            else throw ConfigError("config: unknown output key: " + key);
        }
    }
    if (c.precision < 1 || c.precision > 17)
        throw ConfigError("config: precision must be in [1, 17]");
    return c;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("config: cannot open " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

void require_loop_settings(const RunConfig& c) {
    if (!c.loop_file.empty()) return;  // dimensions come from the file
    if (c.n < 2) throw ConfigError("config: n must be >= 2");
    if (c.smooth && c.size < 16) throw ConfigError("config: samples must be >= 16");
    if (!c.smooth && c.size < 3) throw ConfigError("config: vertices must be >= 3");
    if (c.smooth && c.pol_arclength)
        throw ConfigError("config: arclength polarization is a discrete-loop option");
    if (c.smooth && c.polarization <= 0.0)
        throw ConfigError("config: smooth polarization must be positive");
    if (!c.smooth && !c.pol_arclength && c.polarization == 0.0)
        throw ConfigError("config: discrete polarization must be nonzero");
    if (c.substeps < 1) throw ConfigError("config: substeps must be >= 1");
}

void require_transforms(const RunConfig& c) {
    if (c.transforms.empty())
        throw ConfigError("config: at least one [transform] section is required");
    for (std::size_t i = 0; i < c.transforms.size(); ++i) {
        const TransformSpec& t = c.transforms[i];
        if (t.mu == 0.0)
            throw ConfigError("config: transform " + std::to_string(i) +
                              ": mu must be set and nonzero");
        for (std::size_t j = 0; j < i; ++j)
            if (c.transforms[j].mu == t.mu)
                throw ConfigError("config: spectral parameters must be pairwise distinct");
        if (t.off_plane_axis != 0 &&
            (t.off_plane_axis < 3 || (c.loop_file.empty() && t.off_plane_axis > c.n)))
            throw ConfigError("config: off_plane_axis must be in [3, n]");
        if (t.eigen_index < 0)
            throw ConfigError("config: eigen_index must be >= 0");
    }
}

void require_scan(const RunConfig& c) {
    if (c.scan_grid < 3)
        throw ConfigError("config: [scan] grid must be >= 3 for bracketing");
    if (!(c.scan_min < c.scan_max))
        throw ConfigError("config: [scan] requires mu_min < mu_max");
    if (c.scan_min <= 0.0 && c.scan_max >= 0.0)
        throw ConfigError("config: [scan] range must exclude 0");
}

}  // namespace isothermic::config
