#pragma once

#include "isothermic/parallel.hpp"
#include "isothermic/torus.hpp"
#include "isothermic/types.hpp"

#include <string>
#include <vector>

namespace isothermic::verify {

struct CheckReport {
    std::string name;
    std::string scope;     // quad / ribbon / edge / global
    double value = 0.0;    // measured worst case
    double tol = 0.0;
    bool pass = false;
    std::string worst_location;
};

// Fully discrete nets: every elementary quadrilateral (loop direction x grid
// direction, and grid x grid at fixed sample) is concircular with four
// distinct vertices.
CheckReport check_quads_concircular(const torus::TorusNet& net, const Tolerances& tol = {},
                                    ExecPolicy policy = ExecPolicy::Parallel);

// Fully discrete nets: face cross ratios factorize. Verifies the alternating
// product around every vertex, a log-space rank-one fit cr = a_r / b_j, the
// sign pattern, and the face law cr = mu_r / m_j itself.
CheckReport check_cr_factorization(const torus::TorusNet& net, const Tolerances& tol = {},
                                   ExecPolicy policy = ExecPolicy::Parallel);

// Semi-discrete nets: per-ribbon tangency, the infinitesimal cross-ratio law
// mu_r/m(t), and t-independence of cross-ribbon ratios.
std::vector<CheckReport> check_semidiscrete_ribbons(const torus::TorusNet& net,
                                                    const Tolerances& tol = {},
                                                    ExecPolicy policy = ExecPolicy::Parallel);

// Aggregate: closure in all directions, the applicable isothermic checks,
// fullness rank = n, and the dimension audit.
std::vector<CheckReport> check_theorem_instance(const torus::TorusNet& net, int n, int k,
                                                const Tolerances& tol = {},
                                                ExecPolicy policy = ExecPolicy::Parallel);

bool all_pass(const std::vector<CheckReport>& reports);

// Line-oriented report:
//   check=<name> scope=<loc> value=<decimal> tol=<decimal> pass=<0|1>
//   summary checks=<N> failed=<F> pass=<0|1>
std::string format_report(const std::vector<CheckReport>& reports, int precision = 9);
void write_report(const std::string& path, const std::vector<CheckReport>& reports,
                  int precision = 9);

}  // namespace isothermic::verify
