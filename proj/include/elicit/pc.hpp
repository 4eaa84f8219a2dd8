#pragma once

#include "elicit/citest.hpp"
#include "elicit/graph.hpp"
#include "elicit/incidence.hpp"

namespace elicit {

// PC: complete skeleton thinned by CI tests with growing conditioning sets,
// v-structure orientation from separating sets (conflicts stay undirected),
// then Meek completion. Deterministic: pairs ascend, subsets enumerate
// lexicographically.
Cpdag pc(CiOracle& oracle, int max_cond);

// Data-backed convenience overload using the G-squared test at level alpha.
Cpdag pc(const IncidenceMatrix& z, double alpha, int max_cond);

}  // namespace elicit
