#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "elicit/graph.hpp"
#include "elicit/incidence.hpp"

namespace elicit {

// Decomposable local score over binary columns. Values are cached per
// instance; one instance serves one search.
class DecomposableScore {
public:
    enum class Kind { bic_multinomial, bdeu };

    explicit DecomposableScore(const IncidenceMatrix& z, Kind kind = Kind::bic_multinomial,
                               double equivalent_sample_size = 1.0);

    double local(int node, const std::vector<int>& parents);
    double total(const Dag& d);

private:
    double compute(int node, const std::vector<int>& parents) const;

    const IncidenceMatrix& z_;
    Kind kind_;
    double ess_;
    std::map<std::pair<int, std::vector<int>>, double> cache_;
};

// Greedy equivalence search: forward single-edge insertions while any
// improves the score, then backward deletions, both over equivalence classes
// with Meek completion after every move. Deterministic with lowest (source,
// target) tie-breaking.
Cpdag ges(const IncidenceMatrix& z, DecomposableScore& score);
Cpdag ges(const IncidenceMatrix& z);  // BIC default

}  // namespace elicit
