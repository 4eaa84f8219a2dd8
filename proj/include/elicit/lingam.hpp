#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "elicit/incidence.hpp"

namespace elicit {

// Linear SEM estimate: order is the causal ordering (most exogenous first),
// b[i][j] is the weight of edge j -> i and is nonzero only when j precedes i.
struct WeightedDag {
    std::vector<int> order;
    std::vector<std::vector<double>> b;
    std::vector<std::string> labels;
};

struct IcaLingamResult {
    WeightedDag dag;
    bool converged = true;  // false when FastICA hit its iteration cap
};

using RealMatrix = std::vector<std::vector<double>>;  // rows x variables

// DirectLiNGAM: repeatedly pick the most exogenous variable by the log-cosh
// entropy contrast on pairwise residuals, recurse on residuals, then fill B
// by least squares of each variable on its order predecessors.
WeightedDag direct_lingam(const RealMatrix& data, double prune_threshold = 0.05);

// ICA-LiNGAM: whiten, FastICA (tanh, deflation, seeded), permute the unmixing
// matrix to a dominant diagonal, derive B = I - W, and search the causal
// order that is closest to strictly lower triangular.
IcaLingamResult ica_lingam(const RealMatrix& data, uint64_t seed = 42,
                           double prune_threshold = 0.05);

// Order minimizing the sum of squared upper-triangle entries of b under
// permutation; exhaustive up to 8 variables, greedy beyond.
std::vector<int> best_causal_order(const std::vector<std::vector<double>>& b);

RealMatrix matrix_to_real(const IncidenceMatrix& z);

}  // namespace elicit
