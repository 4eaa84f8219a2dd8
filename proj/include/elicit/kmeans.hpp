#pragma once

#include <cstdint>
#include <vector>

#include "elicit/gateway.hpp"

namespace elicit {

struct ClusterModel {
    int k = 0;                         // clusters remaining after empty ones are dropped
    std::vector<int> labels;           // length M, values in [0, k)
    std::vector<Embedding> centroids;  // k vectors
    uint64_t seed = 0;
};

// Mini-batch k-means with seeded k-means++ init, batches of min(256, M), at
// most 100 epochs, early stop when the largest centroid shift over an epoch
// falls below 1e-4. Deterministic given (points, k, seed); empty clusters are
// dropped and labels compacted.
ClusterModel minibatch_kmeans(const std::vector<Embedding>& points, int k, uint64_t seed);

}  // namespace elicit
