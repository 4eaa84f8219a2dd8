#include "elicit/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "elicit/util.hpp"

namespace elicit {
namespace {

double sq_dist(const Embedding& a, const Embedding& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        double diff = a[i] - b[i];
        d += diff * diff;
    }
    return d;
}

int nearest(const Embedding& x, const std::vector<Embedding>& centroids) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < centroids.size(); ++c) {
        double d = sq_dist(x, centroids[c]);
        if (d < best_d) {  // strict: ties keep the lowest index
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

// Weighted pick proportional to d2; all-zero weights fall back to the lowest
// index not yet used as a center.
size_t kmeanspp_pick(const std::vector<double>& d2, const std::vector<bool>& chosen,
                     util::SplitMix& rng) {
    double total = std::accumulate(d2.begin(), d2.end(), 0.0);
    if (total > 0.0) {
        double r = rng.next_double() * total;
        double acc = 0.0;
        for (size_t i = 0; i < d2.size(); ++i) {
            acc += d2[i];
            if (r < acc) return i;
        }
        return d2.size() - 1;  // numeric slack
    }
    for (size_t i = 0; i < chosen.size(); ++i)
        if (!chosen[i]) return i;
    return 0;
}

}  // namespace

ClusterModel minibatch_kmeans(const std::vector<Embedding>& points, int k, uint64_t seed) {
    const size_t m = points.size();
    if (k < 1 || static_cast<size_t>(k) > m)
        throw BadK("k must satisfy 1 <= k <= " + std::to_string(m) + ", got " +
                   std::to_string(k));
    for (const auto& p : points)
        if (p.size() != points[0].size())
            throw DimMismatch("clustering input vectors differ in dimension");

    util::SplitMix rng(util::mix64(seed ^ 0x6b6d65616e73ULL));

    // k-means++ seeding.
    std::vector<Embedding> centroids;
    centroids.reserve(static_cast<size_t>(k));
    std::vector<bool> chosen(m, false);
    size_t first = rng.next_below(m);
    centroids.push_back(points[first]);
    chosen[first] = true;
    std::vector<double> d2(m);
    for (size_t i = 0; i < m; ++i) d2[i] = sq_dist(points[i], centroids[0]);
    while (centroids.size() < static_cast<size_t>(k)) {
        size_t pick = kmeanspp_pick(d2, chosen, rng);
        chosen[pick] = true;
        centroids.push_back(points[pick]);
        for (size_t i = 0; i < m; ++i) d2[i] = std::min(d2[i], sq_dist(points[i], centroids.back()));
    }

    // Mini-batch updates with per-center running counts.
    const size_t batch = std::min<size_t>(256, m);
    std::vector<uint64_t> counts(static_cast<size_t>(k), 0);
    std::vector<size_t> perm(m);
    std::iota(perm.begin(), perm.end(), 0);
    for (int epoch = 0; epoch < 100; ++epoch) {
        for (size_t i = m; i > 1; --i) std::swap(perm[i - 1], perm[rng.next_below(i)]);
        std::vector<Embedding> before = centroids;
        for (size_t off = 0; off < m; off += batch) {
            size_t end = std::min(off + batch, m);
            std::vector<int> assign(end - off);
            for (size_t i = off; i < end; ++i) assign[i - off] = nearest(points[perm[i]], centroids);
            for (size_t i = off; i < end; ++i) {
                int c = assign[i - off];
                const Embedding& x = points[perm[i]];
                double eta = 1.0 / static_cast<double>(++counts[static_cast<size_t>(c)]);
                Embedding& ctr = centroids[static_cast<size_t>(c)];
                for (size_t d = 0; d < ctr.size(); ++d) ctr[d] += eta * (x[d] - ctr[d]);
            }
        }
        double shift = 0.0;
        for (size_t c = 0; c < centroids.size(); ++c)
            shift = std::max(shift, std::sqrt(sq_dist(before[c], centroids[c])));
        if (shift < 1e-4) break;
    }

    // Final hard assignment, then drop empty clusters and compact ids.
    std::vector<int> labels(m);
    for (size_t i = 0; i < m; ++i) labels[i] = nearest(points[i], centroids);
    std::vector<int> remap(static_cast<size_t>(k), -1);
    ClusterModel model;
    model.seed = seed;
    for (size_t i = 0; i < m; ++i) {
        int c = labels[i];
        if (remap[static_cast<size_t>(c)] < 0) {
            remap[static_cast<size_t>(c)] = model.k++;
            model.centroids.push_back(centroids[static_cast<size_t>(c)]);
        }
    }
    model.labels.resize(m);
    for (size_t i = 0; i < m; ++i) model.labels[i] = remap[static_cast<size_t>(labels[i])];
    return model;
}

}  // namespace elicit
