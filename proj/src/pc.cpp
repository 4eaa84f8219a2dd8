#include "elicit/pc.hpp"

#include <algorithm>
#include <map>

namespace elicit {
namespace {

// k-combinations of `pool` in lexicographic order.
std::vector<std::vector<int>> combinations(const std::vector<int>& pool, int k) {
    std::vector<std::vector<int>> out;
    if (k > static_cast<int>(pool.size())) return out;
    std::vector<int> idx(static_cast<size_t>(k));
    for (int i = 0; i < k; ++i) idx[static_cast<size_t>(i)] = i;
    for (;;) {
        std::vector<int> combo;
        combo.reserve(static_cast<size_t>(k));
        for (int i : idx) combo.push_back(pool[static_cast<size_t>(i)]);
        out.push_back(std::move(combo));
        int i = k - 1;
        while (i >= 0 && idx[static_cast<size_t>(i)] == static_cast<int>(pool.size()) - k + i) --i;
        if (i < 0) break;
        ++idx[static_cast<size_t>(i)];
        for (int j = i + 1; j < k; ++j)
            idx[static_cast<size_t>(j)] = idx[static_cast<size_t>(j - 1)] + 1;
    }
    return out;
}

}  // namespace

Cpdag pc(CiOracle& oracle, int max_cond) {
    const int n = oracle.n_vars();
    if (n < 2) throw DegenerateMatrix("PC needs at least 2 variables");

    std::vector<std::vector<bool>> adj(static_cast<size_t>(n),
                                       std::vector<bool>(static_cast<size_t>(n), true));
    for (int v = 0; v < n; ++v) adj[static_cast<size_t>(v)][static_cast<size_t>(v)] = false;
    std::map<std::pair<int, int>, std::vector<int>> sepset;

    auto neighbors_of = [&](int v, int except) {
        std::vector<int> out;
        for (int u = 0; u < n; ++u)
            if (u != except && adj[static_cast<size_t>(v)][static_cast<size_t>(u)])
                out.push_back(u);
        return out;
    };

    for (int level = 0; level <= max_cond; ++level) {
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                if (!adj[static_cast<size_t>(i)][static_cast<size_t>(j)]) continue;
                bool removed = false;
                auto adj_i = neighbors_of(i, j);
                auto try_side = [&](const std::vector<int>& pool, bool second_side) {
                    for (const auto& s : combinations(pool, level)) {
                        if (second_side &&
                            std::includes(adj_i.begin(), adj_i.end(), s.begin(), s.end()))
                            continue;  // already tested from i's side
                        if (oracle.independent(i, j, s)) {
                            adj[static_cast<size_t>(i)][static_cast<size_t>(j)] = false;
                            adj[static_cast<size_t>(j)][static_cast<size_t>(i)] = false;
                            sepset[{i, j}] = s;
                            return true;
                        }
                    }
                    return false;
                };
                removed = try_side(adj_i, false);
                if (!removed) removed = try_side(neighbors_of(j, i), true);
                (void)removed;
            }
        }
    }

    Cpdag g;
    g.n = n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (adj[static_cast<size_t>(i)][static_cast<size_t>(j)]) g.add_undirected(i, j);

    // v-structures: for nonadjacent (i, k) with common neighbor j, orient
    // i->j<-k iff j is outside sepset(i, k). Conflicting claims cancel.
    std::set<std::pair<int, int>> claims;
    for (int i = 0; i < n; ++i) {
        for (int k = i + 1; k < n; ++k) {
            if (adj[static_cast<size_t>(i)][static_cast<size_t>(k)]) continue;
            auto it = sepset.find({i, k});
            if (it == sepset.end()) continue;
            for (int j = 0; j < n; ++j) {
                if (j == i || j == k) continue;
                if (!adj[static_cast<size_t>(i)][static_cast<size_t>(j)] ||
                    !adj[static_cast<size_t>(j)][static_cast<size_t>(k)])
                    continue;
                if (std::find(it->second.begin(), it->second.end(), j) == it->second.end()) {
                    claims.insert({i, j});
                    claims.insert({k, j});
                }
            }
        }
    }
    for (const auto& [a, b] : claims) {
        if (claims.count({b, a})) continue;  // conflict: leave undirected
        if (g.has_undirected(a, b)) g.orient(a, b);
    }

    return meek_orient(std::move(g));
}

Cpdag pc(const IncidenceMatrix& z, double alpha, int max_cond) {
    GsqOracle oracle(z, alpha);
    Cpdag g = pc(oracle, max_cond);
    g.labels = z.col_labels;
    return g;
}

}  // namespace elicit
