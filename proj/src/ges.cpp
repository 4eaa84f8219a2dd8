#include "elicit/ges.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

namespace elicit {
namespace {

std::vector<int> sorted_union(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

// Undirected neighbors of y that are adjacent to x.
std::vector<int> na_yx(const Cpdag& g, int y, int x) {
    std::vector<int> out;
    for (int v : g.neighbors(y))
        if (v != x && g.adjacent(v, x)) out.push_back(v);
    return out;
}

bool is_clique(const Cpdag& g, const std::vector<int>& nodes) {
    for (size_t a = 0; a < nodes.size(); ++a)
        for (size_t b = a + 1; b < nodes.size(); ++b)
            if (!g.adjacent(nodes[a], nodes[b])) return false;
    return true;
}

// True when a semi-directed path from y to x avoids every node in `blocked`.
bool semi_directed_reachable(const Cpdag& g, int y, int x, const std::vector<int>& blocked) {
    std::vector<bool> banned(static_cast<size_t>(g.n), false);
    for (int b : blocked) banned[static_cast<size_t>(b)] = true;
    std::vector<bool> visited(static_cast<size_t>(g.n), false);
    std::deque<int> frontier{y};
    visited[static_cast<size_t>(y)] = true;
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        if (v == x) return true;
        for (int u = 0; u < g.n; ++u) {
            if (visited[static_cast<size_t>(u)] || banned[static_cast<size_t>(u)]) continue;
            if (g.has_directed(v, u) || g.has_undirected(v, u)) {
                visited[static_cast<size_t>(u)] = true;
                frontier.push_back(u);
            }
        }
    }
    return false;
}

Cpdag recompute_class(const Cpdag& pdag) {
    Cpdag g = dag_to_cpdag(pdag_to_dag(pdag));
    g.labels = pdag.labels;
    return g;
}

std::vector<std::vector<int>> subsets_of(const std::vector<int>& pool) {
    std::vector<std::vector<int>> out;
    const size_t count = size_t{1} << pool.size();
    out.reserve(count);
    for (size_t mask = 0; mask < count; ++mask) {
        std::vector<int> sub;
        for (size_t b = 0; b < pool.size(); ++b)
            if (mask & (size_t{1} << b)) sub.push_back(pool[b]);
        out.push_back(std::move(sub));
    }
    return out;
}

constexpr double kMinGain = 1e-9;

}  // namespace

DecomposableScore::DecomposableScore(const IncidenceMatrix& z, Kind kind,
                                     double equivalent_sample_size)
    : z_(z), kind_(kind), ess_(equivalent_sample_size) {
    if (z.rows() == 0) throw DegenerateMatrix("scoring needs at least one row");
    if (ess_ <= 0.0) throw BadVars("equivalent sample size must be positive");
}

double DecomposableScore::local(int node, const std::vector<int>& parents) {
    std::vector<int> key_parents(parents);
    std::sort(key_parents.begin(), key_parents.end());
    auto key = std::make_pair(node, key_parents);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    double value = compute(node, key_parents);
    cache_.emplace(std::move(key), value);
    return value;
}

double DecomposableScore::compute(int node, const std::vector<int>& parents) const {
    std::map<uint64_t, std::array<long, 2>> counts;
    for (size_t row = 0; row < z_.rows(); ++row) {
        uint64_t config = 0;
        for (size_t b = 0; b < parents.size(); ++b)
            config |= static_cast<uint64_t>(
                          z_.data[row][static_cast<size_t>(parents[b])] ? 1 : 0)
                      << b;
        ++counts[config][z_.data[row][static_cast<size_t>(node)]];
    }

    const double q = std::pow(2.0, static_cast<double>(parents.size()));
    if (kind_ == Kind::bic_multinomial) {
        double ll = 0.0;
        for (const auto& [config, c] : counts) {
            (void)config;
            const double total = static_cast<double>(c[0] + c[1]);
            for (long o : c)
                if (o > 0) ll += static_cast<double>(o) * std::log(static_cast<double>(o) / total);
        }
        const double penalty = 0.5 * std::log(static_cast<double>(z_.rows())) * q;
        return ll - penalty;
    }

    // BDeu: Dirichlet-multinomial marginal likelihood with uniform ess split.
    const double a_config = ess_ / q;
    const double a_cell = ess_ / (q * 2.0);
    double score = 0.0;
    for (const auto& [config, c] : counts) {
        (void)config;
        const double total = static_cast<double>(c[0] + c[1]);
        score += std::lgamma(a_config) - std::lgamma(a_config + total);
        for (long o : c)
            score += std::lgamma(a_cell + static_cast<double>(o)) - std::lgamma(a_cell);
    }
    return score;
}

double DecomposableScore::total(const Dag& d) {
    double sum = 0.0;
    for (int v = 0; v < d.n; ++v) sum += local(v, d.parents(v));
    return sum;
}

Cpdag ges(const IncidenceMatrix& z, DecomposableScore& score) {
    const int n = static_cast<int>(z.cols());
    if (n < 2) throw DegenerateMatrix("GES needs at least 2 variables");

    Cpdag g;
    g.n = n;
    g.labels = z.col_labels;

    struct Move {
        double delta = 0.0;
        int x = -1, y = -1;
        std::vector<int> set;  // T for insert, H for delete
    };

    // Forward: best valid Insert(x, y, T) until no positive gain.
    for (;;) {
        Move best;
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                if (x == y || g.adjacent(x, y)) continue;
                std::vector<int> t_pool;
                for (int v : g.neighbors(y))
                    if (!g.adjacent(v, x)) t_pool.push_back(v);
                const std::vector<int> na = na_yx(g, y, x);
                const std::vector<int> pa_y = g.parents(y);
                for (auto& t : subsets_of(t_pool)) {
                    std::vector<int> na_t = sorted_union(na, t);
                    if (!is_clique(g, na_t)) continue;
                    if (semi_directed_reachable(g, y, x, na_t)) continue;
                    std::vector<int> base = sorted_union(na_t, pa_y);
                    double delta =
                        score.local(y, sorted_union(base, {x})) - score.local(y, base);
                    if (delta > best.delta) best = Move{delta, x, y, t};
                }
            }
        }
        if (best.delta <= kMinGain) break;
        g.directed.insert({best.x, best.y});
        for (int t : best.set) g.orient(t, best.y);
        g = recompute_class(g);
    }

    // Backward: best valid Delete(x, y, H) until no positive gain.
    for (;;) {
        Move best;
        for (int x = 0; x < n; ++x) {
            for (int y = 0; y < n; ++y) {
                if (x == y) continue;
                if (!g.has_directed(x, y) && !g.has_undirected(x, y)) continue;
                const std::vector<int> na = na_yx(g, y, x);
                std::vector<int> pa_y = g.parents(y);
                pa_y.erase(std::remove(pa_y.begin(), pa_y.end(), x), pa_y.end());
                for (auto& h : subsets_of(na)) {
                    std::vector<int> na_minus_h;
                    for (int v : na)
                        if (std::find(h.begin(), h.end(), v) == h.end())
                            na_minus_h.push_back(v);
                    if (!is_clique(g, na_minus_h)) continue;
                    std::vector<int> c = sorted_union(na_minus_h, pa_y);
                    double delta = score.local(y, c) - score.local(y, sorted_union(c, {x}));
                    if (delta > best.delta) best = Move{delta, x, y, h};
                }
            }
        }
        if (best.delta <= kMinGain) break;
        g.directed.erase({best.x, best.y});
        g.undirected.erase(Cpdag::norm(best.x, best.y));
        for (int h : best.set) {
            if (g.has_undirected(best.y, h)) g.orient(best.y, h);
            if (g.has_undirected(best.x, h)) g.orient(best.x, h);
        }
        g = recompute_class(g);
    }

    return g;
}

Cpdag ges(const IncidenceMatrix& z) {
    DecomposableScore score(z);
    return ges(z, score);
}

}  // namespace elicit
