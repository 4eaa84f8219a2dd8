#include "elicit/graph.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "elicit/errors.hpp"

namespace elicit {

std::vector<int> Cpdag::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : undirected) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<int> Cpdag::parents(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : directed)
        if (b == v) out.push_back(a);
    return out;  // set iteration is already ascending in a
}

std::vector<int> Cpdag::adjacent_to(int v) const {
    std::vector<int> out;
    for (int u = 0; u < n; ++u)
        if (u != v && adjacent(u, v)) out.push_back(u);
    return out;
}

std::vector<int> Dag::parents(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges)
        if (b == v) out.push_back(a);
    return out;
}

std::vector<int> Dag::children(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges)
        if (a == v) out.push_back(b);
    return out;
}

bool is_acyclic(int n, const std::set<std::pair<int, int>>& edges) {
    std::vector<int> indeg(static_cast<size_t>(n), 0);
    for (const auto& [a, b] : edges) {
        (void)a;
        ++indeg[static_cast<size_t>(b)];
    }
    std::deque<int> ready;
    for (int v = 0; v < n; ++v)
        if (indeg[static_cast<size_t>(v)] == 0) ready.push_back(v);
    int seen = 0;
    while (!ready.empty()) {
        int v = ready.front();
        ready.pop_front();
        ++seen;
        for (const auto& [a, b] : edges)
            if (a == v && --indeg[static_cast<size_t>(b)] == 0) ready.push_back(b);
    }
    return seen == n;
}

Cpdag meek_orient(Cpdag g) {
    bool changed = true;
    while (changed) {
        changed = false;
        // Work from a snapshot; orient() mutates the sets.
        std::vector<std::pair<int, int>> und(g.undirected.begin(), g.undirected.end());
        for (const auto& [a, b] : und) {
            if (!g.has_undirected(a, b)) continue;
            int oriented = 0;  // +1: a->b, -1: b->a, 0: none
            for (auto [x, y] : {std::pair{a, b}, std::pair{b, a}}) {
                // R1: w->x, x-y, w and y nonadjacent  =>  x->y
                for (int w : g.parents(x))
                    if (!g.adjacent(w, y)) oriented = (x == a) ? 1 : -1;
                // R2: x->w->y with x-y  =>  x->y
                for (int w = 0; w < g.n && !oriented; ++w)
                    if (g.has_directed(x, w) && g.has_directed(w, y)) oriented = (x == a) ? 1 : -1;
                // R3: x-c, x-d, c->y, d->y, c and d nonadjacent  =>  x->y
                if (!oriented) {
                    auto nb = g.neighbors(x);
                    for (size_t i = 0; i < nb.size() && !oriented; ++i)
                        for (size_t j = i + 1; j < nb.size() && !oriented; ++j) {
                            int c = nb[i], d = nb[j];
                            if (c == y || d == y) continue;
                            if (g.has_directed(c, y) && g.has_directed(d, y) && !g.adjacent(c, d))
                                oriented = (x == a) ? 1 : -1;
                        }
                }
                // R4: x-d, d->c, c->y, d and y nonadjacent  =>  x->y
                if (!oriented) {
                    for (int d : g.neighbors(x)) {
                        if (d == y || g.adjacent(d, y)) continue;
                        for (int c = 0; c < g.n; ++c)
                            if (c != x && c != y && g.has_directed(d, c) && g.has_directed(c, y))
                                oriented = (x == a) ? 1 : -1;
                        if (oriented) break;
                    }
                }
                if (oriented) break;
            }
            if (oriented) {
                if (oriented > 0)
                    g.orient(a, b);
                else
                    g.orient(b, a);
                changed = true;
            }
        }
    }
    return g;
}

namespace {

std::vector<int> topological_order(const Dag& d) {
    std::vector<int> indeg(static_cast<size_t>(d.n), 0);
    for (const auto& [a, b] : d.edges) {
        (void)a;
        ++indeg[static_cast<size_t>(b)];
    }
    std::vector<int> order;
    std::set<int> ready;
    for (int v = 0; v < d.n; ++v)
        if (indeg[static_cast<size_t>(v)] == 0) ready.insert(v);
    while (!ready.empty()) {
        int v = *ready.begin();  // lowest index first: stable ordering
        ready.erase(ready.begin());
        order.push_back(v);
        for (int c : d.children(v))
            if (--indeg[static_cast<size_t>(c)] == 0) ready.insert(c);
    }
    if (order.size() != static_cast<size_t>(d.n)) throw Error("graph has a directed cycle");
    return order;
}

}  // namespace

Cpdag dag_to_cpdag(const Dag& d) {
    std::vector<int> topo = topological_order(d);
    std::vector<int> rank(static_cast<size_t>(d.n));
    for (size_t i = 0; i < topo.size(); ++i) rank[static_cast<size_t>(topo[i])] = static_cast<int>(i);

    // Total order on edges: repeatedly take the lowest-ranked node y with an
    // unordered incoming edge, then the highest-ranked x among those edges.
    std::vector<std::pair<int, int>> ordered;
    std::set<std::pair<int, int>> unordered(d.edges.begin(), d.edges.end());
    while (!unordered.empty()) {
        int best_y = -1;
        for (const auto& [x, y] : unordered) {
            (void)x;
            if (best_y < 0 || rank[static_cast<size_t>(y)] < rank[static_cast<size_t>(best_y)])
                best_y = y;
        }
        int best_x = -1;
        for (const auto& [x, y] : unordered)
            if (y == best_y &&
                (best_x < 0 || rank[static_cast<size_t>(x)] > rank[static_cast<size_t>(best_x)]))
                best_x = x;
        ordered.emplace_back(best_x, best_y);
        unordered.erase({best_x, best_y});
    }

    enum class Label { unknown, compelled, reversible };
    std::map<std::pair<int, int>, Label> label;
    for (const auto& e : d.edges) label[e] = Label::unknown;

    for (const auto& [x, y] : ordered) {
        if (label[{x, y}] != Label::unknown) continue;
        bool done = false;
        for (int w : d.parents(x)) {
            if (label[{w, x}] != Label::compelled) continue;
            if (!d.has_edge(w, y)) {
                for (int p : d.parents(y)) label[{p, y}] = Label::compelled;
                done = true;
                break;
            }
            label[{w, y}] = Label::compelled;
        }
        if (done) continue;
        bool z_exists = false;
        for (int z : d.parents(y))
            if (z != x && !d.has_edge(z, x)) z_exists = true;
        for (int p : d.parents(y)) {
            auto& l = label[{p, y}];
            if (l == Label::unknown) l = z_exists ? Label::compelled : Label::reversible;
        }
    }

    Cpdag g;
    g.n = d.n;
    for (const auto& [e, l] : label) {
        if (l == Label::compelled)
            g.directed.insert(e);
        else
            g.add_undirected(e.first, e.second);
    }
    return g;
}

Dag pdag_to_dag(const Cpdag& g) {
    Dag result;
    result.n = g.n;
    result.edges = g.directed;

    Cpdag work = g;
    std::vector<bool> removed(static_cast<size_t>(g.n), false);
    int remaining = g.n;
    while (remaining > 0) {
        int found = -1;
        for (int x = 0; x < g.n && found < 0; ++x) {
            if (removed[static_cast<size_t>(x)]) continue;
            bool sink = true;
            for (int y = 0; y < g.n; ++y)
                if (!removed[static_cast<size_t>(y)] && work.has_directed(x, y)) sink = false;
            if (!sink) continue;
            // Every undirected neighbor of x must be adjacent to all of x's
            // other adjacents.
            bool ok = true;
            auto adj = work.adjacent_to(x);
            for (int y : work.neighbors(x)) {
                for (int z : adj)
                    if (z != y && !work.adjacent(y, z)) ok = false;
            }
            if (ok) found = x;
        }
        if (found < 0) throw Error("pdag admits no consistent extension");

        for (int y : work.neighbors(found)) result.edges.insert({y, found});
        for (int y = 0; y < g.n; ++y) {
            if (y == found) continue;
            work.undirected.erase(Cpdag::norm(found, y));
            work.directed.erase({found, y});
            work.directed.erase({y, found});
        }
        removed[static_cast<size_t>(found)] = true;
        --remaining;
    }
    if (!is_acyclic(result.n, result.edges)) throw Error("pdag extension produced a cycle");
    return result;
}

bool d_separated(const Dag& d, int i, int j, const std::set<int>& s) {
    if (i == j) return false;
    // Ancestors of {i, j} + s.
    std::set<int> relevant = s;
    relevant.insert(i);
    relevant.insert(j);
    std::set<int> anc;
    std::deque<int> queue(relevant.begin(), relevant.end());
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        if (!anc.insert(v).second) continue;
        for (int p : d.parents(v)) queue.push_back(p);
    }

    // Moralize the ancestral subgraph, then drop s and test reachability.
    std::set<std::pair<int, int>> moral;
    auto connect = [&](int a, int b) { moral.insert(Cpdag::norm(a, b)); };
    for (const auto& [a, b] : d.edges)
        if (anc.count(a) && anc.count(b)) connect(a, b);
    for (int v : anc) {
        auto ps = d.parents(v);
        for (size_t a = 0; a < ps.size(); ++a)
            for (size_t b = a + 1; b < ps.size(); ++b)
                if (anc.count(ps[a]) && anc.count(ps[b])) connect(ps[a], ps[b]);
    }

    std::set<int> visited;
    std::deque<int> frontier{i};
    while (!frontier.empty()) {
        int v = frontier.front();
        frontier.pop_front();
        if (v == j) return false;
        if (s.count(v) || !visited.insert(v).second) continue;
        for (const auto& [a, b] : moral) {
            if (a == v && !visited.count(b)) frontier.push_back(b);
            if (b == v && !visited.count(a)) frontier.push_back(a);
        }
    }
    return true;
}

std::vector<Dag> all_dags(int n) {
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) pairs.emplace_back(a, b);

    std::vector<Dag> dags;
    std::vector<int> state(pairs.size(), 0);  // 0: none, 1: a->b, 2: b->a
    for (;;) {
        Dag d;
        d.n = n;
        for (size_t k = 0; k < pairs.size(); ++k) {
            if (state[k] == 1) d.edges.insert(pairs[k]);
            if (state[k] == 2) d.edges.insert({pairs[k].second, pairs[k].first});
        }
        if (is_acyclic(n, d.edges)) dags.push_back(std::move(d));

        size_t k = 0;
        while (k < state.size() && state[k] == 2) state[k++] = 0;
        if (k == state.size()) break;
        ++state[k];
    }
    return dags;
}

}  // namespace elicit
