#pragma once

#include <set>
#include <string>
#include <utility>
#include <vector>

namespace elicit {

// Mixed graph: directed part acyclic, a pair carries at most one edge.
// Undirected pairs are stored with the smaller index first.
struct Cpdag {
    int n = 0;
    std::vector<std::string> labels;  // empty or size n
    std::set<std::pair<int, int>> directed;
    std::set<std::pair<int, int>> undirected;

    static std::pair<int, int> norm(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

    bool has_directed(int a, int b) const { return directed.count({a, b}) > 0; }
    bool has_undirected(int a, int b) const { return undirected.count(norm(a, b)) > 0; }
    bool adjacent(int a, int b) const {
        return has_directed(a, b) || has_directed(b, a) || has_undirected(a, b);
    }
    void add_undirected(int a, int b) { undirected.insert(norm(a, b)); }
    void orient(int a, int b) {  // a-b becomes a->b
        undirected.erase(norm(a, b));
        directed.insert({a, b});
    }
    std::vector<int> neighbors(int v) const;         // undirected-adjacent
    std::vector<int> parents(int v) const;           // u with u->v
    std::vector<int> adjacent_to(int v) const;       // any edge

    bool same_structure(const Cpdag& other) const {
        return n == other.n && directed == other.directed && undirected == other.undirected;
    }
};

struct Dag {
    int n = 0;
    std::set<std::pair<int, int>> edges;  // a->b

    bool has_edge(int a, int b) const { return edges.count({a, b}) > 0; }
    std::vector<int> parents(int v) const;
    std::vector<int> children(int v) const;
};

// Meek rules R1-R4 applied to a fixpoint. Never introduces a new v-structure
// or a directed cycle on consistent input.
Cpdag meek_orient(Cpdag g);

// Compelled/reversible edge labeling (Chickering's ordered-edge procedure);
// the returned CPDAG is the equivalence class of d.
Cpdag dag_to_cpdag(const Dag& d);

// Dor-Tarsi consistent extension; throws Error if none exists.
Dag pdag_to_dag(const Cpdag& g);

// Moralized-ancestral-graph reachability test.
bool d_separated(const Dag& d, int i, int j, const std::set<int>& s);

// Every labeled DAG on n nodes (3 / 25 / 543 for n = 2 / 3 / 4).
std::vector<Dag> all_dags(int n);

bool is_acyclic(int n, const std::set<std::pair<int, int>>& edges);

}  // namespace elicit
