#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>
#include <tuple>
#include <utility>
#include <vector>

#include "elicit/errors.hpp"
#include "elicit/graph.hpp"

using namespace elicit;

namespace {

Dag make_dag(int n, std::set<std::pair<int, int>> edges) {
    Dag d;
    d.n = n;
    d.edges = std::move(edges);
    return d;
}

using Shape = std::pair<std::set<std::pair<int, int>>, std::set<std::pair<int, int>>>;
Shape shape(const Cpdag& g) { return {g.directed, g.undirected}; }

std::set<std::pair<int, int>> skeleton(const Dag& d) {
    std::set<std::pair<int, int>> s;
    for (const auto& [a, b] : d.edges) s.insert(Cpdag::norm(a, b));
    return s;
}

std::set<std::tuple<int, int, int>> v_structures(const Dag& d) {
    std::set<std::tuple<int, int, int>> out;
    for (int c = 0; c < d.n; ++c) {
        auto ps = d.parents(c);
        for (size_t a = 0; a < ps.size(); ++a)
            for (size_t b = a + 1; b < ps.size(); ++b)
                if (!d.has_edge(ps[a], ps[b]) && !d.has_edge(ps[b], ps[a]))
                    out.insert({ps[a], ps[b], c});
    }
    return out;
}

}  // namespace

TEST_CASE("cpdag primitives") {
    Cpdag g;
    g.n = 3;
    g.add_undirected(2, 0);
    CHECK(g.has_undirected(0, 2));
    CHECK(g.has_undirected(2, 0));
    CHECK(g.adjacent(0, 2));
    g.orient(2, 0);
    CHECK_FALSE(g.has_undirected(0, 2));
    CHECK(g.has_directed(2, 0));
    CHECK(g.parents(0) == std::vector<int>{2});
    g.add_undirected(0, 1);
    CHECK(g.neighbors(0) == std::vector<int>{1});
    CHECK(g.adjacent_to(0) == std::vector<int>{1, 2});
}

TEST_CASE("meek rule 1 orients away from a shielded-free parent") {
    Cpdag g;
    g.n = 3;
    g.directed.insert({0, 1});
    g.add_undirected(1, 2);
    Cpdag out = meek_orient(g);
    CHECK(out.has_directed(1, 2));
    CHECK(out.undirected.empty());
}

TEST_CASE("meek rule 1 cascades down a path") {
    Cpdag g;
    g.n = 4;
    g.directed.insert({0, 1});
    g.add_undirected(1, 2);
    g.add_undirected(2, 3);
    Cpdag out = meek_orient(g);
    CHECK(out.has_directed(1, 2));
    CHECK(out.has_directed(2, 3));
    CHECK(out.undirected.empty());
}

TEST_CASE("meek rule 2 closes a directed two-path") {
    Cpdag g;
    g.n = 3;
    g.directed.insert({0, 1});
    g.directed.insert({1, 2});
    g.add_undirected(0, 2);
    Cpdag out = meek_orient(g);
    CHECK(out.has_directed(0, 2));
    CHECK(out.undirected.empty());
}

TEST_CASE("meek rule 3 orients the hub of a kite") {
    Cpdag g;
    g.n = 4;
    g.add_undirected(0, 1);
    g.add_undirected(0, 2);
    g.add_undirected(0, 3);
    g.directed.insert({2, 1});
    g.directed.insert({3, 1});
    Cpdag out = meek_orient(g);
    CHECK(out.has_directed(0, 1));
    // The flanks stay unresolved: nothing compels 0-2 or 0-3.
    CHECK(out.has_undirected(0, 2));
    CHECK(out.has_undirected(0, 3));
}

TEST_CASE("meek rule 4 uses a directed chain behind an undirected edge") {
    Cpdag g;
    g.n = 4;
    g.add_undirected(0, 1);
    g.add_undirected(0, 3);
    g.directed.insert({3, 2});
    g.directed.insert({2, 1});
    Cpdag out = meek_orient(g);
    CHECK(out.has_directed(0, 1));
    CHECK(out.has_undirected(0, 3));
}

TEST_CASE("meek leaves an undirected square alone") {
    Cpdag g;
    g.n = 4;
    g.add_undirected(0, 1);
    g.add_undirected(1, 2);
    g.add_undirected(2, 3);
    g.add_undirected(3, 0);
    Cpdag out = meek_orient(g);
    CHECK(out.same_structure(g));
}

TEST_CASE("dag_to_cpdag known classes") {
    SUBCASE("collider stays fully directed") {
        Cpdag g = dag_to_cpdag(make_dag(3, {{0, 2}, {1, 2}}));
        CHECK(g.directed == std::set<std::pair<int, int>>{{0, 2}, {1, 2}});
        CHECK(g.undirected.empty());
    }
    SUBCASE("chain and fork share one undirected class") {
        Cpdag chain = dag_to_cpdag(make_dag(3, {{0, 1}, {1, 2}}));
        Cpdag fork = dag_to_cpdag(make_dag(3, {{1, 0}, {1, 2}}));
        CHECK(chain.directed.empty());
        CHECK(chain.undirected == std::set<std::pair<int, int>>{{0, 1}, {1, 2}});
        CHECK(chain.same_structure(fork));
    }
    SUBCASE("complete dag is fully reversible") {
        Cpdag g = dag_to_cpdag(make_dag(3, {{0, 1}, {0, 2}, {1, 2}}));
        CHECK(g.directed.empty());
        CHECK(g.undirected.size() == 3);
    }
    SUBCASE("edge out of a collider is compelled") {
        Cpdag g = dag_to_cpdag(make_dag(4, {{0, 2}, {1, 2}, {2, 3}}));
        CHECK(g.directed == std::set<std::pair<int, int>>{{0, 2}, {1, 2}, {2, 3}});
        CHECK(g.undirected.empty());
    }
}

TEST_CASE("dag_to_cpdag induces exactly the markov equivalence partition") {
    for (int n : {2, 3, 4}) {
        std::map<std::pair<std::set<std::pair<int, int>>, std::set<std::tuple<int, int, int>>>,
                 std::set<Shape>>
            buckets;
        std::set<Shape> all_shapes;
        for (const Dag& d : all_dags(n)) {
            const Shape s = shape(dag_to_cpdag(d));
            buckets[{skeleton(d), v_structures(d)}].insert(s);
            all_shapes.insert(s);
        }
        for (const auto& [key, shapes] : buckets) {
            (void)key;
            CHECK(shapes.size() == 1);  // equivalent dags map to one cpdag
        }
        CHECK(all_shapes.size() == buckets.size());  // distinct classes stay distinct
        if (n == 3) CHECK(buckets.size() == 11);
        if (n == 4) CHECK(buckets.size() == 185);
    }
}

TEST_CASE("pdag_to_dag returns a member of the class") {
    SUBCASE("undirected chain avoids the forbidden collider") {
        Cpdag g;
        g.n = 3;
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        Dag d = pdag_to_dag(g);
        CHECK(d.edges.size() == 2);
        CHECK(is_acyclic(3, d.edges));
        CHECK(dag_to_cpdag(d).same_structure(g));
    }
    SUBCASE("directed edges are preserved verbatim") {
        Cpdag g;
        g.n = 3;
        g.directed.insert({0, 2});
        g.directed.insert({1, 2});
        Dag d = pdag_to_dag(g);
        CHECK(d.edges == std::set<std::pair<int, int>>{{0, 2}, {1, 2}});
    }
    SUBCASE("round trip over every dag on four nodes") {
        for (const Dag& d : all_dags(4)) {
            Cpdag g = dag_to_cpdag(d);
            Dag back = pdag_to_dag(g);
            CHECK(is_acyclic(4, back.edges));
            CHECK(dag_to_cpdag(back).same_structure(g));
        }
    }
    SUBCASE("chordless square has no consistent extension") {
        Cpdag g;
        g.n = 4;
        g.add_undirected(0, 1);
        g.add_undirected(1, 2);
        g.add_undirected(2, 3);
        g.add_undirected(3, 0);
        CHECK_THROWS_AS(pdag_to_dag(g), Error);
    }
}

TEST_CASE("d_separated textbook structures") {
    SUBCASE("chain blocks through the middle") {
        Dag d = make_dag(3, {{0, 1}, {1, 2}});
        CHECK_FALSE(d_separated(d, 0, 2, {}));
        CHECK(d_separated(d, 0, 2, {1}));
    }
    SUBCASE("fork blocks through the common cause") {
        Dag d = make_dag(3, {{1, 0}, {1, 2}});
        CHECK_FALSE(d_separated(d, 0, 2, {}));
        CHECK(d_separated(d, 0, 2, {1}));
    }
    SUBCASE("collider opens when conditioned") {
        Dag d = make_dag(3, {{0, 2}, {1, 2}});
        CHECK(d_separated(d, 0, 1, {}));
        CHECK_FALSE(d_separated(d, 0, 1, {2}));
    }
    SUBCASE("descendant of a collider also opens it") {
        Dag d = make_dag(4, {{0, 2}, {1, 2}, {2, 3}});
        CHECK(d_separated(d, 0, 1, {}));
        CHECK_FALSE(d_separated(d, 0, 1, {3}));
    }
    SUBCASE("m-structure: conditioning can hurt") {
        // 0 <- 2 -> 4 <- 3 -> 1 with 4 a collider between the forks
        Dag d = make_dag(5, {{2, 0}, {2, 4}, {3, 4}, {3, 1}});
        CHECK(d_separated(d, 0, 1, {}));
        CHECK_FALSE(d_separated(d, 0, 1, {4}));
        CHECK(d_separated(d, 0, 1, {2, 4}));
    }
}

TEST_CASE("all_dags enumerates exactly the acyclic digraphs") {
    CHECK(all_dags(1).size() == 1);
    CHECK(all_dags(2).size() == 3);
    CHECK(all_dags(3).size() == 25);
    CHECK(all_dags(4).size() == 543);
    std::set<std::set<std::pair<int, int>>> seen;
    for (const Dag& d : all_dags(3)) {
        CHECK(is_acyclic(3, d.edges));
        CHECK(seen.insert(d.edges).second);
    }
}

TEST_CASE("is_acyclic") {
    CHECK(is_acyclic(3, {{0, 1}, {1, 2}}));
    CHECK_FALSE(is_acyclic(3, {{0, 1}, {1, 2}, {2, 0}}));
    CHECK(is_acyclic(1, {}));
}
