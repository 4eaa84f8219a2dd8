#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "elicit/errors.hpp"
#include "elicit/ges.hpp"
#include "elicit/graph.hpp"
#include "elicit/util.hpp"

using namespace elicit;

namespace {

IncidenceMatrix from_columns(const std::vector<std::vector<uint8_t>>& cols) {
    IncidenceMatrix z;
    const std::size_t rows = cols.front().size();
    for (std::size_t c = 0; c < cols.size(); ++c)
        z.col_labels.push_back("v" + std::to_string(c));
    for (std::size_t r = 0; r < rows; ++r) {
        z.row_ids.push_back(static_cast<int>(r));
        std::vector<uint8_t> row;
        for (const auto& col : cols) row.push_back(col[r]);
        z.data.push_back(std::move(row));
    }
    return z;
}

IncidenceMatrix independent_data(uint64_t seed, int n, int vars) {
    util::SplitMix rng(seed);
    std::vector<std::vector<uint8_t>> cols(static_cast<size_t>(vars));
    for (int t = 0; t < n; ++t)
        for (auto& col : cols) col.push_back(static_cast<uint8_t>(rng.next_below(2)));
    return from_columns(cols);
}

// Noisy-OR collider, same mechanism as the pc fixture.
IncidenceMatrix collider_data(uint64_t seed, int n) {
    util::SplitMix rng(seed);
    IncidenceMatrix z;
    z.col_labels = {"x", "y", "z"};
    for (int t = 0; t < n; ++t) {
        const auto x = static_cast<uint8_t>(rng.next_below(2));
        const auto y = static_cast<uint8_t>(rng.next_below(2));
        auto v = static_cast<uint8_t>(x | y);
        if (rng.next_below(10) == 0) v = static_cast<uint8_t>(v ^ 1);
        z.row_ids.push_back(t);
        z.data.push_back({x, y, v});
    }
    return z;
}

constexpr uint64_t kColliderSeed = 0;

}  // namespace

TEST_CASE("independent columns give an empty graph") {
    const IncidenceMatrix z = independent_data(11, 1000, 3);
    Cpdag g = ges(z);
    CHECK(g.directed.empty());
    CHECK(g.undirected.empty());
    CHECK(g.labels == z.col_labels);
}

TEST_CASE("two strongly dependent columns give one undirected edge") {
    util::SplitMix rng(5);
    std::vector<uint8_t> a, b;
    for (int t = 0; t < 1000; ++t) {
        a.push_back(static_cast<uint8_t>(rng.next_below(2)));
        uint8_t v = a.back();
        if (rng.next_below(20) == 0) v = static_cast<uint8_t>(v ^ 1);
        b.push_back(v);
    }
    Cpdag g = ges(from_columns({a, b}));
    CHECK(g.directed.empty());
    CHECK(g.undirected == std::set<std::pair<int, int>>{{0, 1}});
}

TEST_CASE("collider data lands in the collider class") {
    const IncidenceMatrix z = collider_data(kColliderSeed, 400);
    Cpdag g = ges(z);
    Dag truth;
    truth.n = 3;
    truth.edges = {{0, 2}, {1, 2}};
    CHECK(g.same_structure(dag_to_cpdag(truth)));
}

TEST_CASE("local score prefers the empty parent set under pure noise") {
    const IncidenceMatrix z = independent_data(23, 1000, 2);
    DecomposableScore score(z);
    CHECK(score.local(0, {}) >= score.local(0, {1}));
}

TEST_CASE("local score rewards a deterministic parent") {
    util::SplitMix rng(31);
    std::vector<uint8_t> a;
    for (int t = 0; t < 100; ++t) a.push_back(static_cast<uint8_t>(rng.next_below(2)));
    const IncidenceMatrix z = from_columns({a, a});
    DecomposableScore score(z);
    CHECK(score.local(1, {0}) > score.local(1, {}));
}

TEST_CASE("local score ignores columns outside the family") {
    util::SplitMix rng(47);
    std::vector<uint8_t> a, b, c;
    for (int t = 0; t < 300; ++t) {
        a.push_back(static_cast<uint8_t>(rng.next_below(2)));
        b.push_back(static_cast<uint8_t>(rng.next_below(2) | a.back()));
        c.push_back(static_cast<uint8_t>(rng.next_below(2)));
    }
    const IncidenceMatrix abc = from_columns({a, b, c});
    const IncidenceMatrix acb = from_columns({a, c, b});
    DecomposableScore s1(abc);
    DecomposableScore s2(acb);
    CHECK(s1.local(1, {0}) == doctest::Approx(s2.local(2, {0})).epsilon(1e-12));
    CHECK(s1.local(0, {}) == doctest::Approx(s2.local(0, {})).epsilon(1e-12));
}

TEST_CASE("total score decomposes over local terms") {
    const IncidenceMatrix z = collider_data(kColliderSeed, 200);
    DecomposableScore score(z);
    Dag d;
    d.n = 3;
    d.edges = {{0, 2}, {1, 2}};
    const double total = score.total(d);
    const double sum = score.local(0, {}) + score.local(1, {}) + score.local(2, {0, 1});
    CHECK(total == doctest::Approx(sum).epsilon(1e-12));
}

TEST_CASE("search result never scores below the empty graph") {
    const IncidenceMatrix z = collider_data(kColliderSeed, 400);
    DecomposableScore score(z);
    Cpdag g = ges(z, score);
    Dag member = pdag_to_dag(g);
    Dag empty;
    empty.n = 3;
    CHECK(score.total(member) >= score.total(empty));
}

TEST_CASE("ges is deterministic on the same input") {
    const IncidenceMatrix z = collider_data(kColliderSeed, 400);
    Cpdag a = ges(z);
    Cpdag b = ges(z);
    CHECK(a.same_structure(b));
}

TEST_CASE("bdeu scoring also recovers the strong edge") {
    util::SplitMix rng(5);
    std::vector<uint8_t> a, b;
    for (int t = 0; t < 1000; ++t) {
        a.push_back(static_cast<uint8_t>(rng.next_below(2)));
        uint8_t v = a.back();
        if (rng.next_below(20) == 0) v = static_cast<uint8_t>(v ^ 1);
        b.push_back(v);
    }
    const IncidenceMatrix z = from_columns({a, b});
    DecomposableScore score(z, DecomposableScore::Kind::bdeu, 1.0);
    Cpdag g = ges(z, score);
    CHECK(g.undirected == std::set<std::pair<int, int>>{{0, 1}});
    CHECK(g.directed.empty());
}
