#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <string>
#include <vector>

#include "elicit/errors.hpp"
#include "elicit/incidence.hpp"
#include "elicit/util.hpp"
#include "helpers.hpp"

using namespace elicit;
using SV = std::vector<std::string>;

namespace {

std::vector<DocEvents> make_lists(const std::vector<SV>& raw) {
    std::vector<DocEvents> lists;
    for (std::size_t i = 0; i < raw.size(); ++i)
        lists.push_back({static_cast<int>(i), raw[i]});
    return lists;
}

// registry with one event per distinct name; grouping[i] = canon id of vocab i
CanonicalRegistry make_registry(const SV& vocab, const std::vector<int>& grouping) {
    CanonicalRegistry reg;
    const int k = grouping.empty()
                      ? 0
                      : *std::max_element(grouping.begin(), grouping.end()) + 1;
    for (int c = 0; c < k; ++c)
        reg.events.push_back({c, "event " + std::to_string(c), {}, {}});
    for (std::size_t i = 0; i < vocab.size(); ++i) {
        reg.events[static_cast<std::size_t>(grouping[i])].members.push_back(vocab[i]);
        reg.map[vocab[i]] = grouping[i];
    }
    return reg;
}

}  // namespace

TEST_CASE("build_raw_matrix basics") {
    const SV vocab = {"a", "b"};
    const IncidenceMatrix x = build_raw_matrix(make_lists({{"a"}, {"b"}}), vocab);
    CHECK(x.data == std::vector<std::vector<uint8_t>>{{1, 0}, {0, 1}});
    CHECK(x.col_labels == vocab);
    CHECK(x.row_ids == std::vector<int>{0, 1});
}

TEST_CASE("build_raw_matrix is an indicator, not a count") {
    const IncidenceMatrix x =
        build_raw_matrix(make_lists({{"a", "a", "'a'"}}), {"a"});
    CHECK(x.data == std::vector<std::vector<uint8_t>>{{1}});
}

TEST_CASE("empty documents give all-zero rows") {
    const IncidenceMatrix x = build_raw_matrix(make_lists({{}, {"a"}}), {"a"});
    CHECK(x.data == std::vector<std::vector<uint8_t>>{{0}, {1}});
}

TEST_CASE("unknown mentions are rejected") {
    CHECK_THROWS_AS(build_raw_matrix(make_lists({{"mystery"}}), {"a"}),
                    UnknownMention);
}

TEST_CASE("aggregate ORs member columns") {
    const IncidenceMatrix x = build_raw_matrix(make_lists({{"a"}, {"b"}}), {"a", "b"});
    const IncidenceMatrix z = aggregate(x, make_registry({"a", "b"}, {0, 0}));
    CHECK(z.cols() == 1);
    CHECK(z.data == std::vector<std::vector<uint8_t>>{{1}, {1}});
    CHECK(z.col_labels == SV{"event 0"});
}

TEST_CASE("aggregate with singleton groups is a relabeling") {
    const IncidenceMatrix x =
        build_raw_matrix(make_lists({{"a", "c"}, {"b"}}), {"a", "b", "c"});
    const IncidenceMatrix z = aggregate(x, make_registry({"a", "b", "c"}, {0, 1, 2}));
    CHECK(z.data == x.data);
    CHECK(z.col_labels == SV{"event 0", "event 1", "event 2"});
    CHECK(z.row_ids == x.row_ids);
}

TEST_CASE("aggregate equals the triple-loop OR oracle on random instances") {
    util::SplitMix rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 1 + static_cast<int>(rng.next_below(20));
        const int m = 1 + static_cast<int>(rng.next_below(8));
        const int k = 1 + static_cast<int>(rng.next_below(static_cast<uint64_t>(m)));

        SV vocab;
        for (int i = 0; i < m; ++i) vocab.push_back("u" + std::to_string(i));
        std::vector<SV> docs(static_cast<std::size_t>(n));
        for (auto& d : docs)
            for (int i = 0; i < m; ++i)
                if (rng.next_below(2)) d.push_back(vocab[static_cast<std::size_t>(i)]);

        std::vector<int> grouping;
        for (int i = 0; i < m; ++i)
            grouping.push_back(static_cast<int>(rng.next_below(static_cast<uint64_t>(k))));
        // make group ids dense so every event owns at least one column
        std::vector<int> remap(static_cast<std::size_t>(k), -1);
        int next = 0;
        for (auto& g : grouping) {
            if (remap[static_cast<std::size_t>(g)] < 0)
                remap[static_cast<std::size_t>(g)] = next++;
            g = remap[static_cast<std::size_t>(g)];
        }

        const IncidenceMatrix x = build_raw_matrix(make_lists(docs), vocab);
        const IncidenceMatrix z = aggregate(x, make_registry(vocab, grouping));

        REQUIRE(z.cols() == static_cast<std::size_t>(next));
        for (int i = 0; i < n; ++i)
            for (int c = 0; c < next; ++c) {
                uint8_t expect = 0;
                for (int j = 0; j < m; ++j)
                    if (grouping[static_cast<std::size_t>(j)] == c)
                        expect = std::max(expect,
                                          x.data[static_cast<std::size_t>(i)]
                                                [static_cast<std::size_t>(j)]);
                CHECK(z.data[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)] ==
                      expect);
            }
    }
}

TEST_CASE("aggregate rejects unmapped columns") {
    const IncidenceMatrix x = build_raw_matrix(make_lists({{"a", "b"}}), {"a", "b"});
    CanonicalRegistry reg = make_registry({"a"}, {0});
    CHECK_THROWS_AS(aggregate(x, reg), UnmappedColumn);
}

TEST_CASE("aggregate row sums never exceed the raw row sums") {
    const IncidenceMatrix x = build_raw_matrix(
        make_lists({{"a", "b", "c"}, {"a"}, {}}), {"a", "b", "c"});
    const IncidenceMatrix z = aggregate(x, make_registry({"a", "b", "c"}, {0, 0, 1}));
    for (std::size_t i = 0; i < x.rows(); ++i) {
        int xs = 0, zs = 0;
        for (uint8_t v : x.data[i]) xs += v;
        for (uint8_t v : z.data[i]) zs += v;
        CHECK(zs <= xs);
    }
}

TEST_CASE("drop_noninformative removes constant columns") {
    IncidenceMatrix z;
    z.col_labels = {"all1", "keep1", "all0", "keep2"};
    z.row_ids = {0, 1};
    z.data = {{1, 1, 0, 0}, {1, 0, 0, 1}};
    const PruneResult pr = drop_noninformative(z);
    CHECK(pr.matrix.col_labels == SV{"keep1", "keep2"});
    CHECK(pr.matrix.data == std::vector<std::vector<uint8_t>>{{1, 0}, {0, 1}});
    REQUIRE(pr.dropped.size() == 2);
    CHECK(pr.dropped[0] == std::pair<std::string, std::string>{"all1", "all-1"});
    CHECK(pr.dropped[1] == std::pair<std::string, std::string>{"all0", "all-0"});
}

TEST_CASE("drop_noninformative is the identity without constant columns") {
    IncidenceMatrix z;
    z.col_labels = {"a", "b"};
    z.row_ids = {0, 1};
    z.data = {{1, 0}, {0, 1}};
    const PruneResult pr = drop_noninformative(z);
    CHECK(pr.matrix == z);
    CHECK(pr.dropped.empty());
    // idempotence
    CHECK(drop_noninformative(pr.matrix).matrix == pr.matrix);
}

TEST_CASE("drop_noninformative needs two informative columns") {
    IncidenceMatrix z;
    z.col_labels = {"a", "b"};
    z.row_ids = {0, 1};
    z.data = {{1, 1}, {1, 0}};
    CHECK_THROWS_AS(drop_noninformative(z), DegenerateMatrix);
}

TEST_CASE("csv round trip with quoting") {
    IncidenceMatrix z;
    z.col_labels = {"plain", "with, comma", "with \"quote\""};
    z.row_ids = {0, 2};
    z.data = {{1, 0, 1}, {0, 1, 0}};
    const std::string csv = matrix_to_csv(z);
    CHECK(util::starts_with(csv, "doc_id,"));
    CHECK(util::contains(csv, "\"with, comma\""));
    CHECK(util::contains(csv, "\"with \"\"quote\"\"\""));
    CHECK(csv.back() == '\n');
    CHECK(matrix_from_csv(csv) == z);
}

TEST_CASE("csv parser rejects non-binary cells and bad headers") {
    CHECK_THROWS(matrix_from_csv("doc_id,a\n0,2\n"));
    CHECK_THROWS(matrix_from_csv("id,a\n0,1\n"));
}
