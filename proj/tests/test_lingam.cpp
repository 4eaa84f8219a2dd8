#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "elicit/errors.hpp"
#include "elicit/lingam.hpp"
#include "elicit/util.hpp"

using namespace elicit;

namespace {

double uniform_pm1(util::SplitMix& rng) { return 2.0 * rng.next_double() - 1.0; }

// x2 = 0.8 x1 + e with uniform noise: strongly non-Gaussian, the working
// regime for both estimators.
RealMatrix two_var_fixture(uint64_t seed, int n) {
    util::SplitMix rng(seed);
    RealMatrix data;
    for (int t = 0; t < n; ++t) {
        const double x1 = uniform_pm1(rng);
        const double x2 = 0.8 * x1 + 0.1 * uniform_pm1(rng);
        data.push_back({x1, x2});
    }
    return data;
}

// x0 -> x1 -> x2 chain with uniform noise.
RealMatrix chain_fixture(uint64_t seed, int n) {
    util::SplitMix rng(seed);
    RealMatrix data;
    for (int t = 0; t < n; ++t) {
        const double x0 = uniform_pm1(rng);
        const double x1 = 0.9 * x0 + 0.3 * uniform_pm1(rng);
        const double x2 = -0.7 * x1 + 0.3 * uniform_pm1(rng);
        data.push_back({x0, x1, x2});
    }
    return data;
}

double ols_slope(const RealMatrix& data) {
    double mx = 0, my = 0;
    for (const auto& row : data) {
        mx += row[0];
        my += row[1];
    }
    mx /= static_cast<double>(data.size());
    my /= static_cast<double>(data.size());
    double sxy = 0, sxx = 0;
    for (const auto& row : data) {
        sxy += (row[0] - mx) * (row[1] - my);
        sxx += (row[0] - mx) * (row[0] - mx);
    }
    return sxy / sxx;
}

int position(const std::vector<int>& order, int v) {
    return static_cast<int>(std::find(order.begin(), order.end(), v) - order.begin());
}

bool strictly_lower_under_order(const WeightedDag& d) {
    const int m = static_cast<int>(d.b.size());
    std::vector<int> pos(static_cast<size_t>(m));
    for (int p = 0; p < m; ++p) pos[static_cast<size_t>(d.order[static_cast<size_t>(p)])] = p;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            if (d.b[static_cast<size_t>(i)][static_cast<size_t>(j)] != 0.0 &&
                pos[static_cast<size_t>(j)] >= pos[static_cast<size_t>(i)])
                return false;
    return true;
}

}  // namespace

TEST_CASE("direct lingam recovers the two-variable direction and weight") {
    const RealMatrix data = two_var_fixture(7, 5000);
    WeightedDag d = direct_lingam(data);
    REQUIRE(d.order == std::vector<int>{0, 1});
    const double slope = ols_slope(data);
    CHECK(std::abs(d.b[1][0] - slope) < 1e-9);  // with one predecessor, B is the OLS fit
    CHECK(std::abs(d.b[1][0] - 0.8) <= 0.05);
    CHECK(d.b[0][1] == 0.0);
    CHECK(strictly_lower_under_order(d));
}

TEST_CASE("direct lingam puts the chain root first") {
    WeightedDag d = direct_lingam(chain_fixture(9, 5000));
    REQUIRE(d.order.size() == 3);
    CHECK(d.order[0] == 0);
    CHECK(position(d.order, 1) < position(d.order, 2));
    CHECK(std::abs(d.b[1][0] - 0.9) < 0.1);
    CHECK(std::abs(d.b[2][1] + 0.7) < 0.1);
}

TEST_CASE("independent columns prune to an empty graph") {
    util::SplitMix rng(13);
    RealMatrix data;
    for (int t = 0; t < 5000; ++t) data.push_back({uniform_pm1(rng), uniform_pm1(rng)});
    WeightedDag d = direct_lingam(data);
    for (const auto& row : d.b)
        for (double w : row) CHECK(w == 0.0);
}

TEST_CASE("ica lingam agrees on the two-variable fixture") {
    const RealMatrix data = two_var_fixture(7, 5000);
    IcaLingamResult r = ica_lingam(data, 42);
    CHECK(r.converged);
    CHECK(r.dag.order == std::vector<int>{0, 1});
    CHECK(std::abs(r.dag.b[1][0] - 0.8) <= 0.1);
    CHECK(strictly_lower_under_order(r.dag));
}

TEST_CASE("ica lingam is deterministic for a fixed seed") {
    const RealMatrix data = chain_fixture(9, 2000);
    IcaLingamResult a = ica_lingam(data, 42);
    IcaLingamResult b = ica_lingam(data, 42);
    CHECK(a.dag.order == b.dag.order);
    CHECK(a.dag.b == b.dag.b);
    CHECK(a.converged == b.converged);
}

TEST_CASE("best_causal_order inverts a known permutation") {
    // True order 2 < 0 < 1: nonzeros only where the cause precedes the effect.
    std::vector<std::vector<double>> b = {
        {0.0, 0.0, 0.9},   // 2 -> 0
        {0.8, 0.0, 0.4},   // 0 -> 1, 2 -> 1
        {0.0, 0.0, 0.0},
    };
    CHECK(best_causal_order(b) == std::vector<int>{2, 0, 1});
}

TEST_CASE("best_causal_order minimizes over all six permutations") {
    std::vector<std::vector<double>> b = {
        {0.0, 0.2, 0.0},
        {0.0, 0.0, 0.0},
        {0.7, 0.3, 0.0},
    };
    const std::vector<int> got = best_causal_order(b);
    auto upper_mass = [&](const std::vector<int>& order) {
        double s = 0;
        for (size_t p = 0; p < order.size(); ++p)
            for (size_t q = p + 1; q < order.size(); ++q) {
                const double w = b[static_cast<size_t>(order[p])][static_cast<size_t>(order[q])];
                s += w * w;
            }
        return s;
    };
    std::vector<int> perm = {0, 1, 2};
    do {
        CHECK(upper_mass(got) <= upper_mass(perm) + 1e-15);
    } while (std::next_permutation(perm.begin(), perm.end()));
}

TEST_CASE("gaussian-only data raises the nonconvergence flag") {
    util::SplitMix rng(21);
    auto gauss = [&rng]() {
        const double u1 = std::max(rng.next_double(), 1e-12);
        const double u2 = rng.next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    };
    RealMatrix data;
    for (int t = 0; t < 2000; ++t) {
        const double a = gauss();
        data.push_back({a, 0.5 * a + gauss()});
    }
    IcaLingamResult r = ica_lingam(data, 42);
    CHECK_FALSE(r.converged);
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(direct_lingam({}), DegenerateMatrix);
    CHECK_THROWS_AS(direct_lingam({{1.0}, {2.0}, {3.0}}), DegenerateMatrix);
    CHECK_THROWS_AS(direct_lingam({{1.0, 2.0}, {3.0, 4.0}}), DegenerateMatrix);
    CHECK_THROWS_AS(direct_lingam({{1.0, 2.0}, {3.0}}), DimMismatch);
    RealMatrix constant;
    for (int t = 0; t < 100; ++t) constant.push_back({1.0, static_cast<double>(t % 2)});
    CHECK_THROWS_AS(direct_lingam(constant), ConstantColumn);
}

TEST_CASE("matrix_to_real keeps shape and values") {
    IncidenceMatrix z;
    z.col_labels = {"a", "b"};
    z.row_ids = {0, 1, 2};
    z.data = {{1, 0}, {0, 1}, {1, 1}};
    const RealMatrix r = matrix_to_real(z);
    REQUIRE(r.size() == 3);
    CHECK(r[0] == std::vector<double>{1.0, 0.0});
    CHECK(r[2] == std::vector<double>{1.0, 1.0});
}
