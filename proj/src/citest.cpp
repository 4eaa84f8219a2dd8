#include "elicit/citest.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <map>

#include <boost/math/distributions/chi_squared.hpp>

namespace elicit {
namespace {

void check_vars(const IncidenceMatrix& z, int i, int j, const std::vector<int>& s) {
    const int n = static_cast<int>(z.cols());
    if (i == j) throw BadVars("test variables must differ");
    auto in_range = [&](int v) { return v >= 0 && v < n; };
    if (!in_range(i) || !in_range(j)) throw BadVars("variable index out of range");
    std::set<int> seen;
    for (int v : s) {
        if (!in_range(v)) throw BadVars("conditioning index out of range");
        if (v == i || v == j) throw BadVars("conditioning set overlaps test variables");
        if (!seen.insert(v).second) throw BadVars("duplicate conditioning variable");
    }
}

}  // namespace

GsqResult gsq_ci_test(const IncidenceMatrix& z, int i, int j, const std::vector<int>& s,
                      double alpha) {
    check_vars(z, i, j, s);

    // Stratify rows by the packed bits of the conditioning columns.
    std::map<uint64_t, std::array<std::array<long, 2>, 2>> tables;
    for (size_t row = 0; row < z.rows(); ++row) {
        uint64_t key = 0;
        for (size_t b = 0; b < s.size(); ++b)
            key |= static_cast<uint64_t>(z.data[row][static_cast<size_t>(s[b])] ? 1 : 0) << b;
        auto& t = tables[key];
        ++t[z.data[row][static_cast<size_t>(i)]][z.data[row][static_cast<size_t>(j)]];
    }

    GsqResult result;
    for (const auto& [key, t] : tables) {
        (void)key;
        const long total = t[0][0] + t[0][1] + t[1][0] + t[1][1];
        if (total < 5) continue;
        const long r0 = t[0][0] + t[0][1], r1 = t[1][0] + t[1][1];
        const long c0 = t[0][0] + t[1][0], c1 = t[0][1] + t[1][1];
        const int rows_pos = (r0 > 0) + (r1 > 0);
        const int cols_pos = (c0 > 0) + (c1 > 0);
        const int dof_s = (rows_pos - 1) * (cols_pos - 1);
        if (dof_s == 0) continue;

        const long rm[2] = {r0, r1}, cm[2] = {c0, c1};
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                if (t[a][b] == 0) continue;  // 0 * ln(0/E) = 0
                const double observed = static_cast<double>(t[a][b]);
                const double expected =
                    static_cast<double>(rm[a]) * static_cast<double>(cm[b]) /
                    static_cast<double>(total);
                result.g2 += 2.0 * observed * std::log(observed / expected);
            }
        result.dof += dof_s;
    }

    if (result.dof == 0) {
        result.g2 = 0.0;
        result.p = 1.0;
        result.independent = true;
        return result;
    }
    if (result.g2 < 0.0) result.g2 = 0.0;  // guard rounding at the boundary

    boost::math::chi_squared dist(result.dof);
    result.p = boost::math::cdf(boost::math::complement(dist, result.g2));
    result.independent = result.p > alpha;
    return result;
}

GsqOracle::GsqOracle(const IncidenceMatrix& z, double alpha) : z_(z), alpha_(alpha) {
    if (alpha <= 0.0 || alpha >= 1.0) throw BadVars("alpha must lie in (0, 1)");
    for (size_t r = 0; r < z.rows(); ++r)
        for (size_t c = 0; c < z.cols(); ++c)
            if (z.data[r][c] > 1) throw BadVars("G-squared test expects binary columns");
}

bool GsqOracle::independent(int i, int j, const std::vector<int>& s) {
    return gsq_ci_test(z_, i, j, s, alpha_).independent;
}

}  // namespace elicit
