#include "elicit/lingam.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>

#include "elicit/errors.hpp"
#include "elicit/util.hpp"

namespace elicit {

namespace {

// Differential entropy of a standard Gaussian, 0.5 * (1 + ln(2*pi)).
constexpr double kGaussEntropy = 1.4189385332046727;

Eigen::MatrixXd to_eigen_centered(const RealMatrix& data) {
    if (data.empty()) throw DegenerateMatrix("no rows");
    const std::size_t d = data.front().size();
    if (d < 2) throw DegenerateMatrix("need at least 2 variables");
    Eigen::MatrixXd x(static_cast<Eigen::Index>(data.size()),
                      static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < data.size(); ++r) {
        if (data[r].size() != d) throw DimMismatch("ragged data matrix");
        for (std::size_t c = 0; c < d; ++c)
            x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                data[r][c];
    }
    if (x.rows() < 3) throw DegenerateMatrix("need at least 3 rows");
    x.rowwise() -= x.colwise().mean();
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
        const double var = x.col(c).squaredNorm() / static_cast<double>(x.rows());
        if (var < 1e-12)
            throw ConstantColumn("column " + std::to_string(c) +
                                 " has zero variance");
    }
    return x;
}

// Maximum-entropy approximation with the log-cosh and Gaussian-kernel
// contrasts; expects a zero-mean input and standardizes it internally.
double entropy_std(const Eigen::VectorXd& u) {
    const double n = static_cast<double>(u.size());
    const double sd = std::sqrt(u.squaredNorm() / n);
    if (sd < 1e-12) return kGaussEntropy;  // no shape information left
    double m_logcosh = 0.0;
    double m_gauss = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
        const double v = u(i) / sd;
        m_logcosh += std::log(std::cosh(v));
        m_gauss += v * std::exp(-0.5 * v * v);
    }
    m_logcosh /= n;
    m_gauss /= n;
    const double d1 = m_logcosh - 0.37457;
    return kGaussEntropy - 79.047 * d1 * d1 - 7.4129 * m_gauss * m_gauss;
}

// Residual of xi regressed on xj (both zero mean).
Eigen::VectorXd residual_of(const Eigen::VectorXd& xi,
                            const Eigen::VectorXd& xj) {
    const double denom = xj.squaredNorm();
    if (denom < 1e-300) return xi;
    return xi - (xi.dot(xj) / denom) * xj;
}

// One DirectLiNGAM step: among the remaining variables pick the one with the
// least evidence against exogeneity, Sum_j min(0, D_ij)^2 with the pairwise
// likelihood-ratio statistic D built from entropy differences.
int pick_root(const Eigen::MatrixXd& x, const std::vector<int>& remaining) {
    if (remaining.size() == 1) return remaining.front();
    int best = remaining.front();
    double best_score = std::numeric_limits<double>::infinity();
    for (int i : remaining) {
        double score = 0.0;
        for (int j : remaining) {
            if (j == i) continue;
            const Eigen::VectorXd& xi = x.col(i);
            const Eigen::VectorXd& xj = x.col(j);
            const Eigen::VectorXd ri = residual_of(xi, xj);
            const Eigen::VectorXd rj = residual_of(xj, xi);
            const double diff = (entropy_std(xj) + entropy_std(ri)) -
                                (entropy_std(xi) + entropy_std(rj));
            const double m = std::min(0.0, diff);
            score += m * m;
        }
        if (score < best_score) {
            best_score = score;
            best = i;
        }
    }
    return best;
}

std::vector<std::vector<double>> estimate_b(const Eigen::MatrixXd& x,
                                            const std::vector<int>& order,
                                            double prune_threshold) {
    const std::size_t d = order.size();
    std::vector<std::vector<double>> b(d, std::vector<double>(d, 0.0));
    for (std::size_t p = 1; p < d; ++p) {
        const int target = order[p];
        Eigen::MatrixXd preds(x.rows(), static_cast<Eigen::Index>(p));
        for (std::size_t q = 0; q < p; ++q)
            preds.col(static_cast<Eigen::Index>(q)) = x.col(order[q]);
        const Eigen::VectorXd beta =
            preds.colPivHouseholderQr().solve(x.col(target));
        for (std::size_t q = 0; q < p; ++q) {
            const double w = beta(static_cast<Eigen::Index>(q));
            if (std::abs(w) >= prune_threshold)
                b[static_cast<std::size_t>(target)]
                 [static_cast<std::size_t>(order[q])] = w;
        }
    }
    return b;
}

double gauss_draw(util::SplitMix& rng) {
    // Box-Muller; u1 nudged away from zero to keep the log finite.
    const double u1 = std::max(rng.next_double(), 1e-12);
    const double u2 = rng.next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

WeightedDag direct_lingam(const RealMatrix& data, double prune_threshold) {
    Eigen::MatrixXd x = to_eigen_centered(data);
    const int d = static_cast<int>(x.cols());

    std::vector<int> remaining(static_cast<std::size_t>(d));
    std::iota(remaining.begin(), remaining.end(), 0);
    std::vector<int> order;
    order.reserve(remaining.size());

    Eigen::MatrixXd work = x;  // progressively residualized copy
    while (!remaining.empty()) {
        const int root = pick_root(work, remaining);
        order.push_back(root);
        remaining.erase(std::find(remaining.begin(), remaining.end(), root));
        for (int k : remaining)
            work.col(k) = residual_of(work.col(k), work.col(root));
    }

    WeightedDag dag;
    dag.order = order;
    dag.b = estimate_b(x, order, prune_threshold);
    return dag;
}

std::vector<int> best_causal_order(const std::vector<std::vector<double>>& b) {
    const int d = static_cast<int>(b.size());
    std::vector<int> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0);
    if (d <= 1) return order;

    auto upper_mass = [&](const std::vector<int>& perm) {
        double s = 0.0;
        for (int p = 0; p < d; ++p)
            for (int q = p + 1; q < d; ++q) {
                const double v = b[static_cast<std::size_t>(perm[p])]
                                  [static_cast<std::size_t>(perm[q])];
                s += v * v;
            }
        return s;
    };

    if (d <= 8) {
        std::vector<int> perm = order;
        std::vector<int> best = perm;
        double best_mass = upper_mass(perm);
        while (std::next_permutation(perm.begin(), perm.end())) {
            const double m = upper_mass(perm);
            if (m < best_mass) {
                best_mass = m;
                best = perm;
            }
        }
        return best;
    }

    // Greedy for larger problems: repeatedly take the variable that depends
    // least (in squared weight) on everything still unplaced.
    std::vector<int> remaining = order;
    std::vector<int> result;
    result.reserve(order.size());
    while (!remaining.empty()) {
        int pick = remaining.front();
        double pick_mass = std::numeric_limits<double>::infinity();
        for (int r : remaining) {
            double m = 0.0;
            for (int j : remaining) {
                if (j == r) continue;
                const double v =
                    b[static_cast<std::size_t>(r)][static_cast<std::size_t>(j)];
                m += v * v;
            }
            if (m < pick_mass) {
                pick_mass = m;
                pick = r;
            }
        }
        result.push_back(pick);
        remaining.erase(std::find(remaining.begin(), remaining.end(), pick));
    }
    return result;
}

IcaLingamResult ica_lingam(const RealMatrix& data, uint64_t seed,
                           double prune_threshold) {
    Eigen::MatrixXd x = to_eigen_centered(data);
    const Eigen::Index n = x.rows();
    const Eigen::Index d = x.cols();

    const Eigen::MatrixXd cov =
        (x.transpose() * x) / static_cast<double>(n - 1);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
    if (eig.info() != Eigen::Success)
        throw DegenerateMatrix("covariance eigendecomposition failed");
    const Eigen::VectorXd evals = eig.eigenvalues();
    if (evals.minCoeff() < 1e-10)
        throw DegenerateMatrix("covariance is rank deficient");
    const Eigen::MatrixXd whiten = evals.array().rsqrt().matrix().asDiagonal() *
                                   eig.eigenvectors().transpose();
    const Eigen::MatrixXd z = x * whiten.transpose();  // cov(z) = I

    // FastICA, symmetric-free deflation with the tanh nonlinearity.
    util::SplitMix rng(util::mix64(seed ^ 0x696361ULL));
    Eigen::MatrixXd w_white(d, d);
    bool converged = true;
    for (Eigen::Index p = 0; p < d; ++p) {
        Eigen::VectorXd w(d);
        for (Eigen::Index k = 0; k < d; ++k) w(k) = gauss_draw(rng);
        w.normalize();
        bool comp_done = false;
        for (int iter = 0; iter < 1000; ++iter) {
            const Eigen::VectorXd y = z * w;
            const Eigen::VectorXd g = y.array().tanh().matrix();
            const double gprime_mean =
                (1.0 - g.array().square()).mean();
            Eigen::VectorXd w_new =
                (z.transpose() * g) / static_cast<double>(n) - gprime_mean * w;
            for (Eigen::Index q = 0; q < p; ++q)
                w_new -= w_new.dot(w_white.row(q)) * w_white.row(q).transpose();
            const double norm = w_new.norm();
            if (norm < 1e-12) {
                for (Eigen::Index k = 0; k < d; ++k) w_new(k) = gauss_draw(rng);
                for (Eigen::Index q = 0; q < p; ++q)
                    w_new -=
                        w_new.dot(w_white.row(q)) * w_white.row(q).transpose();
                w = w_new.normalized();
                continue;
            }
            w_new /= norm;
            const bool done = std::abs(1.0 - std::abs(w_new.dot(w))) < 1e-6;
            w = w_new;
            if (done) {
                comp_done = true;
                break;
            }
        }
        if (!comp_done) converged = false;
        w_white.row(p) = w.transpose();
    }

    const Eigen::MatrixXd w_full = w_white * whiten;  // unmixing in data space

    // Row permutation putting the largest magnitudes on the diagonal,
    // greedily; ties resolved toward the lowest (row, column) pair.
    std::vector<int> row_for_col(static_cast<std::size_t>(d), -1);
    std::vector<bool> row_used(static_cast<std::size_t>(d), false);
    std::vector<bool> col_used(static_cast<std::size_t>(d), false);
    for (Eigen::Index step = 0; step < d; ++step) {
        int br = -1, bc = -1;
        double bv = -1.0;
        for (Eigen::Index r = 0; r < d; ++r) {
            if (row_used[static_cast<std::size_t>(r)]) continue;
            for (Eigen::Index c = 0; c < d; ++c) {
                if (col_used[static_cast<std::size_t>(c)]) continue;
                const double v = std::abs(w_full(r, c));
                if (v > bv) {
                    bv = v;
                    br = static_cast<int>(r);
                    bc = static_cast<int>(c);
                }
            }
        }
        row_used[static_cast<std::size_t>(br)] = true;
        col_used[static_cast<std::size_t>(bc)] = true;
        row_for_col[static_cast<std::size_t>(bc)] = br;
    }

    Eigen::MatrixXd w_perm(d, d);
    for (Eigen::Index c = 0; c < d; ++c)
        w_perm.row(c) = w_full.row(row_for_col[static_cast<std::size_t>(c)]);
    for (Eigen::Index c = 0; c < d; ++c) {
        const double diag = w_perm(c, c);
        if (std::abs(diag) < 1e-12) {
            converged = false;
            continue;
        }
        w_perm.row(c) /= diag;
    }

    std::vector<std::vector<double>> b(
        static_cast<std::size_t>(d),
        std::vector<double>(static_cast<std::size_t>(d), 0.0));
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (i != j)
                b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    -w_perm(i, j);

    IcaLingamResult result;
    result.converged = converged;
    result.dag.order = best_causal_order(b);

    // Enforce the ordering: zero everything above the causal order, prune
    // what remains.
    std::vector<int> pos(static_cast<std::size_t>(d), 0);
    for (std::size_t p = 0; p < result.dag.order.size(); ++p)
        pos[static_cast<std::size_t>(result.dag.order[p])] =
            static_cast<int>(p);
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j) {
            auto& cell =
                b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (pos[static_cast<std::size_t>(j)] >=
                pos[static_cast<std::size_t>(i)])
                cell = 0.0;
            else if (std::abs(cell) < prune_threshold)
                cell = 0.0;
        }
    result.dag.b = std::move(b);
    return result;
}

RealMatrix matrix_to_real(const IncidenceMatrix& z) {
    RealMatrix out(z.rows(), std::vector<double>(z.cols(), 0.0));
    for (std::size_t r = 0; r < z.rows(); ++r)
        for (std::size_t c = 0; c < z.cols(); ++c)
            out[r][c] = static_cast<double>(z.data[r][c]);
    return out;
}

}  // namespace elicit
