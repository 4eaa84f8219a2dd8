#pragma once

#include <set>
#include <vector>

#include "elicit/graph.hpp"
#include "elicit/incidence.hpp"

namespace elicit {

struct GsqResult {
    bool independent = true;
    double g2 = 0.0;
    int dof = 0;
    double p = 1.0;
};

// Conditional G-squared likelihood-ratio test on binary columns, stratified
// by the configuration of s. Strata with fewer than 5 rows or no variation
// contribute nothing; zero total dof means "no evidence", i.e. independent.
GsqResult gsq_ci_test(const IncidenceMatrix& z, int i, int j, const std::vector<int>& s,
                      double alpha);

// Conditional-independence source PC consumes: either data-backed (G-squared)
// or a ground-truth DAG answering d-separation queries exactly.
class CiOracle {
public:
    virtual ~CiOracle() = default;
    virtual int n_vars() const = 0;
    virtual bool independent(int i, int j, const std::vector<int>& s) = 0;
};

class GsqOracle final : public CiOracle {
public:
    GsqOracle(const IncidenceMatrix& z, double alpha);
    int n_vars() const override { return static_cast<int>(z_.cols()); }
    bool independent(int i, int j, const std::vector<int>& s) override;

private:
    const IncidenceMatrix& z_;
    double alpha_;
};

class DSepOracle final : public CiOracle {
public:
    explicit DSepOracle(Dag dag) : dag_(std::move(dag)) {}
    int n_vars() const override { return dag_.n; }
    bool independent(int i, int j, const std::vector<int>& s) override {
        return d_separated(dag_, i, j, std::set<int>(s.begin(), s.end()));
    }

private:
    Dag dag_;
};

}  // namespace elicit
