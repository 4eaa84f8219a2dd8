#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "elicit/canonicalize.hpp"
#include "elicit/extraction.hpp"

namespace elicit {

struct IncidenceMatrix {
    std::vector<std::vector<uint8_t>> data;  // rows = documents, entries 0/1
    std::vector<std::string> col_labels;     // distinct event names
    std::vector<int> row_ids;                // doc_ids

    size_t rows() const { return data.size(); }
    size_t cols() const { return col_labels.size(); }
    bool operator==(const IncidenceMatrix&) const = default;
};

// X[i][m] = 1 iff document i mentions vocab item m at least once; column
// order = vocabulary order.
IncidenceMatrix build_raw_matrix(const std::vector<DocEvents>& lists,
                                 const std::vector<std::string>& vocab);

// OR-merge of raw columns into canonical columns: Z[i][c] = max over the raw
// columns mapped to c. Columns are keyed by canonical name (events sharing a
// name merge) and ordered by the lowest owning canon_id.
IncidenceMatrix aggregate(const IncidenceMatrix& x, const CanonicalRegistry& reg);

struct PruneResult {
    IncidenceMatrix matrix;
    std::vector<std::pair<std::string, std::string>> dropped;  // (label, "all-0"/"all-1")
};

// Removes constant columns; discovery needs at least 2 informative variables.
PruneResult drop_noninformative(const IncidenceMatrix& z);

// RFC-4180 CSV with a doc_id first column and \n line endings.
std::string matrix_to_csv(const IncidenceMatrix& m);
IncidenceMatrix matrix_from_csv(const std::string& csv);

}  // namespace elicit
