#pragma once

#include <string>
#include <utility>
#include <vector>

#include "elicit/graph.hpp"
#include "elicit/lingam.hpp"

namespace elicit {

// The three candidate graphs over one shared variable set.
struct GraphBundle {
    Cpdag pc;
    Cpdag ges;
    WeightedDag lingam;
    std::vector<std::string> labels;
};

std::string to_dot(const Cpdag& g);
std::string to_dot(const WeightedDag& g);

struct ReportInfo {
    std::string topic_text;
    std::vector<std::pair<int, std::string>> events;  // canon_id, name
    std::size_t n_docs = 0;
    std::size_t n_cols = 0;
    std::vector<std::pair<std::string, std::string>> dropped;  // label, reason
    bool lingam_converged = true;
};

struct ReportPaths {
    std::string pc_dot;
    std::string ges_dot;
    std::string lingam_dot;
    std::string report_md;
};

// Writes graphs/{pc,ges,lingam}.dot and report.md under dir.
ReportPaths write_report(const GraphBundle& bundle, const ReportInfo& info,
                         const std::string& dir);

}  // namespace elicit
