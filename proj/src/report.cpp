#include "elicit/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <tuple>

#include "elicit/errors.hpp"
#include "elicit/util.hpp"

namespace elicit {

namespace {

std::string dot_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

// (source label, target label, attribute suffix)
using EdgeLine = std::tuple<std::string, std::string, std::string>;

std::string render_dot(const std::vector<std::string>& labels,
                       std::vector<EdgeLine> edges) {
    std::vector<std::string> nodes = labels;
    std::sort(nodes.begin(), nodes.end());
    std::sort(edges.begin(), edges.end());
    std::ostringstream out;
    out << "digraph G {\n";
    for (const auto& n : nodes) out << "  " << dot_quote(n) << ";\n";
    for (const auto& [src, dst, attr] : edges)
        out << "  " << dot_quote(src) << " -> " << dot_quote(dst) << attr
            << ";\n";
    out << "}\n";
    return out.str();
}

std::string format_weight(double w) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", w);
    return buf;
}

}  // namespace

std::string to_dot(const Cpdag& g) {
    std::vector<EdgeLine> edges;
    for (const auto& [a, b] : g.directed)
        edges.emplace_back(g.labels[static_cast<std::size_t>(a)],
                           g.labels[static_cast<std::size_t>(b)], "");
    for (const auto& [a, b] : g.undirected) {
        std::string la = g.labels[static_cast<std::size_t>(a)];
        std::string lb = g.labels[static_cast<std::size_t>(b)];
        if (lb < la) std::swap(la, lb);
        edges.emplace_back(std::move(la), std::move(lb), " [dir=none]");
    }
    return render_dot(g.labels, std::move(edges));
}

std::string to_dot(const WeightedDag& g) {
    std::vector<EdgeLine> edges;
    const std::size_t d = g.b.size();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (g.b[i][j] != 0.0)
                edges.emplace_back(
                    g.labels[j], g.labels[i],
                    " [label=\"" + format_weight(g.b[i][j]) + "\"]");
    return render_dot(g.labels, std::move(edges));
}

namespace {

std::string md_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '|') out += "\\|";
        else out.push_back(c);
    }
    return out;
}

void append_cpdag_edges(std::ostringstream& md, const Cpdag& g) {
    std::vector<std::string> lines;
    for (const auto& [a, b] : g.directed)
        lines.push_back("- " + g.labels[static_cast<std::size_t>(a)] + " -> " +
                        g.labels[static_cast<std::size_t>(b)]);
    for (const auto& [a, b] : g.undirected) {
        std::string la = g.labels[static_cast<std::size_t>(a)];
        std::string lb = g.labels[static_cast<std::size_t>(b)];
        if (lb < la) std::swap(la, lb);
        lines.push_back("- " + la + " -- " + lb);
    }
    if (lines.empty()) {
        md << "(no edges)\n";
        return;
    }
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) md << l << "\n";
}

}  // namespace

ReportPaths write_report(const GraphBundle& bundle, const ReportInfo& info,
                         const std::string& dir) {
    namespace fs = std::filesystem;
    const fs::path root(dir);
    std::error_code ec;
    fs::create_directories(root / "graphs", ec);
    if (ec)
        throw Error("cannot create " + (root / "graphs").string() + ": " +
                    ec.message());

    ReportPaths paths;
    paths.pc_dot = (root / "graphs" / "pc.dot").string();
    paths.ges_dot = (root / "graphs" / "ges.dot").string();
    paths.lingam_dot = (root / "graphs" / "lingam.dot").string();
    paths.report_md = (root / "report.md").string();

    util::write_file(paths.pc_dot, to_dot(bundle.pc));
    util::write_file(paths.ges_dot, to_dot(bundle.ges));
    util::write_file(paths.lingam_dot, to_dot(bundle.lingam));

    std::ostringstream md;
    md << "# Causal elicitation report\n\n";
    if (!info.topic_text.empty()) md << "Topic: " << info.topic_text << "\n\n";

    md << "## Canonical events\n\n";
    md << "| ID | Name |\n|---:|------|\n";
    for (const auto& [id, name] : info.events)
        md << "| " << id << " | " << md_escape(name) << " |\n";
    md << "\n";

    md << "## Incidence matrix\n\n";
    md << info.n_docs << " documents x " << info.n_cols
       << " events after pruning.\n\n";
    md << "Dropped columns:\n\n";
    if (info.dropped.empty()) {
        md << "(none)\n\n";
    } else {
        for (const auto& [label, reason] : info.dropped)
            md << "- \"" << label << "\": " << reason << "\n";
        md << "\n";
    }

    md << "## PC (CPDAG)\n\n";
    append_cpdag_edges(md, bundle.pc);
    md << "\n## GES (CPDAG)\n\n";
    append_cpdag_edges(md, bundle.ges);

    md << "\n## LiNGAM (weighted DAG)\n\n";
    md << "Assumption-violating: the incidence data is binary, not continuous "
          "with non-Gaussian noise, so these estimates are heuristic and "
          "should be read with caution.\n\n";
    if (!info.lingam_converged)
        md << "Warning: ICA did not converge within the iteration cap; "
              "weights are best-effort.\n\n";
    std::vector<std::string> wlines;
    const std::size_t d = bundle.lingam.b.size();
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            if (bundle.lingam.b[i][j] != 0.0)
                wlines.push_back("- " + bundle.lingam.labels[j] + " -> " +
                                 bundle.lingam.labels[i] + " (" +
                                 format_weight(bundle.lingam.b[i][j]) + ")");
    if (wlines.empty()) {
        md << "(no edges)\n";
    } else {
        std::sort(wlines.begin(), wlines.end());
        for (const auto& l : wlines) md << l << "\n";
    }
    md << "\nCausal order: ";
    for (std::size_t p = 0; p < bundle.lingam.order.size(); ++p) {
        if (p) md << " < ";
        md << bundle.lingam
                  .labels[static_cast<std::size_t>(bundle.lingam.order[p])];
    }
    md << "\n";

    util::write_file(paths.report_md, md.str());
    return paths;
}

}  // namespace elicit
