#include "elicit/incidence.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "elicit/util.hpp"

namespace elicit {
namespace {

std::string csv_quote(const std::string& field) {
    bool needs = field.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<std::string> parse_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

IncidenceMatrix build_raw_matrix(const std::vector<DocEvents>& lists,
                                 const std::vector<std::string>& vocab) {
    std::unordered_map<std::string, size_t> index;
    for (size_t m = 0; m < vocab.size(); ++m) index.emplace(vocab[m], m);

    IncidenceMatrix x;
    x.col_labels = vocab;
    x.data.assign(lists.size(), std::vector<uint8_t>(vocab.size(), 0));
    x.row_ids.reserve(lists.size());
    for (size_t i = 0; i < lists.size(); ++i) {
        x.row_ids.push_back(lists[i].doc_id);
        for (const auto& mention : lists[i].mentions) {
            std::string cleaned = clean_mention(mention);
            if (cleaned.empty()) continue;
            auto it = index.find(cleaned);
            if (it == index.end())
                throw UnknownMention("mention not in vocabulary: " + cleaned);
            x.data[i][it->second] = 1;
        }
    }
    return x;
}

IncidenceMatrix aggregate(const IncidenceMatrix& x, const CanonicalRegistry& reg) {
    // Group canonical ids by name so that events a rename made homonymous
    // still yield distinct column labels.
    std::map<int, size_t> id_to_col;
    std::vector<std::string> labels;
    {
        std::map<std::string, size_t> col_by_name;
        std::vector<const CanonicalEvent*> by_id(reg.events.size());
        for (const auto& ev : reg.events) {
            if (ev.canon_id < 0 || static_cast<size_t>(ev.canon_id) >= reg.events.size())
                throw UnmappedColumn("registry canon_id out of range");
            by_id[static_cast<size_t>(ev.canon_id)] = &ev;
        }
        for (const auto* ev : by_id) {
            if (!ev) throw UnmappedColumn("registry canon_ids are not dense");
            auto it = col_by_name.find(ev->name);
            if (it == col_by_name.end()) {
                it = col_by_name.emplace(ev->name, labels.size()).first;
                labels.push_back(ev->name);
            }
            id_to_col[ev->canon_id] = it->second;
        }
    }

    std::vector<size_t> raw_to_col(x.cols());
    for (size_t m = 0; m < x.cols(); ++m) {
        auto it = reg.map.find(x.col_labels[m]);
        if (it == reg.map.end())
            throw UnmappedColumn("raw column not covered by registry: " + x.col_labels[m]);
        raw_to_col[m] = id_to_col.at(it->second);
    }

    IncidenceMatrix z;
    z.col_labels = std::move(labels);
    z.row_ids = x.row_ids;
    z.data.assign(x.rows(), std::vector<uint8_t>(z.col_labels.size(), 0));
    for (size_t i = 0; i < x.rows(); ++i)
        for (size_t m = 0; m < x.cols(); ++m)
            if (x.data[i][m]) z.data[i][raw_to_col[m]] = 1;
    return z;
}

PruneResult drop_noninformative(const IncidenceMatrix& z) {
    PruneResult result;
    std::vector<size_t> keep;
    for (size_t c = 0; c < z.cols(); ++c) {
        bool any0 = false, any1 = false;
        for (size_t i = 0; i < z.rows(); ++i) (z.data[i][c] ? any1 : any0) = true;
        if (any0 && any1) {
            keep.push_back(c);
        } else {
            result.dropped.emplace_back(z.col_labels[c], any1 ? "all-1" : "all-0");
        }
    }
    if (keep.size() < 2)
        throw DegenerateMatrix("fewer than 2 informative columns remain (" +
                               std::to_string(keep.size()) + ")");

    result.matrix.row_ids = z.row_ids;
    for (size_t c : keep) result.matrix.col_labels.push_back(z.col_labels[c]);
    result.matrix.data.assign(z.rows(), std::vector<uint8_t>(keep.size(), 0));
    for (size_t i = 0; i < z.rows(); ++i)
        for (size_t j = 0; j < keep.size(); ++j)
            result.matrix.data[i][j] = z.data[i][keep[j]];
    return result;
}

std::string matrix_to_csv(const IncidenceMatrix& m) {
    std::string out = "doc_id";
    for (const auto& label : m.col_labels) {
        out += ',';
        out += csv_quote(label);
    }
    out += '\n';
    for (size_t i = 0; i < m.rows(); ++i) {
        out += std::to_string(m.row_ids[i]);
        for (size_t c = 0; c < m.cols(); ++c) {
            out += ',';
            out += m.data[i][c] ? '1' : '0';
        }
        out += '\n';
    }
    return out;
}

IncidenceMatrix matrix_from_csv(const std::string& csv) {
    auto lines = util::split_lines(csv);
    if (lines.empty()) throw Error("empty matrix csv");

    IncidenceMatrix m;
    auto header = parse_csv_line(lines[0]);
    if (header.empty() || header[0] != "doc_id")
        throw Error("matrix csv must start with a doc_id column");
    m.col_labels.assign(header.begin() + 1, header.end());

    for (size_t i = 1; i < lines.size(); ++i) {
        if (util::trim(lines[i]).empty()) continue;
        auto fields = parse_csv_line(lines[i]);
        if (fields.size() != header.size())
            throw Error("matrix csv row " + std::to_string(i + 1) + " has " +
                        std::to_string(fields.size()) + " fields, expected " +
                        std::to_string(header.size()));
        m.row_ids.push_back(std::stoi(fields[0]));
        std::vector<uint8_t> row;
        for (size_t c = 1; c < fields.size(); ++c) {
            if (fields[c] != "0" && fields[c] != "1")
                throw Error("matrix csv cell must be 0 or 1, got '" + fields[c] + "'");
            row.push_back(fields[c] == "1" ? 1 : 0);
        }
        m.data.push_back(std::move(row));
    }
    return m;
}

}  // namespace elicit
