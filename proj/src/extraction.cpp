#include "elicit/extraction.hpp"

#include <cctype>
#include <optional>
#include <unordered_set>

#include "elicit/prompts.hpp"
#include "elicit/util.hpp"

#include "json.hpp"

namespace elicit {
namespace {

using namespace util;

// Peels a ```lang ... ``` wrapper so fenced replies hit the real parsers.
std::string strip_code_fence(std::string s) {
    if (!starts_with(s, "```")) return s;
    auto first_nl = s.find('\n');
    auto closing = s.rfind("```");
    if (first_nl == std::string::npos || closing <= first_nl) return s;
    return trim(s.substr(first_nl + 1, closing - first_nl - 1));
}

std::optional<std::vector<std::string>> as_string_array(const nlohmann::json& j) {
    if (!j.is_array()) return std::nullopt;
    std::vector<std::string> items;
    for (const auto& el : j) {
        if (!el.is_string()) return std::nullopt;
        items.push_back(el.get<std::string>());
    }
    return items;
}

std::optional<std::vector<std::string>> try_json(const std::string& text) {
    auto j = nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) return std::nullopt;
    if (auto items = as_string_array(j)) return items;
    if (j.is_object()) {
        std::optional<std::vector<std::string>> found;
        for (const auto& [key, value] : j.items()) {
            (void)key;
            auto items = as_string_array(value);
            if (!items) continue;
            if (found) return std::nullopt;  // ambiguous: two candidate arrays
            found = items;
        }
        return found;
    }
    return std::nullopt;
}

// Small dedicated grammar for ['a', "b"] style literals: brackets, commas,
// single- or double-quoted items, backslash escapes, optional trailing comma.
std::optional<std::vector<std::string>> try_quoted_list(const std::string& text) {
    size_t i = 0;
    const size_t n = text.size();
    auto skip_ws = [&] {
        while (i < n && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r'))
            ++i;
    };

    skip_ws();
    if (i >= n || text[i] != '[') return std::nullopt;
    ++i;

    std::vector<std::string> items;
    for (;;) {
        skip_ws();
        if (i < n && text[i] == ']') {
            ++i;
            break;
        }
        if (i >= n || (text[i] != '\'' && text[i] != '"')) return std::nullopt;
        char quote = text[i++];
        std::string item;
        for (;;) {
            if (i >= n) return std::nullopt;  // unterminated
            char c = text[i++];
            if (c == '\\') {
                if (i >= n) return std::nullopt;
                char esc = text[i++];
                if (esc != quote && esc != '\\') item.push_back('\\');
                item.push_back(esc);
            } else if (c == quote) {
                break;
            } else {
                item.push_back(c);
            }
        }
        items.push_back(std::move(item));
        skip_ws();
        if (i < n && text[i] == ',') {
            ++i;
            continue;
        }
        if (i < n && text[i] == ']') {
            ++i;
            break;
        }
        return std::nullopt;
    }
    skip_ws();
    if (i != n) return std::nullopt;  // trailing garbage disqualifies the parse
    return items;
}

// Removes one leading bullet marker: -, *, bullet dot, or 1.-99. numbering.
std::string strip_bullet(const std::string& line) {
    std::string s = trim(line);
    auto after = [&](size_t k) { return trim(s.substr(k)); };
    if (starts_with(s, "\xe2\x80\xa2")) return after(3);
    if (!s.empty() && (s[0] == '-' || s[0] == '*')) {
        if (s.size() == 1) return "";
        if (s[1] == ' ' || s[1] == '\t') return after(2);
        return s;  // "-5 degrees" keeps its sign
    }
    size_t d = 0;
    while (d < s.size() && d < 2 && std::isdigit(static_cast<unsigned char>(s[d]))) ++d;
    if (d > 0 && d < s.size() && s[d] == '.') return after(d + 1);
    return s;
}

std::vector<std::string> fallback_split(const std::string& text) {
    const bool single_line = text.find('\n') == std::string::npos;
    std::vector<std::string> out;
    for (const auto& line : split_lines(text)) {
        std::string item = strip_bullet(line);
        if (single_line) {
            size_t start = 0;
            for (size_t i = 0; i <= item.size(); ++i) {
                if (i != item.size() && item[i] != ',') continue;
                std::string frag = trim(item.substr(start, i - start));
                if (!frag.empty()) out.push_back(std::move(frag));
                start = i + 1;
            }
        } else if (!item.empty()) {
            out.push_back(std::move(item));
        }
    }
    return out;
}

}  // namespace

std::vector<std::string> normalize_llm_list(const std::string& text) {
    std::string body = strip_code_fence(trim(text));
    if (body.empty()) return {};
    if (auto items = try_json(body)) return *items;
    if (auto items = try_quoted_list(body)) return *items;
    return fallback_split(body);
}

std::string clean_mention(const std::string& s) {
    std::string cur = collapse_whitespace(s);
    for (;;) {
        std::string next = cur;
        while (!next.empty() && (next.back() == ',' || next.back() == ';')) next.pop_back();
        next = trim(next);
        if (next.size() >= 2) {
            char f = next.front(), b = next.back();
            if ((f == '"' && b == '"') || (f == '\'' && b == '\''))
                next = trim(next.substr(1, next.size() - 2));
        }
        {
            std::string stripped = strip_bullet(next);
            if (stripped != next) next = stripped;
        }
        next = collapse_whitespace(next);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

std::vector<EventMention> extract_events(const Document& doc, LlmClient& client) {
    if (doc.text.empty()) throw Error("cannot extract from an empty document");

    ChatRequest req;
    req.system = prompts::extract_system();
    req.user = prompts::extract_user(doc.text);
    req.temperature = 0.0;
    std::string reply = client.chat(req);

    auto raw_items = normalize_llm_list(reply);
    if (raw_items.empty() && !trim(reply).empty() && trim(reply) != "[]")
        log_warn("doc " + std::to_string(doc.doc_id) + ": no events recognized in reply");

    std::vector<EventMention> mentions;
    std::unordered_set<std::string> seen;
    for (const auto& raw : raw_items) {
        std::string cleaned = clean_mention(raw);
        if (cleaned.empty() || !seen.insert(cleaned).second) continue;
        mentions.push_back(EventMention{doc.doc_id, static_cast<int>(mentions.size()), raw,
                                        std::move(cleaned)});
    }
    return mentions;
}

void write_events_jsonl(const std::string& path, const std::vector<DocEvents>& lists) {
    std::string out;
    for (const auto& d : lists) {
        nlohmann::ordered_json j;
        j["doc_id"] = d.doc_id;
        j["mentions"] = d.mentions;
        out += j.dump();
        out += "\n";
    }
    write_file(path, out);
}

std::vector<DocEvents> read_events_jsonl(const std::string& path) {
    std::vector<DocEvents> lists;
    int line_no = 0;
    for (const auto& line : split_lines(read_file(path))) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object() || !j.contains("doc_id") ||
            !j.contains("mentions") || !j["mentions"].is_array())
            throw CorruptCorpus("malformed event list record", line_no);
        DocEvents d;
        d.doc_id = j["doc_id"].get<int>();
        for (const auto& m : j["mentions"]) {
            if (!m.is_string()) throw CorruptCorpus("non-string mention", line_no);
            d.mentions.push_back(m.get<std::string>());
        }
        lists.push_back(std::move(d));
    }
    return lists;
}

}  // namespace elicit
