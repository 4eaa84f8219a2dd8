#pragma once

#include <string>
#include <vector>

#include "elicit/corpus.hpp"
#include "elicit/gateway.hpp"

namespace elicit {

struct EventMention {
    int doc_id = 0;
    int position = 0;     // index within the document's final mention list
    std::string raw;      // list item as returned by the provider
    std::string cleaned;  // trimmed, whitespace collapsed, quotes/bullets stripped

    bool operator==(const EventMention&) const = default;
};

// Per-document mention list as persisted in events_raw.jsonl / events_canon.jsonl.
struct DocEvents {
    int doc_id = 0;
    std::vector<std::string> mentions;

    bool operator==(const DocEvents&) const = default;
};

// Turns a messy LLM reply into a list of strings, trying in order: JSON array
// of strings (or an object holding exactly one such array), a quoted list
// literal like ['a', 'b'], then newline/bullet/comma splitting. Total; an
// explicitly parsed empty list stays empty.
std::vector<std::string> normalize_llm_list(const std::string& text);

// Idempotent cleanup: collapse whitespace, drop trailing list punctuation,
// strip surrounding quote layers and leading bullet markers.
std::string clean_mention(const std::string& s);

// One extraction chat call for the document; normalized, cleaned, deduplicated
// (first occurrence wins). An unparseable reply logs a warning and yields an
// empty list.
std::vector<EventMention> extract_events(const Document& doc, LlmClient& client);

void write_events_jsonl(const std::string& path, const std::vector<DocEvents>& lists);
std::vector<DocEvents> read_events_jsonl(const std::string& path);

}  // namespace elicit
