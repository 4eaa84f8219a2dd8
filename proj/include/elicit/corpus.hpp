#pragma once

#include <string>
#include <vector>

#include "elicit/gateway.hpp"

namespace elicit {

struct Topic {
    std::string text;
    std::string slug;  // [a-z0-9-]+, at most 80 chars

    static Topic from_text(const std::string& text);
};

struct Document {
    int doc_id = 0;  // 0..N-1, unique per topic run
    std::string topic_slug;
    std::string text;
    std::string model;
    std::string created_at;           // UTC, ISO 8601
    std::string prompt_fingerprint;   // hex digest of the exact prompt pair

    bool operator==(const Document&) const = default;
};

struct GenerationOptions {
    double temperature = 1.0;  // sampling diversity; prompts are identical across docs
    int max_tokens = 2048;
    std::string time_anchor = "January 2026";
};

// Samples documents for doc_ids missing from `path`, appending each one as
// soon as it arrives so an interrupted run resumes where it stopped. Returns
// documents 0..n-1 in id order.
std::vector<Document> generate_documents(const Topic& topic, int n, LlmClient& client,
                                         const std::string& path,
                                         const GenerationOptions& opts = {});

// Reads dir/documents.jsonl and returns documents sorted by doc_id. Accepts
// externally produced corpora in the same format.
std::vector<Document> load_corpus(const std::string& topic_slug, const std::string& dir);

// Used by both generate and load; exposed for the pipeline's direct-path loads.
std::vector<Document> parse_corpus_file(const std::string& path, const std::string& topic_slug);

std::string document_to_json(const Document& doc);

}  // namespace elicit
