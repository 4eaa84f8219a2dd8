#include "elicit/corpus.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include "elicit/prompts.hpp"
#include "elicit/util.hpp"

#include "json.hpp"

namespace elicit {
namespace {

using namespace util;
using ordered_json = nlohmann::ordered_json;

Document parse_record(const std::string& line, int line_no, const std::string& topic_slug) {
    auto j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object())
        throw CorruptCorpus("malformed corpus record", line_no);

    Document doc;
    try {
        doc.doc_id = j.at("doc_id").get<int>();
        doc.topic_slug = j.at("topic_slug").get<std::string>();
        doc.text = j.at("text").get<std::string>();
        doc.model = j.at("model").get<std::string>();
        doc.created_at = j.at("created_at").get<std::string>();
        doc.prompt_fingerprint = j.at("prompt_fingerprint").get<std::string>();
    } catch (const nlohmann::json::exception&) {
        throw CorruptCorpus("corpus record missing required field", line_no);
    }
    if (doc.doc_id < 0) throw CorruptCorpus("negative doc_id", line_no);
    if (doc.text.empty()) throw CorruptCorpus("empty document text", line_no);
    if (!topic_slug.empty() && doc.topic_slug != topic_slug)
        throw CorruptCorpus("record belongs to topic '" + doc.topic_slug + "'", line_no);
    return doc;
}

}  // namespace

Topic Topic::from_text(const std::string& text) {
    return Topic{text, slugify(text)};
}

std::string document_to_json(const Document& doc) {
    ordered_json j;
    j["doc_id"] = doc.doc_id;
    j["topic_slug"] = doc.topic_slug;
    j["text"] = doc.text;
    j["model"] = doc.model;
    j["created_at"] = doc.created_at;
    j["prompt_fingerprint"] = doc.prompt_fingerprint;
    return j.dump();
}

std::vector<Document> parse_corpus_file(const std::string& path, const std::string& topic_slug) {
    std::vector<Document> docs;
    std::string content = read_file(path);
    int line_no = 0;
    size_t start = 0;
    for (size_t i = 0; i <= content.size(); ++i) {
        if (i != content.size() && content[i] != '\n') continue;
        ++line_no;
        std::string line = content.substr(start, i - start);
        start = i + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        docs.push_back(parse_record(line, line_no, topic_slug));
    }
    std::sort(docs.begin(), docs.end(),
              [](const Document& a, const Document& b) { return a.doc_id < b.doc_id; });
    for (size_t i = 1; i < docs.size(); ++i)
        if (docs[i].doc_id == docs[i - 1].doc_id)
            throw CorruptCorpus("duplicate doc_id " + std::to_string(docs[i].doc_id),
                                line_no);
    return docs;
}

std::vector<Document> generate_documents(const Topic& topic, int n, LlmClient& client,
                                         const std::string& path,
                                         const GenerationOptions& opts) {
    if (n < 1) throw Error("document count must be positive");

    std::map<int, Document> by_id;
    if (std::filesystem::exists(path))
        for (auto& doc : parse_corpus_file(path, topic.slug)) by_id.emplace(doc.doc_id, doc);

    ChatRequest req;
    req.system = prompts::analyst_system(opts.time_anchor);
    req.user = prompts::analyst_user(topic.text);
    req.temperature = opts.temperature;
    req.max_tokens = opts.max_tokens;
    const std::string fingerprint =
        to_hex(fnv1a64(req.user, fnv1a64(req.system + '\x1f')));

    std::ofstream out(path, std::ios::binary | std::ios::app);
    if (!out) throw Error("cannot open corpus file for append: " + path);

    for (int id = 0; id < n; ++id) {
        if (by_id.count(id)) continue;
        Document doc;
        doc.doc_id = id;
        doc.topic_slug = topic.slug;
        doc.text = client.chat(req);
        doc.model = client.config().chat_model;
        doc.created_at = utc_now_iso8601();
        doc.prompt_fingerprint = fingerprint;
        if (doc.text.empty()) throw EmptyResponse("empty document from provider");

        out << document_to_json(doc) << "\n";
        out.flush();
        if (!out) throw Error("corpus append failed: " + path);
        by_id.emplace(id, std::move(doc));
    }

    std::vector<Document> docs;
    docs.reserve(static_cast<size_t>(n));
    for (int id = 0; id < n; ++id) docs.push_back(by_id.at(id));
    return docs;
}

std::vector<Document> load_corpus(const std::string& topic_slug, const std::string& dir) {
    return parse_corpus_file(dir + "/documents.jsonl", topic_slug);
}

}  // namespace elicit
