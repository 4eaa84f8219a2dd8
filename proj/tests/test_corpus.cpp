#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "elicit/corpus.hpp"
#include "elicit/errors.hpp"
#include "elicit/util.hpp"
#include "helpers.hpp"

using namespace elicit;

namespace {

std::string doc_line(int id, const std::string& slug, const std::string& text) {
    return "{\"doc_id\": " + std::to_string(id) + ", \"topic_slug\": \"" + slug +
           "\", \"text\": \"" + text +
           "\", \"model\": \"m\", \"created_at\": \"2026-01-01T00:00:00Z\", "
           "\"prompt_fingerprint\": \"00\"}";
}

}  // namespace

TEST_CASE("topic slugs are filesystem safe") {
    const Topic t = Topic::from_text("US-Japan Trade War!");
    CHECK(t.text == "US-Japan Trade War!");
    CHECK(t.slug == "us-japan-trade-war");
    CHECK(Topic::from_text(std::string(200, 'A')).slug.size() <= 80);
}

TEST_CASE("mock generation: n=3 gives doc ids 0,1,2 with populated fields") {
    testutil::TempDir tmp;
    auto client = testutil::mock_client(7);
    const Topic topic = Topic::from_text("tariff escalation");
    const std::string path = tmp.path() + "/documents.jsonl";
    const auto docs = generate_documents(topic, 3, client, path);
    REQUIRE(docs.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(docs[static_cast<std::size_t>(i)].doc_id == i);
        CHECK(docs[static_cast<std::size_t>(i)].topic_slug == topic.slug);
        CHECK_FALSE(docs[static_cast<std::size_t>(i)].text.empty());
        CHECK_FALSE(docs[static_cast<std::size_t>(i)].prompt_fingerprint.empty());
    }
    // one JSONL line per document
    CHECK(util::split_lines(util::read_file(path)).size() == 3);
}

TEST_CASE("generation round-trips through load_corpus") {
    testutil::TempDir tmp;
    auto client = testutil::mock_client(7);
    const Topic topic = Topic::from_text("tariff escalation");
    const auto docs =
        generate_documents(topic, 4, client, tmp.path() + "/documents.jsonl");
    const auto loaded = load_corpus(topic.slug, tmp.path());
    CHECK(loaded == docs);
}

TEST_CASE("generated text is deterministic for a fixed seed") {
    testutil::TempDir ta, tb;
    auto a = testutil::mock_client(42);
    auto b = testutil::mock_client(42);
    const Topic topic = Topic::from_text("energy prices");
    const auto da = generate_documents(topic, 3, a, ta.path() + "/d.jsonl");
    const auto db = generate_documents(topic, 3, b, tb.path() + "/d.jsonl");
    REQUIRE(da.size() == db.size());
    for (std::size_t i = 0; i < da.size(); ++i) {
        CHECK(da[i].text == db[i].text);
        CHECK(da[i].prompt_fingerprint == db[i].prompt_fingerprint);
    }
    // diversity between documents comes from sampling
    CHECK(da[0].text != da[1].text);
}

TEST_CASE("resume generates only the missing documents") {
    testutil::TempDir tmp;
    const Topic topic = Topic::from_text("supply shock");
    const std::string path = tmp.path() + "/documents.jsonl";

    testutil::ScriptedBackend* backend = nullptr;
    auto failing = testutil::scripted_client(backend);
    backend->chat_fn = [backend](const ChatRequest&) -> std::string {
        if (backend->chat_calls.load() > 4) throw TransportError("boom");
        return "doc text";
    };
    CHECK_THROWS_AS(generate_documents(topic, 10, failing, path), TransportError);
    CHECK(parse_corpus_file(path, topic.slug).size() == 4);

    testutil::ScriptedBackend* backend2 = nullptr;
    auto working = testutil::scripted_client(backend2);
    backend2->chat_fn = [](const ChatRequest&) { return std::string("doc text"); };
    const auto docs = generate_documents(topic, 10, working, path);
    CHECK(docs.size() == 10);
    CHECK(backend2->chat_calls.load() == 6);  // only docs 4..9

    // a third invocation is a no-op
    testutil::ScriptedBackend* backend3 = nullptr;
    auto idle = testutil::scripted_client(backend3);
    CHECK(generate_documents(topic, 10, idle, path).size() == 10);
    CHECK(backend3->chat_calls.load() == 0);
}

TEST_CASE("hand-written corpus files parse in doc_id order") {
    testutil::TempDir tmp;
    const std::string path = tmp.path() + "/documents.jsonl";
    util::write_file(path, doc_line(1, "s", "second") + "\n" +
                               doc_line(0, "s", "first") + "\n");
    const auto docs = parse_corpus_file(path, "s");
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].doc_id == 0);
    CHECK(docs[0].text == "first");
    CHECK(docs[1].doc_id == 1);
}

TEST_CASE("malformed corpus line reports its line number") {
    testutil::TempDir tmp;
    const std::string path = tmp.path() + "/documents.jsonl";
    util::write_file(path, doc_line(0, "s", "a") + "\n" + doc_line(1, "s", "b") +
                               "\n{oops\n");
    try {
        parse_corpus_file(path, "s");
        FAIL("expected CorruptCorpus");
    } catch (const CorruptCorpus& e) {
        CHECK(e.line() == 3);
    }
}

TEST_CASE("corpus validation rejects bad records") {
    testutil::TempDir tmp;
    const std::string path = tmp.path() + "/documents.jsonl";

    util::write_file(path, doc_line(0, "s", "a") + "\n" + doc_line(0, "s", "b") + "\n");
    CHECK_THROWS_AS(parse_corpus_file(path, "s"), CorruptCorpus);

    util::write_file(path, doc_line(0, "other", "a") + "\n");
    CHECK_THROWS_AS(parse_corpus_file(path, "s"), CorruptCorpus);

    util::write_file(path, doc_line(-1, "s", "a") + "\n");
    CHECK_THROWS_AS(parse_corpus_file(path, "s"), CorruptCorpus);

    util::write_file(path, doc_line(0, "s", "") + "\n");
    CHECK_THROWS_AS(parse_corpus_file(path, "s"), CorruptCorpus);
}

TEST_CASE("blank lines in a corpus file are ignored") {
    testutil::TempDir tmp;
    const std::string path = tmp.path() + "/documents.jsonl";
    util::write_file(path, "\n" + doc_line(0, "s", "a") + "\n\n");
    CHECK(parse_corpus_file(path, "s").size() == 1);
}

TEST_CASE("loading a missing corpus throws") {
    testutil::TempDir tmp;
    CHECK_THROWS_AS(load_corpus("nope", tmp.path()), Error);
}
