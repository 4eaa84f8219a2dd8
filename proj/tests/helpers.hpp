#pragma once

// Shared fakes and fixtures for the test binaries.

#include <atomic>
#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "elicit/gateway.hpp"
#include "elicit/util.hpp"

namespace testutil {

// Backend with scriptable hooks and call accounting.
class ScriptedBackend : public elicit::Backend {
public:
    std::function<std::string(const elicit::ChatRequest&)> chat_fn;
    std::function<std::vector<elicit::Embedding>(const std::vector<std::string>&)>
        embed_fn;
    std::atomic<int> chat_calls{0};
    std::atomic<int> embed_calls{0};  // upstream batch calls
    std::atomic<int> in_flight{0};
    std::atomic<int> max_in_flight{0};
    std::chrono::milliseconds embed_stall{0};

    std::string chat_once(const elicit::ChatRequest& req) override {
        ++chat_calls;
        return chat_fn ? chat_fn(req) : std::string("ok");
    }

    std::vector<elicit::Embedding> embed_once(
        const std::vector<std::string>& texts) override {
        ++embed_calls;
        const int now = ++in_flight;
        int seen = max_in_flight.load();
        while (now > seen && !max_in_flight.compare_exchange_weak(seen, now)) {
        }
        if (embed_stall.count() > 0) std::this_thread::sleep_for(embed_stall);
        std::vector<elicit::Embedding> out;
        if (embed_fn) {
            out = embed_fn(texts);
        } else {
            out.assign(texts.size(), elicit::Embedding{1.0, 0.0});
        }
        --in_flight;
        return out;
    }
};

// Transport replaying a scripted response sequence (last one repeats).
class FakeTransport : public elicit::HttpTransport {
public:
    std::vector<elicit::HttpResponse> responses;
    std::vector<std::string> urls;
    std::vector<std::string> keys;
    std::vector<std::string> bodies;

    elicit::HttpResponse post_json(const std::string& url, const std::string& key,
                                   const std::string& body) override {
        urls.push_back(url);
        keys.push_back(key);
        bodies.push_back(body);
        const std::size_t i = urls.size() - 1;
        if (responses.empty()) return {};
        return responses[std::min(i, responses.size() - 1)];
    }
};

inline elicit::ProviderConfig mock_config(uint64_t seed = 42, int dim = 64) {
    elicit::ProviderConfig cfg;
    cfg.kind = elicit::ProviderConfig::Kind::mock;
    cfg.seed = seed;
    cfg.embed_dim = dim;
    return cfg;
}

inline elicit::LlmClient mock_client(uint64_t seed = 42, int dim = 64) {
    return elicit::LlmClient(mock_config(seed, dim));
}

// Client over a ScriptedBackend; the returned client owns the backend, the
// out pointer stays valid for inspection as long as the client lives.
inline elicit::LlmClient scripted_client(ScriptedBackend*& out,
                                         elicit::ProviderConfig cfg = mock_config()) {
    auto backend = std::make_unique<ScriptedBackend>();
    out = backend.get();
    return elicit::LlmClient(cfg, std::move(backend));
}

// Unique temporary directory, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<uint64_t> counter{0};
        const auto base = std::filesystem::temp_directory_path();
        path_ = (base / ("elicit_test_" +
                         elicit::util::to_hex(elicit::util::mix64(
                             counter.fetch_add(1) ^
                             static_cast<uint64_t>(
                                 std::chrono::steady_clock::now()
                                     .time_since_epoch()
                                     .count())))))
                    .string();
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

}  // namespace testutil
