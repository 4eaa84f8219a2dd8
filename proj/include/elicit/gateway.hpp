#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <vector>

#include "elicit/errors.hpp"

namespace elicit {

using Embedding = std::vector<double>;

struct ProviderConfig {
    enum class Kind { mock, remote };

    Kind kind = Kind::mock;
    std::string base_url;                        // remote only, e.g. https://api.openai.com/v1
    std::string api_key_env = "OPENAI_API_KEY";  // env var NAME; the key itself is never stored here
    std::string chat_model = "gpt-4o";
    std::string embed_model = "text-embedding-3-large";
    int embed_dim = 256;  // mock embeddings only
    int max_parallel = 4;
    int max_retries = 3;
    uint64_t seed = 42;
    int embed_chunk = 128;

    void validate() const;  // throws Error on inconsistent values
};

struct ChatRequest {
    std::string system;
    std::string user;
    double temperature = 0.0;
    int max_tokens = 1024;
};

// One raw provider exchange. No retries, no chunking; LlmClient layers those.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::string chat_once(const ChatRequest& req) = 0;
    virtual std::vector<Embedding> embed_once(const std::vector<std::string>& texts) = 0;
};

// HTTP seam for the remote backend; fakes stand in for it in tests.
struct HttpResponse {
    int status = 0;  // 0 = connection-level failure
    std::string body;
    bool timed_out = false;
};

class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post_json(const std::string& url, const std::string& bearer_key,
                                   const std::string& json_body) = 0;
};

std::unique_ptr<Backend> make_mock_backend(const ProviderConfig& cfg);
std::unique_ptr<Backend> make_remote_backend(const ProviderConfig& cfg);
std::unique_ptr<Backend> make_remote_backend(const ProviderConfig& cfg,
                                             std::shared_ptr<HttpTransport> transport);

// Provider-facing client: retries transient failures with exponential backoff
// and full jitter, chunks embedding requests, and bounds in-flight concurrency
// by cfg.max_parallel. Shareable across threads.
class LlmClient {
public:
    explicit LlmClient(ProviderConfig cfg);
    LlmClient(ProviderConfig cfg, std::unique_ptr<Backend> backend);

    std::string chat(const ChatRequest& req);
    std::vector<Embedding> embed_batch(const std::vector<std::string>& texts);

    const ProviderConfig& config() const { return cfg_; }

    // Test hook; default sleeper really sleeps.
    void set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper);

private:
    std::chrono::milliseconds backoff_delay(int attempt);
    template <typename Fn>
    auto with_retries(Fn&& fn) -> decltype(fn());

    ProviderConfig cfg_;
    std::unique_ptr<Backend> backend_;
    std::function<void(std::chrono::milliseconds)> sleeper_;
    std::mt19937_64 jitter_rng_;
    std::mutex jitter_mutex_;
};

// Cosine similarity helper shared by canonicalization and tests.
double cosine(const Embedding& a, const Embedding& b);

}  // namespace elicit
