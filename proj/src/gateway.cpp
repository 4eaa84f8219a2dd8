#include "elicit/gateway.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "elicit/util.hpp"

namespace elicit {

void ProviderConfig::validate() const {
    if (kind == Kind::remote && base_url.empty())
        throw Error("remote provider requires base_url");
    if (kind == Kind::remote && api_key_env.empty())
        throw AuthError("remote provider requires api_key_env naming the key variable");
    if (embed_dim < 1) throw Error("embed_dim must be >= 1");
    if (max_parallel < 1) throw Error("max_parallel must be >= 1");
    if (max_retries < 0) throw Error("max_retries must be >= 0");
    if (embed_chunk < 1) throw Error("embed_chunk must be >= 1");
}

LlmClient::LlmClient(ProviderConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    backend_ = cfg_.kind == ProviderConfig::Kind::mock ? make_mock_backend(cfg_)
                                                       : make_remote_backend(cfg_);
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    jitter_rng_.seed(cfg_.seed ^ 0x9e3779b97f4a7c15ULL);
}

LlmClient::LlmClient(ProviderConfig cfg, std::unique_ptr<Backend> backend)
    : cfg_(std::move(cfg)), backend_(std::move(backend)) {
    cfg_.validate();
    sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    jitter_rng_.seed(cfg_.seed ^ 0x9e3779b97f4a7c15ULL);
}

void LlmClient::set_sleeper(std::function<void(std::chrono::milliseconds)> sleeper) {
    sleeper_ = std::move(sleeper);
}

std::chrono::milliseconds LlmClient::backoff_delay(int attempt) {
    // Full jitter: uniform in [0, 500ms * 2^attempt).
    const double cap = 500.0 * std::pow(2.0, attempt);
    std::lock_guard<std::mutex> lock(jitter_mutex_);
    std::uniform_real_distribution<double> dist(0.0, cap);
    return std::chrono::milliseconds(static_cast<long>(dist(jitter_rng_)));
}

template <typename Fn>
auto LlmClient::with_retries(Fn&& fn) -> decltype(fn()) {
    for (int attempt = 0;; ++attempt) {
        try {
            return fn();
        } catch (const TransportError& e) {
            if (!e.transient() || attempt >= cfg_.max_retries) throw;
            sleeper_(backoff_delay(attempt));
        }
    }
}

std::string LlmClient::chat(const ChatRequest& req) {
    if (req.temperature < 0.0 || req.temperature > 2.0)
        throw Error("chat temperature must be in [0, 2]");
    if (req.max_tokens < 1) throw Error("chat max_tokens must be >= 1");
    return with_retries([&] { return backend_->chat_once(req); });
}

std::vector<Embedding> LlmClient::embed_batch(const std::vector<std::string>& texts) {
    if (texts.empty()) throw Error("embed_batch requires at least one text");
    for (const auto& t : texts)
        if (util::trim(t).empty()) throw Error("embed_batch texts must be non-empty");

    const size_t chunk = static_cast<size_t>(cfg_.embed_chunk);
    const size_t n_chunks = (texts.size() + chunk - 1) / chunk;
    std::vector<std::vector<Embedding>> results(n_chunks);

    auto run_chunk = [&](size_t ci) {
        const size_t lo = ci * chunk;
        const size_t hi = std::min(texts.size(), lo + chunk);
        std::vector<std::string> part(texts.begin() + lo, texts.begin() + hi);
        auto out = with_retries([&] { return backend_->embed_once(part); });
        if (out.size() != part.size())
            throw TransportError("provider returned " + std::to_string(out.size()) +
                                 " embeddings for " + std::to_string(part.size()) + " inputs");
        results[ci] = std::move(out);
    };

    const size_t workers = std::min<size_t>(cfg_.max_parallel, n_chunks);
    if (workers <= 1) {
        for (size_t ci = 0; ci < n_chunks; ++ci) run_chunk(ci);
    } else {
        std::atomic<size_t> next{0};
        std::exception_ptr first_error;
        std::mutex error_mutex;
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const size_t ci = next.fetch_add(1);
                    if (ci >= n_chunks) return;
                    {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (first_error) return;
                    }
                    try {
                        run_chunk(ci);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(error_mutex);
                        if (!first_error) first_error = std::current_exception();
                        return;
                    }
                }
            });
        }
        for (auto& t : pool) t.join();
        if (first_error) std::rethrow_exception(first_error);
    }

    std::vector<Embedding> flat;
    flat.reserve(texts.size());
    for (auto& part : results)
        for (auto& v : part) flat.push_back(std::move(v));

    const size_t dim = flat.front().size();
    for (const auto& v : flat)
        if (v.size() != dim)
            throw DimMismatch("provider returned embeddings of inconsistent dimension");
    return flat;
}

double cosine(const Embedding& a, const Embedding& b) {
    if (a.size() != b.size()) throw DimMismatch("cosine: dimension mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na <= 0.0 || nb <= 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

}  // namespace elicit
