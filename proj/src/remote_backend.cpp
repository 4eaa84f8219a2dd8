#include <cstdlib>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "elicit/gateway.hpp"
#include "elicit/util.hpp"

#include "httplib.h"
#include "json.hpp"

namespace elicit {
namespace {

using nlohmann::json;

// base_url is scheme://host[:port][/prefix]; httplib wants the origin and the
// request path separately.
std::pair<std::string, std::string> split_origin(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    auto path_start = scheme_end == std::string::npos
                          ? base_url.find('/')
                          : base_url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {base_url, ""};
    std::string prefix = base_url.substr(path_start);
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    return {base_url.substr(0, path_start), prefix};
}

class HttplibTransport final : public HttpTransport {
   public:
    HttpResponse post_json(const std::string& url, const std::string& bearer_key,
                           const std::string& json_body) override {
        auto [origin, path] = split_origin(url);
        httplib::Client client(origin);
        client.set_connection_timeout(10, 0);
        client.set_read_timeout(120, 0);
        client.set_write_timeout(30, 0);
        httplib::Headers headers{{"Authorization", "Bearer " + bearer_key}};
        auto res = client.Post(path.empty() ? "/" : path, headers, json_body, "application/json");
        if (!res) {
            bool timeout = res.error() == httplib::Error::ConnectionTimeout ||
                           res.error() == httplib::Error::Read ||
                           res.error() == httplib::Error::Write;
            return {0, httplib::to_string(res.error()), timeout};
        }
        return {res->status, res->body, false};
    }
};

class RemoteBackend final : public Backend {
   public:
    RemoteBackend(const ProviderConfig& cfg, std::shared_ptr<HttpTransport> transport)
        : cfg_(cfg), transport_(std::move(transport)) {}

    std::string chat_once(const ChatRequest& req) override {
        json body = {
            {"model", cfg_.chat_model},
            {"messages",
             {{{"role", "system"}, {"content", req.system}},
              {{"role", "user"}, {"content", req.user}}}},
            {"temperature", req.temperature},
            {"max_tokens", req.max_tokens},
        };
        json reply = round_trip("/chat/completions", body);
        const json* content = nullptr;
        if (reply.contains("choices") && reply["choices"].is_array() && !reply["choices"].empty()) {
            const auto& msg = reply["choices"][0];
            if (msg.contains("message") && msg["message"].contains("content"))
                content = &msg["message"]["content"];
        }
        if (!content || !content->is_string() || content->get<std::string>().empty())
            throw EmptyResponse("chat response carried no assistant text");
        return content->get<std::string>();
    }

    std::vector<Embedding> embed_once(const std::vector<std::string>& texts) override {
        json body = {{"model", cfg_.embed_model}, {"input", texts}};
        json reply = round_trip("/embeddings", body);
        if (!reply.contains("data") || !reply["data"].is_array())
            throw EmptyResponse("embeddings response carried no data array");
        std::vector<Embedding> out(texts.size());
        std::vector<bool> seen(texts.size(), false);
        for (const auto& item : reply["data"]) {
            if (!item.contains("index") || !item.contains("embedding"))
                throw EmptyResponse("embeddings item missing index or vector");
            size_t idx = item["index"].get<size_t>();
            if (idx >= out.size() || seen[idx])
                throw TransportError("embeddings response indexes do not match request");
            out[idx] = item["embedding"].get<Embedding>();
            seen[idx] = true;
        }
        for (size_t i = 0; i < seen.size(); ++i)
            if (!seen[i]) throw EmptyResponse("embeddings response missing index " +
                                              std::to_string(i));
        return out;
    }

   private:
    json round_trip(const std::string& endpoint, const json& body) {
        HttpResponse res =
            transport_->post_json(cfg_.base_url + endpoint, api_key(), body.dump());
        if (res.timed_out) throw TransportError("request timed out", /*transient=*/true);
        if (res.status == 0)
            throw TransportError("connection failed: " + res.body, /*transient=*/true);
        if (res.status == 401 || res.status == 403)
            throw AuthError("provider rejected credentials (HTTP " +
                            std::to_string(res.status) + ")");
        if (res.status == 429 || res.status >= 500)
            throw TransportError("provider unavailable (HTTP " + std::to_string(res.status) + ")",
                                 /*transient=*/true);
        if (res.status != 200)
            throw TransportError("unexpected HTTP " + std::to_string(res.status));
        json parsed = json::parse(res.body, nullptr, /*allow_exceptions=*/false);
        if (parsed.is_discarded())
            throw TransportError("provider returned malformed JSON");
        return parsed;
    }

    // Key is resolved per request from the configured env var and never
    // written to logs or config files.
    std::string api_key() const {
        const char* key = std::getenv(cfg_.api_key_env.c_str());
        if (!key || !*key)
            throw AuthError("environment variable " + cfg_.api_key_env + " is not set");
        return key;
    }

    ProviderConfig cfg_;
    std::shared_ptr<HttpTransport> transport_;
};

}  // namespace

std::unique_ptr<Backend> make_remote_backend(const ProviderConfig& cfg) {
    return std::make_unique<RemoteBackend>(cfg, std::make_shared<HttplibTransport>());
}

std::unique_ptr<Backend> make_remote_backend(const ProviderConfig& cfg,
                                             std::shared_ptr<HttpTransport> transport) {
    return std::make_unique<RemoteBackend>(cfg, std::move(transport));
}

}  // namespace elicit
