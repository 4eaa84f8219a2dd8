#include <atomic>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "elicit/gateway.hpp"
#include "elicit/prompts.hpp"
#include "elicit/util.hpp"

#include "json.hpp"

namespace elicit {
namespace {

using namespace util;

// Latent scenario behind mock document generation. Ten events with a fixed
// causal wiring; each document samples a subset and phrases every sampled
// event with one of four paraphrases. Keeps downstream clustering and
// discovery non-degenerate without any network access.
struct ScenarioEvent {
    std::array<int, 2> parents;  // -1 = unused slot
    std::array<const char*, 4> variants;
};

constexpr int kNumEvents = 10;

const std::array<ScenarioEvent, kNumEvents> kScenario = {{
    {{-1, -1},
     {"The central bank raised its policy rate sharply",
      "Policymakers lifted the benchmark interest rate again",
      "A surprise interest rate hike was announced",
      "The monetary authority tightened policy with higher rates"}},
    {{-1, -1},
     {"The government unveiled a large fiscal stimulus package",
      "Lawmakers approved sweeping new public spending measures",
      "A major stimulus program cleared the legislature",
      "Fiscal authorities committed to expansive deficit spending"}},
    {{0, -1},
     {"Corporate borrowing costs climbed to multi-year highs",
      "Credit conditions tightened sharply for smaller firms",
      "Loan rates for businesses rose across the board",
      "Firms faced markedly higher financing costs"}},
    {{1, -1},
     {"Household consumption accelerated on stimulus transfers",
      "Retail spending surged after the stimulus checks",
      "Consumer demand picked up noticeably this quarter",
      "Households increased spending on durable goods"}},
    {{2, 3},
     {"Firms scaled back capital expenditure plans",
      "Business investment intentions were revised lower",
      "Companies postponed several large expansion projects",
      "Capital spending forecasts were cut broadly"}},
    {{4, -1},
     {"Unemployment began rising in manufacturing regions",
      "Factory layoffs pushed the jobless rate higher",
      "Labor market conditions deteriorated in industrial areas",
      "Job losses spread across the goods sector"}},
    {{-1, -1},
     {"A severe drought hit key agricultural regions",
      "Prolonged dry weather damaged staple crop yields",
      "Harvest forecasts collapsed after the historic drought",
      "Water shortages devastated farm output this season"}},
    {{6, -1},
     {"Food prices surged on crop shortfalls",
      "Grocery inflation jumped to a decade high",
      "Staple food costs rose at record pace",
      "Agricultural commodity prices spiked sharply"}},
    {{0, 6},
     {"Rural loan defaults increased as incomes fell",
      "Agricultural credit delinquencies climbed steeply",
      "Farm lenders reported mounting repayment failures",
      "Default rates on rural credit worsened"}},
    {{5, 7},
     {"Consumer sentiment deteriorated sharply nationwide",
      "Household confidence fell to multi-year lows",
      "Survey measures of consumer mood darkened",
      "Public economic pessimism deepened this month"}},
}};

std::string quoted_span(const std::string& s, const std::string& fallback) {
    auto first = s.find('"');
    auto last = s.rfind('"');
    if (first == std::string::npos || last <= first) return fallback;
    return s.substr(first + 1, last - first - 1);
}

std::vector<std::string> bullet_lines(const std::string& text) {
    std::vector<std::string> out;
    for (const auto& line : split_lines(text)) {
        auto t = trim(line);
        if (starts_with(t, "- ")) out.push_back(trim(t.substr(2)));
    }
    return out;
}

class MockBackend final : public Backend {
   public:
    explicit MockBackend(const ProviderConfig& cfg) : cfg_(cfg) {}

    std::string chat_once(const ChatRequest& req) override {
        uint64_t h = fnv1a64(req.system);
        h = mix64(h ^ fnv1a64(req.user));
        h = mix64(h ^ cfg_.seed);
        // Temperature 0 is a pure function of (seed, system, user). Above 0
        // each call folds in a sequence number, standing in for sampling; a
        // fresh backend replays the identical sequence.
        if (req.temperature > 0.0)
            h = mix64(h ^ (sampled_calls_.fetch_add(1) * 0x9e3779b97f4a7c15ULL));

        const auto& user = req.user;
        if (starts_with(user, prompts::kAnalystUserPrefix)) return make_document(user, h);
        if (starts_with(user, prompts::kExtractUserPrefix)) return make_extraction(user);
        if (starts_with(user, prompts::kNameUserPrefix)) return make_name(user);
        if (starts_with(user, prompts::kMatchUserPrefix))
            return R"({"match": false, "id": -1, "name": ""})";
        return "mock:" + to_hex(h);
    }

    std::vector<Embedding> embed_once(const std::vector<std::string>& texts) override {
        std::vector<Embedding> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(embed_one(t));
        return out;
    }

   private:
    std::string make_document(const std::string& user, uint64_t h) const {
        SplitMix rng(h);
        std::array<bool, kNumEvents> present{};
        bool any = false;
        for (int i = 0; i < kNumEvents; ++i) {
            const auto& ev = kScenario[i];
            double p;
            if (ev.parents[0] < 0) {
                p = 0.5;
            } else {
                bool parent_on = present[ev.parents[0]] ||
                                 (ev.parents[1] >= 0 && present[ev.parents[1]]);
                p = parent_on ? 0.8 : 0.08;
            }
            present[i] = rng.next_double() < p;
            any = any || present[i];
        }
        if (!any) {
            static constexpr std::array<int, 3> roots = {0, 1, 6};
            present[roots[rng.next_below(3)]] = true;
        }

        std::string topic = quoted_span(user, trim(user.substr(prompts::kAnalystUserPrefix.size())));
        std::string doc = "Analytical briefing: " + topic + ".\n\n";
        doc += "This note reviews recent developments and their likely knock-on effects.\n\n";
        doc += "Key developments:\n";
        for (int i = 0; i < kNumEvents; ++i) {
            if (!present[i]) continue;
            doc += "- ";
            doc += kScenario[i].variants[rng.next_below(4)];
            doc += "\n";
        }
        doc += "\nTaken together, these events sketch how pressures could propagate through the economy.\n";
        return doc;
    }

    // Re-emits the document's bullet list in one of the three formats the
    // extraction normalizer must cope with, chosen by a hash of the text.
    static std::string make_extraction(const std::string& user) {
        auto nl = user.find('\n');
        std::string doc = nl == std::string::npos ? std::string() : user.substr(nl + 1);
        auto events = bullet_lines(doc);
        if (events.empty()) return "[]";

        switch (fnv1a64(doc) % 3) {
            case 0: {
                nlohmann::json arr = nlohmann::json::array();
                for (const auto& e : events) arr.push_back(e);
                return arr.dump();
            }
            case 1: {
                std::string out = "[";
                for (size_t i = 0; i < events.size(); ++i) {
                    if (i) out += ", ";
                    out += "'";
                    for (char c : events[i]) {
                        if (c == '\'' || c == '\\') out += '\\';
                        out += c;
                    }
                    out += "'";
                }
                return out + "]";
            }
            default: {
                std::string out;
                for (const auto& e : events) out += "- " + e + "\n";
                return out;
            }
        }
    }

    static std::string make_name(const std::string& user) {
        auto examples = bullet_lines(user);
        return examples.empty() ? std::string("unnamed event") : examples.front();
    }

    // Hashed character 3-gram bag with begin/end sentinels, signed buckets,
    // L2-normalized. Equal strings map to equal vectors; near-duplicates
    // share most grams and land close in cosine.
    Embedding embed_one(const std::string& text) const {
        Embedding v(static_cast<size_t>(cfg_.embed_dim), 0.0);
        std::string s = "\x02" + collapse_whitespace(to_lower(text)) + "\x03";
        const uint64_t salt = mix64(cfg_.seed);
        for (size_t i = 0; i + 3 <= s.size(); ++i) {
            uint64_t h = mix64(fnv1a64(std::string_view(s).substr(i, 3)) ^ salt);
            v[h % v.size()] += (h >> 63) ? 1.0 : -1.0;
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm > 1e-12)
            for (double& x : v) x /= norm;
        return v;
    }

    ProviderConfig cfg_;
    mutable std::atomic<uint64_t> sampled_calls_{0};
};

}  // namespace

std::unique_ptr<Backend> make_mock_backend(const ProviderConfig& cfg) {
    return std::make_unique<MockBackend>(cfg);
}

}  // namespace elicit
