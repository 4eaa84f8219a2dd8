#include "elicit/canonicalize.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "elicit/prompts.hpp"
#include "elicit/util.hpp"

#include "json.hpp"

namespace elicit {
namespace {

using namespace util;

const std::set<std::string>& banned_names() {
    static const std::set<std::string> banned = {"other",         "others", "misc",
                                                 "miscellaneous", "none",   "n/a",
                                                 "unknown"};
    return banned;
}

Embedding mean_embedding(const std::vector<std::string>& members, EmbeddingCache& cache) {
    Embedding mean;
    for (const auto& m : members) {
        const Embedding& e = cache.get(m);
        if (mean.empty()) mean.assign(e.size(), 0.0);
        for (size_t i = 0; i < e.size(); ++i) mean[i] += e[i];
    }
    for (double& x : mean) x /= static_cast<double>(members.size());
    return mean;
}

}  // namespace

const Embedding& EmbeddingCache::get(const std::string& text) {
    auto it = cache_.find(text);
    if (it != cache_.end()) return it->second;
    auto vecs = client_.embed_batch({text});
    return cache_.emplace(text, std::move(vecs[0])).first->second;
}

std::vector<std::string> unique_preserve_order(const std::vector<DocEvents>& lists) {
    std::vector<std::string> vocab;
    std::unordered_set<std::string> seen;
    for (const auto& doc : lists) {
        for (const auto& mention : doc.mentions) {
            std::string cleaned = clean_mention(mention);
            if (cleaned.empty() || !seen.insert(cleaned).second) continue;
            vocab.push_back(std::move(cleaned));
        }
    }
    return vocab;
}

Embedding l2_normalize(const Embedding& v, bool* degenerate) {
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    if (norm <= 1e-12) {
        if (degenerate) *degenerate = true;
        log_warn("DegenerateEmbedding: zero vector left unnormalized");
        return v;
    }
    if (degenerate) *degenerate = false;
    Embedding out(v);
    for (double& x : out) x /= norm;
    return out;
}

std::vector<std::string> representatives(const ClusterModel& model,
                                         const std::vector<Embedding>& h,
                                         const std::vector<std::string>& vocab, int c, int m) {
    std::vector<size_t> members;
    for (size_t i = 0; i < model.labels.size(); ++i)
        if (model.labels[i] == c) members.push_back(i);
    if (members.empty()) throw EmptyCluster("cluster " + std::to_string(c) + " has no members");

    const Embedding& centroid = model.centroids.at(static_cast<size_t>(c));
    auto dot = [&](size_t i) {
        double s = 0.0;
        for (size_t d = 0; d < centroid.size(); ++d) s += h[i][d] * centroid[d];
        return s;
    };
    std::stable_sort(members.begin(), members.end(),
                     [&](size_t a, size_t b) { return dot(a) > dot(b); });

    std::vector<std::string> out;
    for (size_t i = 0; i < members.size() && out.size() < static_cast<size_t>(m); ++i)
        out.push_back(vocab[members[i]]);
    return out;
}

std::string name_cluster(const std::vector<std::string>& examples, LlmClient& client) {
    if (examples.empty()) throw EmptyCluster("cannot name a cluster without examples");

    ChatRequest req;
    req.system = prompts::name_system();
    req.user = prompts::name_user(examples);
    req.temperature = 0.0;
    req.max_tokens = 64;

    for (int attempt = 0; attempt < 2; ++attempt) {
        std::string name;
        try {
            name = clean_mention(client.chat(req));
        } catch (const TransportError&) {
            break;
        }
        if (name.empty() || word_count(name) > 10) continue;
        if (banned_names().count(to_lower(name))) continue;
        return name;
    }
    return examples.front();
}

CanonicalizeResult canonicalize_embedding_first(const std::vector<DocEvents>& lists,
                                                LlmClient& client, const CanonOptions& opts) {
    std::vector<std::string> vocab = unique_preserve_order(lists);
    const size_t m_count = vocab.size();
    if (m_count == 0) throw NoEvents("no non-empty event mentions to canonicalize");

    std::vector<Embedding> h = client.embed_batch(vocab);
    for (auto& v : h) v = l2_normalize(v);

    const int k = static_cast<int>(std::min<size_t>(static_cast<size_t>(opts.k_max), m_count));
    ClusterModel model = minibatch_kmeans(h, k, opts.seed);

    // Name clusters in id order; identical names collapse into one event.
    std::vector<std::string> cluster_names(static_cast<size_t>(model.k));
    for (int c = 0; c < model.k; ++c)
        cluster_names[static_cast<size_t>(c)] =
            name_cluster(representatives(model, h, vocab, c, opts.m), client);

    CanonicalRegistry reg;
    std::map<std::string, int> event_by_name;
    std::vector<int> cluster_to_event(static_cast<size_t>(model.k));
    for (int c = 0; c < model.k; ++c) {
        const std::string& name = cluster_names[static_cast<size_t>(c)];
        auto it = event_by_name.find(name);
        if (it == event_by_name.end()) {
            int id = static_cast<int>(reg.events.size());
            reg.events.push_back(CanonicalEvent{id, name, {}, {}});
            it = event_by_name.emplace(name, id).first;
        }
        cluster_to_event[static_cast<size_t>(c)] = it->second;
    }
    for (size_t m = 0; m < m_count; ++m) {
        int id = cluster_to_event[static_cast<size_t>(model.labels[m])];
        reg.events[static_cast<size_t>(id)].members.push_back(vocab[m]);
        reg.map[vocab[m]] = id;
    }

    CanonicalizeResult result;
    result.lists = lists;
    for (auto& doc : result.lists) {
        for (size_t pos = 0; pos < doc.mentions.size(); ++pos) {
            std::string cleaned = clean_mention(doc.mentions[pos]);
            if (cleaned.empty()) {
                doc.mentions[pos] = "";
                continue;
            }
            int id = reg.map.at(cleaned);
            reg.events[static_cast<size_t>(id)].occurrences.emplace_back(
                doc.doc_id, static_cast<int>(pos));
            doc.mentions[pos] = reg.events[static_cast<size_t>(id)].name;
        }
    }
    for (auto& ev : reg.events) std::sort(ev.occurrences.begin(), ev.occurrences.end());
    result.registry = std::move(reg);
    return result;
}

std::vector<Candidate> candidates(const CanonicalRegistry& reg, const std::string& t,
                                  EmbeddingCache& cache, double tau, int cap) {
    if (reg.events.empty()) return {};
    const Embedding& t_emb = cache.get(t);

    std::vector<Candidate> scored;
    for (const auto& ev : reg.events) {
        Embedding mean = mean_embedding(ev.members, cache);
        double sim = cosine(t_emb, mean);
        if (sim > tau) scored.push_back(Candidate{ev.canon_id, sim});
    }
    std::stable_sort(scored.begin(), scored.end(), [](const Candidate& a, const Candidate& b) {
        if (a.cosine != b.cosine) return a.cosine > b.cosine;
        return a.canon_id < b.canon_id;
    });
    if (scored.size() > static_cast<size_t>(cap)) scored.resize(static_cast<size_t>(cap));
    return scored;
}

Matcher llm_matcher(LlmClient& client) {
    return [&client](const std::string& t,
                     const std::vector<std::pair<int, std::string>>& shortlist) {
        ChatRequest req;
        req.system = prompts::match_system();
        req.user = prompts::match_user(t, shortlist);
        req.temperature = 0.0;
        req.max_tokens = 128;
        std::string reply = client.chat(req);

        MatchDecision decision;
        auto open = reply.find('{');
        auto close = reply.rfind('}');
        if (open == std::string::npos || close == std::string::npos || close < open)
            return decision;
        auto j = nlohmann::json::parse(reply.substr(open, close - open + 1), nullptr,
                                       /*allow_exceptions=*/false);
        if (j.is_discarded() || !j.is_object() || !j.contains("match") ||
            !j["match"].is_boolean())
            return decision;
        decision.match = j["match"].get<bool>();
        if (j.contains("id") && j["id"].is_number_integer())
            decision.canon_id = j["id"].get<int>();
        if (j.contains("name") && j["name"].is_string())
            decision.name = j["name"].get<std::string>();
        if (decision.match && decision.canon_id < 0) decision.match = false;
        return decision;
    };
}

CanonicalizeResult canonicalize_incremental(const std::vector<DocEvents>& lists,
                                            LlmClient& client, const CanonOptions& opts,
                                            const Matcher& matcher) {
    Matcher decide = matcher ? matcher : llm_matcher(client);
    EmbeddingCache cache(client);

    CanonicalizeResult result;
    result.lists = lists;
    CanonicalRegistry& reg = result.registry;

    std::unordered_map<int, size_t> doc_index;
    for (size_t i = 0; i < lists.size(); ++i) doc_index[lists[i].doc_id] = i;

    auto new_event = [&](const std::string& t, int doc_id, int pos) {
        int id = static_cast<int>(reg.events.size());
        reg.events.push_back(CanonicalEvent{id, t, {t}, {{doc_id, pos}}});
        reg.map[t] = id;
    };

    for (auto& doc : result.lists) {
        for (size_t k = 0; k < doc.mentions.size(); ++k) {
            std::string t = clean_mention(doc.mentions[k]);
            const int pos = static_cast<int>(k);
            if (t.empty()) {
                doc.mentions[k] = t;
                continue;
            }
            // Exact duplicates rejoin their event without adjudication.
            if (auto it = reg.map.find(t); it != reg.map.end()) {
                CanonicalEvent& ev = reg.events[static_cast<size_t>(it->second)];
                ev.occurrences.emplace_back(doc.doc_id, pos);
                doc.mentions[k] = ev.name;
                continue;
            }

            auto shortlist = candidates(reg, t, cache, opts.tau, opts.candidate_cap);
            if (shortlist.empty()) {
                new_event(t, doc.doc_id, pos);
                doc.mentions[k] = t;
                continue;
            }

            std::vector<std::pair<int, std::string>> options;
            std::unordered_set<int> valid_ids;
            for (const auto& cand : shortlist) {
                options.emplace_back(cand.canon_id,
                                     reg.events[static_cast<size_t>(cand.canon_id)].name);
                valid_ids.insert(cand.canon_id);
            }
            MatchDecision decision = decide(t, options);
            if (!decision.match || !valid_ids.count(decision.canon_id)) {
                new_event(t, doc.doc_id, pos);
                doc.mentions[k] = t;
                continue;
            }

            CanonicalEvent& ev = reg.events[static_cast<size_t>(decision.canon_id)];
            ev.occurrences.emplace_back(doc.doc_id, pos);
            if (std::find(ev.members.begin(), ev.members.end(), t) == ev.members.end())
                ev.members.push_back(t);
            reg.map[t] = ev.canon_id;

            std::string u = clean_mention(decision.name);
            if (u.empty() || word_count(u) > 10) u = ev.name;
            if (u != ev.name) {
                // Rename: every recorded occurrence is rewritten, including
                // the one registered just above.
                ev.name = u;
                for (const auto& [j, l] : ev.occurrences)
                    result.lists[doc_index.at(j)].mentions[static_cast<size_t>(l)] = u;
            } else {
                doc.mentions[k] = ev.name;
            }
        }
    }
    for (auto& ev : reg.events) std::sort(ev.occurrences.begin(), ev.occurrences.end());
    return result;
}

void write_canonical_map(const std::string& path, const CanonicalRegistry& reg,
                         const CanonParams& params) {
    nlohmann::ordered_json root;
    root["events"] = nlohmann::ordered_json::array();
    for (const auto& ev : reg.events) {
        nlohmann::ordered_json e;
        e["canon_id"] = ev.canon_id;
        e["name"] = ev.name;
        e["members"] = ev.members;
        e["occurrences"] = nlohmann::ordered_json::array();
        for (const auto& [doc, pos] : ev.occurrences)
            e["occurrences"].push_back({doc, pos});
        root["events"].push_back(std::move(e));
    }
    root["params"] = {{"k_max", params.k_max},
                      {"tau", params.tau},
                      {"seed", params.seed},
                      {"method", params.method}};
    write_file(path, root.dump(2) + "\n");
}

CanonicalRegistry read_canonical_map(const std::string& path) {
    auto j = nlohmann::json::parse(read_file(path), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.is_object() || !j.contains("events") || !j["events"].is_array())
        throw Error("malformed canonical map: " + path);

    CanonicalRegistry reg;
    for (const auto& e : j["events"]) {
        CanonicalEvent ev;
        ev.canon_id = e.at("canon_id").get<int>();
        ev.name = e.at("name").get<std::string>();
        for (const auto& m : e.at("members")) ev.members.push_back(m.get<std::string>());
        for (const auto& occ : e.at("occurrences"))
            ev.occurrences.emplace_back(occ.at(0).get<int>(), occ.at(1).get<int>());
        for (const auto& m : ev.members) reg.map[m] = ev.canon_id;
        reg.events.push_back(std::move(ev));
    }
    return reg;
}

}  // namespace elicit
