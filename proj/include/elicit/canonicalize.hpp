#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "elicit/extraction.hpp"
#include "elicit/gateway.hpp"
#include "elicit/kmeans.hpp"

namespace elicit {

struct CanonicalEvent {
    int canon_id = 0;
    std::string name;
    std::vector<std::string> members;                 // raw mention strings, insertion order
    std::vector<std::pair<int, int>> occurrences;     // (doc_id, position), sorted

    bool operator==(const CanonicalEvent&) const = default;
};

struct CanonicalRegistry {
    std::vector<CanonicalEvent> events;
    std::map<std::string, int> map;  // raw mention -> canon_id, total over mentions seen

    bool operator==(const CanonicalRegistry&) const = default;
};

struct CanonicalizeResult {
    CanonicalRegistry registry;
    std::vector<DocEvents> lists;  // rewritten event lists, same shape as input
};

struct CanonOptions {
    int k_max = 30;
    int m = 5;            // representatives per cluster
    double tau = 0.80;    // candidate threshold (strict >)
    int candidate_cap = 5;
    uint64_t seed = 42;
};

// Batch-embeds strings on demand and remembers them; Algorithm 2's candidate
// scoring touches the same member strings over and over.
class EmbeddingCache {
public:
    explicit EmbeddingCache(LlmClient& client) : client_(client) {}
    const Embedding& get(const std::string& text);

private:
    LlmClient& client_;
    std::map<std::string, Embedding> cache_;
};

std::vector<std::string> unique_preserve_order(const std::vector<DocEvents>& lists);

// v / ||v||; zero vectors come back unchanged with a logged warning.
Embedding l2_normalize(const Embedding& v, bool* degenerate = nullptr);

// Top min(m, size) member strings of cluster c ranked by inner product with
// the centroid; ties broken by vocabulary order.
std::vector<std::string> representatives(const ClusterModel& model,
                                         const std::vector<Embedding>& h,
                                         const std::vector<std::string>& vocab, int c, int m);

// One temperature-0 naming call; cleans the reply, rejects empty / over-long
// / vacuous names with one retry, then falls back to examples[0].
std::string name_cluster(const std::vector<std::string>& examples, LlmClient& client);

// Embedding-first canonicalization: unique vocabulary, embed, normalize,
// cluster with K = min(k_max, M), name clusters, merge name collisions,
// rewrite every list through f.
CanonicalizeResult canonicalize_embedding_first(const std::vector<DocEvents>& lists,
                                                LlmClient& client, const CanonOptions& opts);

struct Candidate {
    int canon_id = 0;
    double cosine = 0.0;
};

// Registered events whose mean member embedding has cosine similarity with t
// strictly above tau, best first, capped. Empty registry short-circuits
// without an embedding call.
std::vector<Candidate> candidates(const CanonicalRegistry& reg, const std::string& t,
                                  EmbeddingCache& cache, double tau, int cap);

struct MatchDecision {
    bool match = false;
    int canon_id = -1;
    std::string name;  // updated canonical name; empty keeps the current one
};

using Matcher =
    std::function<MatchDecision(const std::string& t,
                                const std::vector<std::pair<int, std::string>>& shortlist)>;

// Adjudicates via one temperature-0 chat call; any reply that fails to parse
// is a non-match (a missed merge is recoverable, a false merge is not).
Matcher llm_matcher(LlmClient& client);

// Incremental registry construction: per mention in document order, exact
// duplicates join their event directly, otherwise the matcher adjudicates the
// candidate shortlist; renames rewrite every recorded occurrence.
CanonicalizeResult canonicalize_incremental(const std::vector<DocEvents>& lists,
                                            LlmClient& client, const CanonOptions& opts,
                                            const Matcher& matcher = {});

struct CanonParams {
    int k_max = 30;
    double tau = 0.80;
    uint64_t seed = 42;
    std::string method = "embedding_first";
};

void write_canonical_map(const std::string& path, const CanonicalRegistry& reg,
                         const CanonParams& params);
CanonicalRegistry read_canonical_map(const std::string& path);

}  // namespace elicit
