#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elicit/gateway.hpp"
#include "elicit/report.hpp"
#include "json.hpp"

namespace elicit {

enum class Stage { generate = 0, extract, canonicalize, matrix, discover };
inline constexpr int kStageCount = 5;

const char* stage_name(Stage s);
std::optional<Stage> stage_from_name(const std::string& name);

struct RunConfig {
    std::string topic;
    int n = 100;
    int k_max = 30;
    double alpha = 0.1;
    int max_cond = 3;
    double tau = 0.80;
    int m = 5;
    uint64_t seed = 42;
    double temperature = 1.0;  // document generation only
    int gen_max_tokens = 2048;
    std::string time_anchor = "January 2026";
    std::string method = "embedding_first";  // embedding_first | incremental | both
    std::string score = "bic";               // bic | bdeu
    double ess = 1.0;
    double prune_threshold = 0.05;
    std::string out_root = "runs";
    std::string from_stage;  // with run: mark this stage and later ones pending
    bool fresh = false;      // discard any previous run directory
    ProviderConfig provider;

    void validate() const;
};

struct StageRecord {
    std::string status = "pending";  // pending | done | failed
    std::string output;              // artifact path relative to the run dir
    std::string checksum;            // recorded when done
    std::string completed_at;
};

struct RunManifest {
    std::string topic_text;
    std::string topic_slug;
    nlohmann::ordered_json params;
    std::array<StageRecord, kStageCount> stages;
    std::vector<std::pair<std::string, std::string>> dropped_columns;
    std::string created_at;
    std::string updated_at;
};

RunManifest read_manifest(const std::string& path);

struct RunOutcome {
    std::string run_dir;
    GraphBundle bundle;  // populated iff has_bundle
    bool has_bundle = false;
};

// Full pipeline: runs every stage that is not already done (stage gating via
// the manifest); honors cfg.from_stage and cfg.fresh.
RunOutcome run_pipeline(const RunConfig& cfg, LlmClient& client);

// Re-runs exactly the [first, last] stage window: earlier stages must be
// done, the window and everything after it is marked pending first.
RunOutcome run_stage_range(const RunConfig& cfg, LlmClient& client, Stage first,
                           Stage last);

}  // namespace elicit
