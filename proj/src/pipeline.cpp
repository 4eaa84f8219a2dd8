#include "elicit/pipeline.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include "elicit/canonicalize.hpp"
#include "elicit/corpus.hpp"
#include "elicit/errors.hpp"
#include "elicit/extraction.hpp"
#include "elicit/ges.hpp"
#include "elicit/incidence.hpp"
#include "elicit/lingam.hpp"
#include "elicit/pc.hpp"
#include "elicit/util.hpp"

namespace elicit {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr std::array<const char*, kStageCount> kStageNames{
    "generate", "extract", "canonicalize", "matrix", "discover"};
constexpr std::array<const char*, kStageCount> kStageOutputs{
    "documents.jsonl", "events_raw.jsonl", "canonical_map.json", "matrix.csv",
    "report.md"};

ordered_json params_json(const RunConfig& cfg) {
    ordered_json p;
    p["n"] = cfg.n;
    p["k_max"] = cfg.k_max;
    p["alpha"] = cfg.alpha;
    p["max_cond"] = cfg.max_cond;
    p["tau"] = cfg.tau;
    p["m"] = cfg.m;
    p["seed"] = cfg.seed;
    p["temperature"] = cfg.temperature;
    p["gen_max_tokens"] = cfg.gen_max_tokens;
    p["time_anchor"] = cfg.time_anchor;
    p["method"] = cfg.method;
    p["score"] = cfg.score;
    p["ess"] = cfg.ess;
    p["prune_threshold"] = cfg.prune_threshold;
    p["provider"] =
        cfg.provider.kind == ProviderConfig::Kind::mock ? "mock" : "remote";
    p["base_url"] = cfg.provider.base_url;
    p["api_key_env"] = cfg.provider.api_key_env;
    p["chat_model"] = cfg.provider.chat_model;
    p["embed_model"] = cfg.provider.embed_model;
    p["embed_dim"] = cfg.provider.embed_dim;
    p["max_parallel"] = cfg.provider.max_parallel;
    p["max_retries"] = cfg.provider.max_retries;
    return p;
}

ordered_json manifest_to_json(const RunManifest& m) {
    ordered_json j;
    j["topic"] = ordered_json{{"text", m.topic_text}, {"slug", m.topic_slug}};
    j["params"] = m.params;
    ordered_json stages;
    for (int s = 0; s < kStageCount; ++s) {
        const StageRecord& rec = m.stages[static_cast<std::size_t>(s)];
        ordered_json r;
        r["status"] = rec.status;
        r["output"] = rec.output;
        r["checksum"] = rec.checksum;
        r["completed_at"] = rec.completed_at;
        stages[kStageNames[static_cast<std::size_t>(s)]] = std::move(r);
    }
    j["stages"] = std::move(stages);
    ordered_json dropped = ordered_json::array();
    for (const auto& [label, reason] : m.dropped_columns)
        dropped.push_back(ordered_json::array({label, reason}));
    j["dropped_columns"] = std::move(dropped);
    j["created_at"] = m.created_at;
    j["updated_at"] = m.updated_at;
    return j;
}

RunManifest manifest_from_json(const ordered_json& j, const std::string& path) {
    RunManifest m;
    try {
        m.topic_text = j.at("topic").at("text").get<std::string>();
        m.topic_slug = j.at("topic").at("slug").get<std::string>();
        m.params = j.at("params");
        for (int s = 0; s < kStageCount; ++s) {
            const auto& r = j.at("stages").at(kStageNames[static_cast<std::size_t>(s)]);
            StageRecord& rec = m.stages[static_cast<std::size_t>(s)];
            rec.status = r.at("status").get<std::string>();
            rec.output = r.at("output").get<std::string>();
            rec.checksum = r.at("checksum").get<std::string>();
            rec.completed_at = r.at("completed_at").get<std::string>();
        }
        for (const auto& d : j.at("dropped_columns"))
            m.dropped_columns.emplace_back(d.at(0).get<std::string>(),
                                           d.at(1).get<std::string>());
        m.created_at = j.at("created_at").get<std::string>();
        m.updated_at = j.at("updated_at").get<std::string>();
    } catch (const ordered_json::exception& e) {
        throw StageError("manifest", "malformed manifest " + path + ": " + e.what());
    }
    return m;
}

void save_manifest(RunManifest& m, const std::string& dir) {
    m.updated_at = util::utc_now_iso8601();
    const fs::path path = fs::path(dir) / "manifest.json";
    const fs::path tmp = fs::path(dir) / "manifest.json.tmp";
    util::write_file(tmp.string(), manifest_to_json(m).dump(2) + "\n");
    fs::rename(tmp, path);
}

RunManifest fresh_manifest(const RunConfig& cfg, const Topic& topic) {
    RunManifest m;
    m.topic_text = topic.text;
    m.topic_slug = topic.slug;
    m.params = params_json(cfg);
    for (int s = 0; s < kStageCount; ++s)
        m.stages[static_cast<std::size_t>(s)].output =
            kStageOutputs[static_cast<std::size_t>(s)];
    m.created_at = util::utc_now_iso8601();
    return m;
}

std::string artifact(const std::string& dir, Stage s) {
    return (fs::path(dir) / kStageOutputs[static_cast<std::size_t>(static_cast<int>(s))])
        .string();
}

void stage_generate(const RunConfig& cfg, LlmClient& client, const Topic& topic,
                    const std::string& dir) {
    GenerationOptions opts;
    opts.temperature = cfg.temperature;
    opts.max_tokens = cfg.gen_max_tokens;
    opts.time_anchor = cfg.time_anchor;
    generate_documents(topic, cfg.n, client, artifact(dir, Stage::generate), opts);
}

void stage_extract(LlmClient& client, const Topic& topic, const std::string& dir) {
    const auto docs = parse_corpus_file(artifact(dir, Stage::generate), topic.slug);
    std::vector<DocEvents> lists;
    lists.reserve(docs.size());
    for (const auto& doc : docs) {
        DocEvents de;
        de.doc_id = doc.doc_id;
        for (const auto& m : extract_events(doc, client))
            de.mentions.push_back(m.cleaned);
        lists.push_back(std::move(de));
    }
    write_events_jsonl(artifact(dir, Stage::extract), lists);
}

void stage_canonicalize(const RunConfig& cfg, LlmClient& client,
                        const std::string& dir) {
    const auto lists = read_events_jsonl(artifact(dir, Stage::extract));
    CanonOptions opts;
    opts.k_max = cfg.k_max;
    opts.m = cfg.m;
    opts.tau = cfg.tau;
    opts.seed = cfg.seed;
    CanonicalizeResult res;
    if (cfg.method == "embedding_first") {
        res = canonicalize_embedding_first(lists, client, opts);
    } else if (cfg.method == "incremental") {
        res = canonicalize_incremental(lists, client, opts);
    } else {  // both: adjudicate over the names Algorithm 1 produced
        res = canonicalize_incremental(
            canonicalize_embedding_first(lists, client, opts).lists, client, opts);
    }
    write_events_jsonl((fs::path(dir) / "events_canon.jsonl").string(), res.lists);
    CanonParams params;
    params.k_max = cfg.k_max;
    params.tau = cfg.tau;
    params.seed = cfg.seed;
    params.method = cfg.method;
    write_canonical_map(artifact(dir, Stage::canonicalize), res.registry, params);
}

void stage_matrix(RunManifest& manifest, const std::string& dir) {
    const auto lists = read_events_jsonl(artifact(dir, Stage::extract));
    const auto reg = read_canonical_map(artifact(dir, Stage::canonicalize));
    const auto x = build_raw_matrix(lists, unique_preserve_order(lists));
    PruneResult pruned = drop_noninformative(aggregate(x, reg));
    util::write_file(artifact(dir, Stage::matrix), matrix_to_csv(pruned.matrix));
    manifest.dropped_columns = std::move(pruned.dropped);
}

GraphBundle compute_bundle(const RunConfig& cfg, const std::string& dir) {
    const IncidenceMatrix z =
        matrix_from_csv(util::read_file(artifact(dir, Stage::matrix)));
    GraphBundle bundle;
    bundle.labels = z.col_labels;
    bundle.pc = pc(z, cfg.alpha, cfg.max_cond);
    DecomposableScore score(z,
                            cfg.score == "bdeu"
                                ? DecomposableScore::Kind::bdeu
                                : DecomposableScore::Kind::bic_multinomial,
                            cfg.ess);
    bundle.ges = ges(z, score);
    bundle.lingam = direct_lingam(matrix_to_real(z), cfg.prune_threshold);
    bundle.lingam.labels = z.col_labels;
    return bundle;
}

GraphBundle stage_discover(const RunConfig& cfg, const RunManifest& manifest,
                           const std::string& dir) {
    GraphBundle bundle = compute_bundle(cfg, dir);
    const IncidenceMatrix z =
        matrix_from_csv(util::read_file(artifact(dir, Stage::matrix)));
    ReportInfo info;
    info.topic_text = manifest.topic_text;
    for (const auto& ev : read_canonical_map(artifact(dir, Stage::canonicalize)).events)
        info.events.emplace_back(ev.canon_id, ev.name);
    info.n_docs = z.rows();
    info.n_cols = z.cols();
    info.dropped = manifest.dropped_columns;
    write_report(bundle, info, dir);
    return bundle;
}

// Stages before `first` keep their done status but must exist on disk; their
// checksums are re-recorded so a deliberately edited artifact (the documented
// --from workflow) becomes the new baseline.
void reset_from(RunManifest& m, int first, const std::string& dir) {
    for (int s = 0; s < first; ++s) {
        StageRecord& rec = m.stages[static_cast<std::size_t>(s)];
        if (rec.status != "done") continue;
        const std::string path = artifact(dir, static_cast<Stage>(s));
        if (!fs::exists(path))
            throw StageError(kStageNames[static_cast<std::size_t>(s)],
                             "recorded output " + path + " is missing; re-run with "
                             "--from " + kStageNames[static_cast<std::size_t>(s)] +
                             " or --fresh");
        rec.checksum = util::file_checksum(path);
    }
    for (int s = first; s < kStageCount; ++s) {
        StageRecord& rec = m.stages[static_cast<std::size_t>(s)];
        rec.status = "pending";
        rec.checksum.clear();
        rec.completed_at.clear();
    }
}

RunOutcome execute(const RunConfig& cfg, LlmClient& client,
                   std::optional<Stage> force_first, Stage last) {
    cfg.validate();
    const Topic topic = Topic::from_text(cfg.topic);
    const std::string dir = (fs::path(cfg.out_root) / topic.slug).string();

    if (cfg.fresh) {
        std::error_code ec;
        fs::remove_all(dir, ec);
    }
    fs::create_directories(dir);

    RunManifest manifest;
    const std::string manifest_path = (fs::path(dir) / "manifest.json").string();
    if (fs::exists(manifest_path)) {
        manifest = read_manifest(manifest_path);
        if (manifest.params != params_json(cfg)) {
            if (!force_first && cfg.from_stage.empty())
                throw StageError("manifest",
                                 "parameters differ from the recorded run; re-run "
                                 "with --fresh, or --from <stage> to accept them");
            manifest.params = params_json(cfg);
        }
    } else {
        manifest = fresh_manifest(cfg, topic);
    }

    int first_to_run = 0;
    if (force_first) {
        const int f = static_cast<int>(*force_first);
        for (int s = 0; s < f; ++s)
            if (manifest.stages[static_cast<std::size_t>(s)].status != "done")
                throw StageError(kStageNames[static_cast<std::size_t>(s)],
                                 "stage is not done yet; run it first");
        reset_from(manifest, f, dir);
        first_to_run = f;
    } else if (!cfg.from_stage.empty()) {
        const auto from = stage_from_name(cfg.from_stage);
        if (!from) throw StageError("manifest", "unknown stage " + cfg.from_stage);
        reset_from(manifest, static_cast<int>(*from), dir);
    }
    save_manifest(manifest, dir);

    RunOutcome outcome;
    outcome.run_dir = dir;
    bool discover_ran = false;
    for (int s = first_to_run; s <= static_cast<int>(last); ++s) {
        StageRecord& rec = manifest.stages[static_cast<std::size_t>(s)];
        const std::string out_path = artifact(dir, static_cast<Stage>(s));
        if (rec.status == "done") {
            if (!fs::exists(out_path) ||
                util::file_checksum(out_path) != rec.checksum)
                throw StageError(
                    kStageNames[static_cast<std::size_t>(s)],
                    "output changed on disk; re-run with --from " +
                        std::string(kStageNames[static_cast<std::size_t>(s)]) +
                        " or --fresh");
            continue;
        }
        try {
            switch (static_cast<Stage>(s)) {
                case Stage::generate: stage_generate(cfg, client, topic, dir); break;
                case Stage::extract: stage_extract(client, topic, dir); break;
                case Stage::canonicalize: stage_canonicalize(cfg, client, dir); break;
                case Stage::matrix: stage_matrix(manifest, dir); break;
                case Stage::discover:
                    outcome.bundle = stage_discover(cfg, manifest, dir);
                    outcome.has_bundle = true;
                    discover_ran = true;
                    break;
            }
        } catch (const std::exception& e) {
            rec.status = "failed";
            rec.checksum.clear();
            rec.completed_at.clear();
            save_manifest(manifest, dir);
            throw StageError(kStageNames[static_cast<std::size_t>(s)], e.what());
        }
        rec.status = "done";
        rec.checksum = util::file_checksum(out_path);
        rec.completed_at = util::utc_now_iso8601();
        save_manifest(manifest, dir);
    }

    if (last == Stage::discover && !discover_ran &&
        manifest.stages[kStageCount - 1].status == "done") {
        outcome.bundle = compute_bundle(cfg, dir);
        outcome.has_bundle = true;
    }
    return outcome;
}

}  // namespace

const char* stage_name(Stage s) {
    return kStageNames[static_cast<std::size_t>(static_cast<int>(s))];
}

std::optional<Stage> stage_from_name(const std::string& name) {
    for (int s = 0; s < kStageCount; ++s)
        if (name == kStageNames[static_cast<std::size_t>(s)])
            return static_cast<Stage>(s);
    return std::nullopt;
}

void RunConfig::validate() const {
    if (topic.empty()) throw Error("topic must not be empty");
    if (n < 1) throw Error("n must be at least 1");
    if (k_max < 1) throw Error("k_max must be at least 1");
    if (alpha <= 0.0 || alpha >= 1.0) throw Error("alpha must be in (0, 1)");
    if (max_cond < 0) throw Error("max_cond must be non-negative");
    if (tau < 0.0 || tau > 1.0) throw Error("tau must be in [0, 1]");
    if (m < 1) throw Error("m must be at least 1");
    if (gen_max_tokens < 1) throw Error("gen_max_tokens must be positive");
    if (method != "embedding_first" && method != "incremental" && method != "both")
        throw Error("method must be embedding_first, incremental, or both");
    if (score != "bic" && score != "bdeu")
        throw Error("score must be bic or bdeu");
    if (ess <= 0.0) throw Error("ess must be positive");
    if (prune_threshold < 0.0) throw Error("prune_threshold must be non-negative");
    if (!from_stage.empty() && !stage_from_name(from_stage))
        throw Error("unknown stage for --from: " + from_stage);
    provider.validate();
}

RunManifest read_manifest(const std::string& path) {
    const auto j = ordered_json::parse(util::read_file(path), nullptr, false);
    if (j.is_discarded())
        throw StageError("manifest", "manifest " + path + " is not valid JSON");
    return manifest_from_json(j, path);
}

RunOutcome run_pipeline(const RunConfig& cfg, LlmClient& client) {
    return execute(cfg, client, std::nullopt, Stage::discover);
}

RunOutcome run_stage_range(const RunConfig& cfg, LlmClient& client, Stage first,
                           Stage last) {
    return execute(cfg, client, first, last);
}

}  // namespace elicit
