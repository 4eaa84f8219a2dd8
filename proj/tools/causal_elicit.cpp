// causal-elicit: generate topic documents, extract and canonicalize events,
// build the incidence matrix, and run PC / GES / LiNGAM over it.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "elicit/errors.hpp"
#include "elicit/gateway.hpp"
#include "elicit/pipeline.hpp"

namespace {

elicit::LlmClient make_client(const elicit::RunConfig& cfg) {
    elicit::ProviderConfig pc = cfg.provider;
    pc.seed = cfg.seed;
    return elicit::LlmClient(pc);
}

void print_outcome(const elicit::RunOutcome& outcome) {
    std::printf("artifacts: %s\n", outcome.run_dir.c_str());
    if (!outcome.has_bundle) return;
    const auto& b = outcome.bundle;
    std::size_t lingam_edges = 0;
    for (const auto& row : b.lingam.b)
        for (double w : row)
            if (w != 0.0) ++lingam_edges;
    std::printf("variables: %zu\n", b.labels.size());
    std::printf("pc: %zu directed, %zu undirected\n", b.pc.directed.size(),
                b.pc.undirected.size());
    std::printf("ges: %zu directed, %zu undirected\n", b.ges.directed.size(),
                b.ges.undirected.size());
    std::printf("lingam: %zu weighted edges\n", lingam_edges);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Causal elicitation pipeline: documents -> events -> graphs"};
    app.require_subcommand(1);
    app.set_config("--config", "",
                   "Config file, key=value per line; quote values with spaces");
    app.allow_config_extras(CLI::config_extras_mode::error);

    elicit::RunConfig cfg;
    std::string provider = "mock";

    app.add_option("--topic", cfg.topic, "Topic text the run is conditioned on");
    app.add_option("--n", cfg.n, "Documents to generate")->capture_default_str();
    app.add_option("--k-max", cfg.k_max, "Maximum canonical event count")
        ->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "CI test significance level")
        ->capture_default_str();
    app.add_option("--max-cond", cfg.max_cond, "PC conditioning set cap")
        ->capture_default_str();
    app.add_option("--tau", cfg.tau, "Candidate cosine threshold")
        ->capture_default_str();
    app.add_option("--m", cfg.m, "Representative examples per cluster")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Seed for mock provider and clustering")
        ->capture_default_str();
    app.add_option("--temperature", cfg.temperature, "Generation temperature")
        ->capture_default_str();
    app.add_option("--gen-max-tokens", cfg.gen_max_tokens,
                   "Token budget per generated document")
        ->capture_default_str();
    app.add_option("--time-anchor", cfg.time_anchor,
                   "Date phrase the analyst prompt is anchored to")
        ->capture_default_str();
    app.add_option("--method", cfg.method, "Canonicalization method")
        ->check(CLI::IsMember({"embedding_first", "incremental", "both"}))
        ->capture_default_str();
    app.add_option("--score", cfg.score, "GES score")
        ->check(CLI::IsMember({"bic", "bdeu"}))
        ->capture_default_str();
    app.add_option("--ess", cfg.ess, "BDeu equivalent sample size")
        ->capture_default_str();
    app.add_option("--prune", cfg.prune_threshold, "LiNGAM weight prune threshold")
        ->capture_default_str();
    app.add_option("--out", cfg.out_root, "Output root directory")
        ->capture_default_str();
    app.add_option("--from", cfg.from_stage,
                   "Re-run from this stage onward (with run)")
        ->check(CLI::IsMember(
            {"generate", "extract", "canonicalize", "matrix", "discover"}));
    app.add_flag("--fresh", cfg.fresh, "Discard any previous run directory");

    app.add_option("--provider", provider, "LLM provider")
        ->check(CLI::IsMember({"mock", "remote"}))
        ->capture_default_str();
    app.add_option("--base-url", cfg.provider.base_url,
                   "Remote API base URL, e.g. https://api.openai.com/v1");
    app.add_option("--api-key-env", cfg.provider.api_key_env,
                   "Environment variable holding the API key")
        ->capture_default_str();
    app.add_option("--chat-model", cfg.provider.chat_model, "Chat model name")
        ->capture_default_str();
    app.add_option("--embed-model", cfg.provider.embed_model,
                   "Embedding model name")
        ->capture_default_str();
    app.add_option("--embed-dim", cfg.provider.embed_dim,
                   "Mock embedding dimension")
        ->capture_default_str();
    app.add_option("--max-parallel", cfg.provider.max_parallel,
                   "Concurrent embedding requests")
        ->capture_default_str();
    app.add_option("--max-retries", cfg.provider.max_retries,
                   "Retries for transient provider failures")
        ->capture_default_str();

    auto* sub_run = app.add_subcommand("run", "Run every stage in order");
    auto* sub_generate =
        app.add_subcommand("generate", "Generate the document corpus");
    auto* sub_extract =
        app.add_subcommand("extract", "Extract event mentions per document");
    auto* sub_canonicalize =
        app.add_subcommand("canonicalize", "Build the canonical event registry");
    auto* sub_matrix =
        app.add_subcommand("matrix", "Build and prune the incidence matrix");
    auto* sub_discover =
        app.add_subcommand("discover", "Run PC, GES, and LiNGAM; write reports");
    for (auto* sub : {sub_run, sub_generate, sub_extract, sub_canonicalize,
                      sub_matrix, sub_discover})
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    cfg.provider.kind = provider == "remote" ? elicit::ProviderConfig::Kind::remote
                                             : elicit::ProviderConfig::Kind::mock;

    try {
        elicit::LlmClient client = make_client(cfg);
        elicit::RunOutcome outcome;
        using elicit::Stage;
        if (sub_run->parsed()) {
            outcome = elicit::run_pipeline(cfg, client);
        } else {
            Stage stage = Stage::generate;
            if (sub_extract->parsed()) stage = Stage::extract;
            else if (sub_canonicalize->parsed()) stage = Stage::canonicalize;
            else if (sub_matrix->parsed()) stage = Stage::matrix;
            else if (sub_discover->parsed()) stage = Stage::discover;
            outcome = elicit::run_stage_range(cfg, client, stage, stage);
        }
        print_outcome(outcome);
    } catch (const elicit::StageError& e) {
        std::fprintf(stderr, "error in stage %s: %s\n", e.stage().c_str(),
                     e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
