#include "metaharvest/cli/app.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <ostream>
#include <set>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaharvest/cli/manifest.hpp"
#include "metaharvest/core/text.hpp"
#include "metaharvest/evaluation/annotation.hpp"
#include "metaharvest/evaluation/rouge.hpp"
#include "metaharvest/evaluation/scoring.hpp"
#include "metaharvest/extraction/harvest.hpp"
#include "metaharvest/ingest/fetch.hpp"
#include "metaharvest/ingest/ingestor.hpp"
#include "metaharvest/linking/link_matrix.hpp"
#include "metaharvest/linking/temporal.hpp"
#include "metaharvest/llm/caching.hpp"
#include "metaharvest/llm/http_model.hpp"
#include "metaharvest/llm/mock.hpp"
#include "metaharvest/llm/rate_limiter.hpp"
#include "metaharvest/offline/scripted_model.hpp"
#include "metaharvest/schema/schema.hpp"
#include "metaharvest/store/store.hpp"

namespace metaharvest::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr char const* kDefaultSchema = "lter-life";
constexpr char const* kMockChatModel = "mock-scripted";

struct LlmFlags {
    std::string mode;
    std::string base_url;
    std::string model;
    std::string embed_model;
    std::string mock_table;
    double requests_per_minute = -1;
};

void add_llm_flags(CLI::App* cmd, LlmFlags& flags)
{
    cmd->add_option("--llm", flags.mode, "mock (offline, deterministic) or live")
        ->check(CLI::IsMember({"mock", "live"}));
    cmd->add_option("--mock-table", flags.mock_table, "JSON object of prompt hash -> canned response")
        ->check(CLI::ExistingFile);
    cmd->add_option("--llm-base-url", flags.base_url, "chat/embedding endpoint base URL");
    cmd->add_option("--llm-model", flags.model, "chat model name");
    cmd->add_option("--embed-model", flags.embed_model, "embedding model name");
    cmd->add_option("--requests-per-minute", flags.requests_per_minute, "rate limit shared by all LLM calls");
}

/// Counts renderer calls so commands can report page cache misses.
class CountingRenderer final : public ingest::PageRenderer {
  public:
    explicit CountingRenderer(ingest::PageRenderer& inner) : inner_(inner) {}

    auto fetch(std::string const& url) -> ingest::FetchResult override
    {
        ++calls_;
        return inner_.fetch(url);
    }

    [[nodiscard]] auto calls() const -> std::size_t { return calls_; }

  private:
    ingest::PageRenderer& inner_;
    std::atomic<std::size_t> calls_{0};
};

/// Chat model and embedder behind the store's response cache.
struct Gateway {
    std::unique_ptr<llm::ChatModel> chat_inner;
    std::unique_ptr<llm::Embedder> embed_inner;
    std::unique_ptr<llm::CachingChatModel> chat;
    std::unique_ptr<llm::CachingEmbedder> embed;
    std::string model;
    double temperature = 0.0;

    [[nodiscard]] auto chat_calls() const -> std::size_t { return chat ? chat->misses() : 0; }
    [[nodiscard]] auto embed_calls() const -> std::size_t { return embed ? embed->misses() : 0; }
};

auto make_gateway(LlmFlags const& flags, LlmSettings const& manifest, store::Store& store, bool need_chat,
                  bool need_embed) -> Gateway
{
    Gateway gateway;
    gateway.temperature = manifest.temperature.value_or(0.0);
    if (flags.mode == "mock") {
        auto mock = std::make_unique<llm::MockChatModel>(offline::scripted_response);
        if (!flags.mock_table.empty()) {
            mock->load_table(read_file(flags.mock_table));
        }
        gateway.model = flags.model.empty() ? kMockChatModel : flags.model;
        gateway.chat_inner = std::move(mock);
        gateway.embed_inner = std::make_unique<llm::MockEmbedder>(
            64, flags.embed_model.empty() ? std::string("mock-hash-embedding") : flags.embed_model);
    }
    else {
        llm::GatewayConfig config;
        config.base_url = manifest.base_url.value_or("");
        config.model = manifest.model.value_or("");
        config.embed_model = manifest.embed_model.value_or("");
        config.requests_per_minute = manifest.requests_per_minute.value_or(0.0);
        config = llm::apply_environment(std::move(config));
        if (!flags.base_url.empty()) {
            config.base_url = flags.base_url;
        }
        if (!flags.model.empty()) {
            config.model = flags.model;
        }
        if (!flags.embed_model.empty()) {
            config.embed_model = flags.embed_model;
        }
        if (flags.requests_per_minute >= 0) {
            config.requests_per_minute = flags.requests_per_minute;
        }
        if (config.api_key.empty()) {
            throw Error("--llm live needs an API key: set METAHARVEST_LLM_API_KEY");
        }
        if (config.base_url.empty()) {
            throw Error("--llm live needs an endpoint: set METAHARVEST_LLM_BASE_URL or --llm-base-url");
        }
        if (need_chat && config.model.empty()) {
            throw Error("--llm live needs a model: set METAHARVEST_LLM_MODEL or --llm-model");
        }
        if (need_embed && config.embed_model.empty()) {
            throw Error("--llm live needs an embedding model: set METAHARVEST_EMBED_MODEL or --embed-model");
        }
        auto transport = std::make_shared<llm::HttplibTransport>(config.timeout);
        std::shared_ptr<llm::TokenBucket> limiter;
        if (config.requests_per_minute > 0) {
            limiter = std::make_shared<llm::TokenBucket>(config.requests_per_minute);
        }
        gateway.model = config.model;
        gateway.chat_inner = std::make_unique<llm::HttpChatModel>(config, transport, limiter);
        gateway.embed_inner = std::make_unique<llm::HttpEmbedder>(config, transport, limiter);
    }
    gateway.chat = std::make_unique<llm::CachingChatModel>(*gateway.chat_inner, store);
    gateway.embed = std::make_unique<llm::CachingEmbedder>(*gateway.embed_inner, store);
    return gateway;
}

void write_text(fs::path const& path, std::string const& text)
{
    fs::create_directories(path.parent_path());
    store::write_file_atomic(path, text);
}

auto dump(ordered_json const& json) -> std::string
{
    return json.dump(2) + "\n";
}

auto today_utc() -> std::chrono::year_month_day
{
    return std::chrono::year_month_day{std::chrono::floor<std::chrono::days>(std::chrono::system_clock::now())};
}

auto parse_stage_filter(std::string const& text) -> std::optional<extraction::Stage>
{
    if (text == "all") {
        return std::nullopt;
    }
    return extraction::parse_stage(text);
}

void report_load_problems(std::vector<std::string> const& errors, std::vector<std::string> const& warnings,
                          std::ostream& err)
{
    for (auto const& w : warnings) {
        err << "warning: " << w << "\n";
    }
    for (auto const& e : errors) {
        err << "error: " << e << "\n";
    }
}

// ---------------------------------------------------------------- schema

struct SchemaArgs {
    std::string id;
    std::string output;
};

auto cmd_schema_list(std::ostream& out) -> int
{
    for (auto const& id : schema::builtin_schema_ids()) {
        auto const s = schema::builtin_schema(id);
        out << id << "\t" << s.fields.size() << " fields\t" << s.group_names().size() << " groups\n";
    }
    return 0;
}

auto cmd_schema_export(SchemaArgs const& args, std::ostream& out) -> int
{
    auto const text = schema::serialize(schema::resolve_schema(args.id));
    if (args.output.empty()) {
        out << text;
    }
    else {
        write_text(args.output, text);
    }
    return 0;
}

auto cmd_schema_show(SchemaArgs const& args, std::ostream& out) -> int
{
    auto const s = schema::resolve_schema(args.id);
    out << s.schema_id << ": " << s.fields.size() << " fields\n";
    std::string group;
    for (auto const& field : s.fields) {
        if (field.group != group) {
            group = field.group;
            out << "\n" << group << "\n";
        }
        out << "  " << field.name << " [" << schema::to_string(field.match_mode) << "; " << field.standard_ref
            << "]\n    " << field.definition << "\n";
    }
    return 0;
}

// ---------------------------------------------------------------- harvest

struct HarvestArgs {
    std::string corpus;
    std::string schema;
    std::string stage = "postprocessed";
    std::string out = "out";
    std::size_t jobs = 4;
    std::string policy = "strict";
    std::string user_agent;
    double timeout_s = 30;
    int max_redirects = 5;
    std::size_t max_chars = 200'000;
    LlmFlags llm{.mode = "live"};
};

auto cmd_harvest(HarvestArgs const& args, std::ostream& out, std::ostream& err, RunStats& stats) -> int
{
    auto const manifest = load_manifest(args.corpus);
    auto const schema_ref = !args.schema.empty()             ? args.schema
                            : !manifest.schema_id.empty() ? manifest.schema_id
                                                          : std::string(kDefaultSchema);
    auto const schema = schema::resolve_schema(schema_ref);
    auto const policy = extraction::parse_inference_policy(args.policy);
    if (!policy) {
        throw Error("unknown inference policy \"" + args.policy + "\" (strict or best_guess)");
    }

    store::Store store(args.out);
    // Resolve the gateway first so that a missing credential fails before any fetch.
    auto gateway = make_gateway(args.llm, manifest.llm, store, true, false);

    ingest::FetchOptions fetch_options;
    fetch_options.timeout = std::chrono::milliseconds(static_cast<long long>(args.timeout_s * 1000));
    fetch_options.max_redirects = args.max_redirects;
    if (!args.user_agent.empty()) {
        fetch_options.user_agent = args.user_agent;
    }
    ingest::StaticFetcher fetcher(fetch_options);
    CountingRenderer renderer(fetcher);
    ingest::Ingestor ingestor(renderer, &store, {.max_page_chars = args.max_chars});

    extraction::HarvestOptions options;
    options.prompt.model = gateway.model;
    options.prompt.temperature = gateway.temperature;
    options.prompt.policy = *policy;
    options.prompt.max_document_chars = args.max_chars;
    options.postprocess = args.stage == "postprocessed";
    options.jobs = std::max<std::size_t>(1, args.jobs);

    extraction::Harvester harvester(ingestor, *gateway.chat, schema, &store, options);
    auto const outcomes = harvester.harvest_all(manifest.sources);

    ordered_json report;
    report["corpus_id"] = manifest.corpus_id;
    report["schema_id"] = schema.schema_id;
    report["stage"] = args.stage;
    report["model"] = gateway.model;
    report["endpoint"] = gateway.chat->endpoint();
    report["inference_policy"] = extraction::to_string(*policy);
    report["succeeded"] = ordered_json::array();
    report["failed"] = ordered_json::array();
    report["truncated"] = ordered_json::array();
    report["downgraded"] = ordered_json::array();
    std::size_t failures = 0;
    for (auto const& outcome : outcomes) {
        if (outcome.ok()) {
            report["succeeded"].push_back(outcome.source_id);
        }
        else {
            ++failures;
            report["failed"].push_back(
                {{"source_id", outcome.source_id}, {"stage", outcome.failed_stage}, {"error", outcome.error}});
        }
        if (outcome.truncated) {
            report["truncated"].push_back(outcome.source_id);
        }
        if (outcome.postprocessed && outcome.postprocessed->provenance.downgraded) {
            report["downgraded"].push_back(outcome.source_id);
        }
    }
    write_text(fs::path(args.out) / "harvest_report.json", dump(report));

    stats.page_fetches += renderer.calls();
    stats.network_requests += fetcher.network_requests();
    stats.chat_calls += gateway.chat_calls();
    out << "harvested " << (outcomes.size() - failures) << " of " << outcomes.size() << " datasets into "
        << (fs::path(args.out) / "records").string() << "\n";
    if (failures > 0) {
        err << failures << " dataset(s) failed:\n";
        for (auto const& outcome : outcomes) {
            if (!outcome.ok()) {
                err << "  " << outcome.source_id << " (" << outcome.failed_stage << "): " << outcome.error << "\n";
            }
        }
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
    std::string records;
    std::string annotations;
    std::string corpus;
    std::string schema;
    std::string metrics = "rouge";
    std::vector<std::string> group_by;
    std::string stage = "postprocessed";
    std::string out = "out";
    std::string judge_model;
    LlmFlags llm;
};

auto cmd_evaluate(EvaluateArgs const& args, std::ostream& out, std::ostream& err, RunStats& stats) -> int
{
    bool const want_llm = args.metrics == "llm" || args.metrics == "all";
    if (want_llm && args.llm.mode.empty()) {
        throw Error("metrics faithfulness and response_relevancy need an LLM gateway: pass --llm mock or --llm live");
    }
    if (want_llm && args.corpus.empty()) {
        throw Error("metrics faithfulness and response_relevancy need the source documents: pass --corpus");
    }

    std::optional<CorpusManifest> manifest;
    if (!args.corpus.empty()) {
        manifest = load_manifest(args.corpus);
    }
    auto const schema_ref = !args.schema.empty()                          ? args.schema
                            : manifest && !manifest->schema_id.empty() ? manifest->schema_id
                                                                       : std::string(kDefaultSchema);
    auto const schema = schema::resolve_schema(schema_ref);

    std::vector<evaluation::GroupKey> keys;
    for (auto const& item : args.group_by) {
        auto const key = evaluation::parse_group_key(item);
        if (!key) {
            throw Error("unknown --group-by key \"" + item + "\" (provider, field, availability, stage, schema)");
        }
        keys.push_back(*key);
    }

    auto const records_dir = args.records.empty() ? fs::path(args.out) / "records" : fs::path(args.records);
    auto const annotations_dir =
        args.annotations.empty() ? fs::path(args.out) / "annotations" : fs::path(args.annotations);
    auto const records = store::load_records_from(records_dir, schema.schema_id, parse_stage_filter(args.stage));
    auto const annotations = evaluation::load_annotations(annotations_dir);
    report_load_problems(records.errors, records.warnings, err);
    report_load_problems(annotations.errors, annotations.warnings, err);

    store::Store store(args.out);
    evaluation::EvaluationOptions options;
    options.llm_metrics = want_llm;
    options.rouge = args.metrics != "llm";

    std::optional<Gateway> gateway;
    std::unique_ptr<ingest::StaticFetcher> fetcher;
    std::unique_ptr<CountingRenderer> renderer;
    std::unique_ptr<ingest::Ingestor> ingestor;
    std::map<std::string, ingest::SourceDocument> documents;
    std::map<std::string, ingest::DatasetSource> sources;
    if (manifest) {
        for (auto const& source : manifest->sources) {
            options.providers[source.id] = source.provider;
            sources[source.id] = source;
        }
    }
    if (want_llm) {
        gateway = make_gateway(args.llm, manifest->llm, store, true, true);
        options.judge = gateway->chat.get();
        options.embedder = gateway->embed.get();
        options.judge_options.model = args.judge_model.empty() ? gateway->model : args.judge_model;
        fetcher = std::make_unique<ingest::StaticFetcher>();
        renderer = std::make_unique<CountingRenderer>(*fetcher);
        ingestor = std::make_unique<ingest::Ingestor>(*renderer, &store);
        options.documents = [&](std::string const& id) -> ingest::SourceDocument const* {
            if (auto const it = documents.find(id); it != documents.end()) {
                return &it->second;
            }
            auto const source = sources.find(id);
            if (source == sources.end()) {
                return nullptr;
            }
            try {
                return &documents.emplace(id, ingestor->ingest(source->second)).first->second;
            }
            catch (std::exception const& e) {
                spdlog::error("cannot load source document of {}: {}", id, e.what());
                return nullptr;
            }
        };
    }

    auto const table = evaluation::evaluate_corpus(records.items, annotations.items, schema, options);
    auto const aggregates = evaluation::aggregate(table.rows, keys);
    auto const retrieval = evaluation::summarize_retrieval(table.rows);
    auto const summary = evaluation::format_summary(retrieval, keys, aggregates);

    ordered_json meta;
    meta["schema_id"] = schema.schema_id;
    meta["stage"] = args.stage;
    meta["tokenizer"] = std::string(evaluation::kTokenizerName);
    meta["metrics"] = args.metrics;
    if (want_llm) {
        meta["judge_model"] = options.judge_options.model;
        meta["embedding_model"] = gateway->embed->model();
        meta["relevancy_questions"] = options.judge_options.questions;
    }
    meta["group_by"] = args.group_by;
    meta["rows"] = table.rows.size();
    meta["errors"] = table.errors;
    meta["warnings"] = table.warnings;

    fs::path const out_dir(args.out);
    write_text(out_dir / "scores.csv", evaluation::to_csv(table.rows));
    write_text(out_dir / "scores.meta.json", dump(meta));
    write_text(out_dir / "summary.txt", summary);
    out << summary;

    if (gateway) {
        stats.chat_calls += gateway->chat_calls();
        stats.embed_calls += gateway->embed_calls();
    }
    if (renderer) {
        stats.page_fetches += renderer->calls();
        stats.network_requests += fetcher->network_requests();
    }
    auto const failures = table.errors.size() + records.errors.size() + annotations.errors.size();
    if (failures > 0) {
        err << failures << " evaluation error(s):\n";
        for (auto const& e : table.errors) {
            err << "  " << e << "\n";
        }
        return 1;
    }
    return 0;
}

// ---------------------------------------------------------------- link

struct LinkArgs {
    std::string records;
    std::string kind;
    std::string field;
    std::string present_date;
    std::string schema;
    std::string stage = "postprocessed";
    std::string out = "out";
    LlmFlags llm{.mode = "live"};
};

auto cmd_link(LinkArgs const& args, std::ostream& out, std::ostream& err, RunStats& stats) -> int
{
    bool const temporal = args.kind == "temporal";
    auto const field = !args.field.empty() ? args.field : temporal ? "Temporal coverage" : "Description";
    auto const present = args.present_date.empty() ? today_utc() : linking::parse_date(args.present_date);

    auto const records_dir = args.records.empty() ? fs::path(args.out) / "records" : fs::path(args.records);
    auto const stage = parse_stage_filter(args.stage);
    auto loaded = store::load_records_from(records_dir, args.schema, stage);
    report_load_problems(loaded.errors, loaded.warnings, err);

    store::Store store(args.out);
    auto gateway = make_gateway(args.llm, {}, store, temporal, !temporal);

    ordered_json report;
    report["kind"] = args.kind;
    report["field"] = field;
    report["excluded"] = ordered_json::array();
    report["failures"] = ordered_json::array();
    std::vector<std::string> failures;
    for (auto const& e : loaded.errors) {
        failures.push_back(e);
    }

    linking::LinkMatrix matrix;
    if (temporal) {
        report["present_date"] = linking::format_date(present);
        report["ranges"] = ordered_json::object();
        linking::TemporalOptions options;
        options.model = gateway.model;
        std::vector<std::pair<std::string, linking::CanonicalDateRange>> ranges;
        std::set<std::string> seen;
        for (auto const& record : loaded.items) {
            if (!seen.insert(record.source_id).second) {
                throw Error("several records for " + record.source_id + "; narrow with --stage or --schema");
            }
            auto const* value = record.find(field);
            if (value == nullptr || extraction::is_not_available(*value)) {
                report["excluded"].push_back(record.source_id);
                continue;
            }
            try {
                auto const range = linking::normalize_temporal_coverage(*value, present, *gateway.chat, options);
                ranges.emplace_back(record.source_id, range);
                report["ranges"][record.source_id] = {{"raw", *value}, {"canonical", linking::to_string(range)}};
            }
            catch (std::exception const& e) {
                failures.push_back(record.source_id + ": " + e.what());
                report["failures"].push_back({{"source_id", record.source_id}, {"error", e.what()}});
            }
        }
        matrix = linking::overlap_matrix(ranges);
    }
    else {
        auto result = linking::similarity_matrix(loaded.items, *gateway.embed, field);
        for (auto const& id : result.excluded) {
            report["excluded"].push_back(id);
        }
        matrix = std::move(result.matrix);
        report["embedding_model"] = matrix.embedding_model;
    }
    report["ids"] = matrix.ids;

    auto const dir = fs::path(args.out) / "matrices";
    auto const stem = temporal ? std::string("temporal_overlap") : std::string("cosine_similarity");
    write_text(dir / (stem + ".csv"), linking::to_csv(matrix));
    write_text(dir / (stem + ".json"), dump(linking::to_json(matrix)));
    write_text(dir / (stem + ".report.json"), dump(report));

    stats.chat_calls += gateway.chat_calls();
    stats.embed_calls += gateway.embed_calls();
    out << "wrote " << matrix.ids.size() << "x" << matrix.ids.size() << " " << linking::to_string(matrix.kind)
        << " matrix to " << (dir / (stem + ".csv")).string() << "\n";
    if (!report["excluded"].empty()) {
        out << "excluded (no " << field << "): " << report["excluded"].size() << "\n";
    }
    if (!failures.empty()) {
        err << failures.size() << " dataset(s) failed:\n";
        for (auto const& f : failures) {
            err << "  " << f << "\n";
        }
        return 1;
    }
    return 0;
}

}  // namespace

auto run_cli(std::vector<std::string> const& args, std::ostream& out, std::ostream& err, RunStats* stats) -> int
{
    CLI::App app{"Schema-driven dataset metadata harvester", "metaharvest"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "metaharvest 0.1.0");

    SchemaArgs schema_args;
    auto* schema_cmd = app.add_subcommand("schema", "List, show and export metadata schemas");
    schema_cmd->require_subcommand(1);
    auto* schema_list = schema_cmd->add_subcommand("list", "List built-in schemas");
    auto* schema_show = schema_cmd->add_subcommand("show", "Print a schema's fields and definitions");
    schema_show->add_option("schema", schema_args.id, "built-in id or schema file")->required();
    auto* schema_export = schema_cmd->add_subcommand("export", "Write a schema in canonical JSON form");
    schema_export->add_option("schema", schema_args.id, "built-in id or schema file")->required();
    schema_export->add_option("-o,--output", schema_args.output, "file to write instead of standard output");

    HarvestArgs harvest;
    auto* harvest_cmd = app.add_subcommand("harvest", "Scrape and extract metadata for every corpus source");
    harvest_cmd->add_option("--corpus", harvest.corpus, "corpus manifest (JSON)")->required()->check(CLI::ExistingFile);
    harvest_cmd->add_option("--schema", harvest.schema, "built-in schema id or schema file");
    harvest_cmd->add_option("--stage", harvest.stage, "last stage to run")
        ->check(CLI::IsMember({"raw", "postprocessed"}))
        ->capture_default_str();
    harvest_cmd->add_option("--out", harvest.out, "corpus store directory")->capture_default_str();
    harvest_cmd->add_option("--jobs", harvest.jobs, "concurrent harvests")->check(CLI::PositiveNumber)->capture_default_str();
    harvest_cmd->add_option("--inference-policy", harvest.policy, "strict or best_guess")->capture_default_str();
    harvest_cmd->add_option("--user-agent", harvest.user_agent, "User-Agent header for page fetches");
    harvest_cmd->add_option("--timeout", harvest.timeout_s, "page fetch timeout in seconds")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    harvest_cmd->add_option("--max-redirects", harvest.max_redirects, "redirect limit")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    harvest_cmd->add_option("--max-chars", harvest.max_chars, "page text limit in characters")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    add_llm_flags(harvest_cmd, harvest.llm);

    EvaluateArgs evaluate;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score harvested records against annotations");
    evaluate_cmd->add_option("--records", evaluate.records, "records directory (default <out>/records)");
    evaluate_cmd->add_option("--annotations", evaluate.annotations, "annotations directory (default <out>/annotations)");
    evaluate_cmd->add_option("--corpus", evaluate.corpus, "corpus manifest, for providers and source documents")
        ->check(CLI::ExistingFile);
    evaluate_cmd->add_option("--schema", evaluate.schema, "built-in schema id or schema file");
    evaluate_cmd->add_option("--metrics", evaluate.metrics, "rouge, llm or all")
        ->check(CLI::IsMember({"rouge", "llm", "all"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--group-by", evaluate.group_by, "provider, field, availability, stage, schema")
        ->delimiter(',');
    evaluate_cmd->add_option("--stage", evaluate.stage, "raw, postprocessed or all")
        ->check(CLI::IsMember({"raw", "postprocessed", "all"}))
        ->capture_default_str();
    evaluate_cmd->add_option("--out", evaluate.out, "output and cache directory")->capture_default_str();
    evaluate_cmd->add_option("--judge-model", evaluate.judge_model, "model judging the LLM metrics");
    add_llm_flags(evaluate_cmd, evaluate.llm);

    LinkArgs link;
    auto* link_cmd = app.add_subcommand("link", "Build similarity or temporal overlap matrices");
    link_cmd->add_option("--records", link.records, "records directory (default <out>/records)");
    link_cmd->add_option("--kind", link.kind, "similarity or temporal")
        ->required()
        ->check(CLI::IsMember({"similarity", "temporal"}));
    link_cmd->add_option("--field", link.field, "field to compare (Description / Temporal coverage)");
    link_cmd->add_option("--present-date", link.present_date, "date that 'present' stands for (default today)");
    link_cmd->add_option("--schema", link.schema, "only records of this schema id");
    link_cmd->add_option("--stage", link.stage, "raw, postprocessed or all")
        ->check(CLI::IsMember({"raw", "postprocessed", "all"}))
        ->capture_default_str();
    link_cmd->add_option("--out", link.out, "output and cache directory")->capture_default_str();
    add_llm_flags(link_cmd, link.llm);

    std::vector<char const*> argv{"metaharvest"};
    for (auto const& a : args) {
        argv.push_back(a.c_str());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    }
    catch (CLI::ParseError const& e) {
        return app.exit(e, out, err);
    }

    RunStats local;
    RunStats& run = stats != nullptr ? *stats : local;
    try {
        if (schema_list->parsed()) {
            return cmd_schema_list(out);
        }
        if (schema_show->parsed()) {
            return cmd_schema_show(schema_args, out);
        }
        if (schema_export->parsed()) {
            return cmd_schema_export(schema_args, out);
        }
        if (harvest_cmd->parsed()) {
            return cmd_harvest(harvest, out, err, run);
        }
        if (evaluate_cmd->parsed()) {
            return cmd_evaluate(evaluate, out, err, run);
        }
        if (link_cmd->parsed()) {
            return cmd_link(link, out, err, run);
        }
    }
    catch (std::exception const& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace metaharvest::cli
