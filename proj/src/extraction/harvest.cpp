#include "metaharvest/extraction/harvest.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include <spdlog/spdlog.h>

#include "metaharvest/extraction/entities.hpp"
#include "metaharvest/ingest/ingestor.hpp"
#include "metaharvest/store/store.hpp"

namespace metaharvest::extraction {

namespace {

auto provenance_for(llm::ChatRequest const& request, llm::Completion const& completion, PromptOptions const& options)
    -> Provenance
{
    Provenance p;
    p.model = request.model;
    p.prompt_hash = llm::prompt_hash(request);
    p.timestamp = completion.created_at;
    p.prompt_version = std::string(kPromptVersion);
    p.inference_policy = to_string(options.policy);
    return p;
}

}  // namespace

auto extract_raw(schema::MetadataSchema const& schema, ingest::SourceDocument const& doc, llm::ChatModel& model,
                 PromptOptions const& options) -> MetadataRecord
{
    auto const prompt = build_extraction_prompt(schema, doc, options);
    if (prompt.truncated) {
        spdlog::warn("document of '{}' exceeds the prompt budget of {} characters; truncated", doc.source_id,
                     options.max_document_chars);
    }
    auto const completion = model.complete(prompt.request);
    auto parsed = parse_entity_response(completion.text, schema, Stage::raw);

    MetadataRecord record;
    record.source_id = doc.source_id;
    record.schema_id = schema.schema_id;
    record.stage = Stage::raw;
    for (auto& entity : parsed.entities) {
        record.entries.push_back({std::move(entity.field_name), std::move(entity.value)});
    }
    record.provenance = provenance_for(prompt.request, completion, options);
    record.provenance.truncated = prompt.truncated || doc.truncated;
    return record;
}

auto post_process(MetadataRecord const& raw, schema::MetadataSchema const& schema, ingest::SourceDocument const& doc,
                  llm::ChatModel& model, PromptOptions const& options) -> MetadataRecord
{
    if (raw.stage != Stage::raw) {
        throw Error("post_process expects a raw record, got " + std::string(to_string(raw.stage)));
    }
    auto const prompt = build_postprocess_prompt(schema, raw, doc, options);
    auto const completion = model.complete(prompt.request);

    MetadataRecord record;
    record.source_id = raw.source_id;
    record.schema_id = schema.schema_id;
    record.stage = Stage::postprocessed;
    record.provenance = provenance_for(prompt.request, completion, options);
    record.provenance.truncated = raw.provenance.truncated;
    try {
        auto parsed = parse_entity_response(completion.text, schema, Stage::postprocessed);
        std::vector<RecordEntry> entries;
        for (auto& entity : parsed.entities) {
            entries.push_back({std::move(entity.field_name), std::move(entity.value)});
        }
        record.entries = collapse_entries(schema, entries);
    } catch (EmptyExtractionError const&) {
        spdlog::warn("post-processing response for '{}' is unparseable; keeping raw entities", raw.source_id);
        record.entries = collapse_entries(schema, raw.entries);
        record.provenance.downgraded = true;
    }
    return record;
}

Harvester::Harvester(ingest::Ingestor& ingestor, llm::ChatModel& model, schema::MetadataSchema schema,
                     store::Store* store, HarvestOptions options)
    : ingestor_(ingestor), model_(model), schema_(std::move(schema)), store_(store), options_(std::move(options))
{
}

auto Harvester::harvest(ingest::DatasetSource const& source) -> HarvestOutcome
{
    HarvestOutcome outcome;
    outcome.source_id = source.id;
    auto fail = [&](char const* stage, std::exception const& e) {
        outcome.failed_stage = stage;
        outcome.error = e.what();
        spdlog::error("harvest of '{}' failed during {}: {}", source.id, stage, e.what());
        return outcome;
    };

    ingest::SourceDocument doc;
    try {
        doc = ingestor_.ingest(source);
    } catch (std::exception const& e) {
        return fail("ingest", e);
    }
    try {
        outcome.raw = extract_raw(schema_, doc, model_, options_.prompt);
        outcome.truncated = outcome.raw->provenance.truncated;
        if (store_ != nullptr) {
            store_->save_record(*outcome.raw);
        }
    } catch (std::exception const& e) {
        return fail("extract", e);
    }
    if (!options_.postprocess) {
        return outcome;
    }
    try {
        outcome.postprocessed = post_process(*outcome.raw, schema_, doc, model_, options_.prompt);
        if (store_ != nullptr) {
            store_->save_record(*outcome.postprocessed);
        }
    } catch (std::exception const& e) {
        return fail("postprocess", e);
    }
    return outcome;
}

auto Harvester::harvest_all(std::span<ingest::DatasetSource const> sources) -> std::vector<HarvestOutcome>
{
    std::vector<HarvestOutcome> outcomes(sources.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (auto i = next++; i < sources.size(); i = next++) {
            outcomes[i] = harvest(sources[i]);
        }
    };
    auto const jobs = std::clamp<std::size_t>(options_.jobs, 1, std::max<std::size_t>(sources.size(), 1));
    std::vector<std::jthread> pool;
    for (std::size_t j = 1; j < jobs; ++j) {
        pool.emplace_back(worker);
    }
    worker();
    return outcomes;
}

}  // namespace metaharvest::extraction
