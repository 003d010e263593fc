#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "metaharvest/extraction/prompt.hpp"
#include "metaharvest/extraction/record.hpp"
#include "metaharvest/ingest/document.hpp"
#include "metaharvest/llm/gateway.hpp"
#include "metaharvest/schema/schema.hpp"

namespace metaharvest::ingest {
class Ingestor;
}
namespace metaharvest::store {
class Store;
}

namespace metaharvest::extraction {

/// Second LLM pass. The response is parsed and then collapsed to exactly one
/// value per schema field, so the invariant holds whatever the model returns.
/// An unparseable response falls back to collapsing the raw entities and sets
/// provenance.downgraded. Gateway errors propagate.
[[nodiscard]] auto post_process(MetadataRecord const& raw, schema::MetadataSchema const& schema,
                                ingest::SourceDocument const& doc, llm::ChatModel& model,
                                PromptOptions const& options) -> MetadataRecord;

/// First LLM pass: prompt, complete, parse. Throws EmptyExtractionError when the
/// response has no entity lines.
[[nodiscard]] auto extract_raw(schema::MetadataSchema const& schema, ingest::SourceDocument const& doc,
                               llm::ChatModel& model, PromptOptions const& options) -> MetadataRecord;

struct HarvestOptions {
    PromptOptions prompt;
    bool postprocess = true;
    std::size_t jobs = 4;
};

struct HarvestOutcome {
    std::string source_id;
    std::optional<MetadataRecord> raw;
    std::optional<MetadataRecord> postprocessed;
    std::string failed_stage;  ///< ingest, extract, postprocess or store
    std::string error;
    bool truncated = false;

    [[nodiscard]] auto ok() const -> bool { return error.empty(); }
};

/// ingest -> extraction prompt -> complete -> parse -> post-process, persisting
/// both stages. A failing dataset yields a failed outcome and never aborts the
/// others.
class Harvester {
  public:
    Harvester(ingest::Ingestor& ingestor, llm::ChatModel& model, schema::MetadataSchema schema, store::Store* store,
              HarvestOptions options);

    [[nodiscard]] auto harvest(ingest::DatasetSource const& source) -> HarvestOutcome;

    /// Runs up to options.jobs harvests concurrently; outcomes keep input order.
    [[nodiscard]] auto harvest_all(std::span<ingest::DatasetSource const> sources) -> std::vector<HarvestOutcome>;

  private:
    ingest::Ingestor& ingestor_;
    llm::ChatModel& model_;
    schema::MetadataSchema schema_;
    store::Store* store_;
    HarvestOptions options_;
};

}  // namespace metaharvest::extraction
