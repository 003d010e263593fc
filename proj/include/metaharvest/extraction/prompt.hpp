#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

#include "metaharvest/extraction/record.hpp"
#include "metaharvest/ingest/document.hpp"
#include "metaharvest/llm/gateway.hpp"
#include "metaharvest/schema/schema.hpp"

namespace metaharvest::extraction {

/// Bumped whenever prompt wording changes; stored in record provenance.
inline constexpr std::string_view kPromptVersion = "metaharvest-ner/1";

namespace prompts {

inline constexpr std::string_view kExtractionRole =
    "---Role---\n"
    "You are a metadata extraction assistant. You identify named entities that describe a dataset "
    "in text scraped from its landing page and metadata files.";

inline constexpr std::string_view kPostprocessRole =
    "---Role---\n"
    "You are a metadata formatting assistant. You turn raw named-entity output into a clean metadata "
    "record with exactly one value per entity type.";

inline constexpr std::string_view kGoal = "---Goal---";
inline constexpr std::string_view kEntityTypes = "---Entity types---";
inline constexpr std::string_view kOutputFormat = "---Output format---";
inline constexpr std::string_view kDocument = "---Document---";
inline constexpr std::string_view kStructured = "---Structured metadata file---";
inline constexpr std::string_view kLanguage = "---Language---";
inline constexpr std::string_view kRules = "---Formatting rules---";
inline constexpr std::string_view kEntities = "---Extracted entities---";
inline constexpr std::string_view kExcerpt = "---Document excerpt---";

}  // namespace prompts

enum class InferencePolicy { strict, best_guess };

[[nodiscard]] auto to_string(InferencePolicy policy) -> char const*;
[[nodiscard]] auto parse_inference_policy(std::string_view text) -> std::optional<InferencePolicy>;

struct PromptOptions {
    std::string model;
    double temperature = 0.0;
    int max_tokens = 4096;
    InferencePolicy policy = InferencePolicy::strict;
    std::size_t max_document_chars = 200'000;
    std::size_t excerpt_chars = 4'000;  ///< document excerpt shown to the post-processing call
};

struct BuiltPrompt {
    llm::ChatRequest request;
    bool truncated = false;
};

/// Named-entity-recognition prompt. The user message holds, in order: the task
/// instruction, the (name, definition) list in schema order, the output format,
/// the page text followed by the structured metadata text under its own
/// heading, and the instruction to answer in English.
[[nodiscard]] auto build_extraction_prompt(schema::MetadataSchema const& schema, ingest::SourceDocument const& doc,
                                           PromptOptions const& options) -> BuiltPrompt;

/// Prompt for the second pass that merges raw entities into one value per field.
[[nodiscard]] auto build_postprocess_prompt(schema::MetadataSchema const& schema, MetadataRecord const& raw,
                                            ingest::SourceDocument const& doc, PromptOptions const& options)
    -> BuiltPrompt;

}  // namespace metaharvest::extraction
