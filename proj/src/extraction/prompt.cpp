#include "metaharvest/extraction/prompt.hpp"

#include <algorithm>

#include "metaharvest/core/text.hpp"
#include "metaharvest/extraction/entities.hpp"

namespace metaharvest::extraction {

auto to_string(InferencePolicy policy) -> char const*
{
    return policy == InferencePolicy::strict ? "strict" : "best_guess";
}

auto parse_inference_policy(std::string_view text) -> std::optional<InferencePolicy>
{
    if (text == "strict") {
        return InferencePolicy::strict;
    }
    if (text == "best_guess" || text == "best-guess") {
        return InferencePolicy::best_guess;
    }
    return std::nullopt;
}

namespace {

constexpr std::string_view kFormatLine = "(\"entity\" | <entity type> | <entity value>)";

void append_entity_types(std::string& out, schema::MetadataSchema const& schema)
{
    out.append(prompts::kEntityTypes).append("\n");
    for (auto const& field : schema.fields) {
        out.append("- ").append(field.name).append(": ").append(collapse_whitespace(field.definition)).append("\n");
    }
    out.append("\n");
}

auto absent_value_rule(InferencePolicy policy) -> std::string_view
{
    if (policy == InferencePolicy::strict) {
        return "Only report values that are stated in the document; do not infer or guess. If the document "
               "gives no value for an entity type, output that entity type with the value N/A.";
    }
    return "If the document does not state a value for an entity type but it can reasonably be inferred "
           "from the context, give your best guess; otherwise output that entity type with the value N/A.";
}

}  // namespace

auto build_extraction_prompt(schema::MetadataSchema const& schema, ingest::SourceDocument const& doc,
                             PromptOptions const& options) -> BuiltPrompt
{
    BuiltPrompt built;
    std::string_view page = doc.page_text;
    std::string_view structured = doc.structured_text ? std::string_view(*doc.structured_text) : std::string_view{};
    auto const budget = options.max_document_chars;
    if (utf8_length(page) + utf8_length(structured) > budget) {
        auto const structured_share = std::min(utf8_length(structured), budget / 2);
        structured = utf8_prefix(structured, structured_share);
        page = utf8_prefix(page, budget - structured_share);
        built.truncated = true;
    }

    std::string user;
    user.append(prompts::kGoal).append("\n");
    user.append("Given a text document describing a dataset and a list of metadata entity types with their "
                "definitions, identify all entities of those types in the text. ");
    user.append(absent_value_rule(options.policy)).append("\n\n");

    append_entity_types(user, schema);

    user.append(prompts::kOutputFormat).append("\n");
    user.append("Return one entity per line, formatted exactly as:\n");
    user.append(kFormatLine).append("\n");
    user.append("Use the entity type names exactly as listed above. Each entity value must fit on a single "
                "line. Output nothing but entity lines.\n\n");

    user.append(prompts::kDocument).append("\n");
    user.append(page).append("\n\n");
    if (doc.structured_text) {
        user.append(prompts::kStructured).append("\n");
        user.append(structured).append("\n\n");
    }

    user.append(prompts::kLanguage).append("\n");
    user.append("Return all entity values in English, translating them if the document is written in another "
                "language.\n");

    built.request.model = options.model;
    built.request.temperature = options.temperature;
    built.request.max_tokens = options.max_tokens;
    built.request.messages = {{llm::Role::system, std::string(prompts::kExtractionRole)},
                              {llm::Role::user, std::move(user)}};
    return built;
}

auto build_postprocess_prompt(schema::MetadataSchema const& schema, MetadataRecord const& raw,
                              ingest::SourceDocument const& doc, PromptOptions const& options) -> BuiltPrompt
{
    BuiltPrompt built;
    std::string user;
    user.append(prompts::kGoal).append("\n");
    user.append("Below are entities extracted from the landing page of one dataset. Rewrite them into a "
                "metadata record that follows the formatting rules.\n\n");

    user.append(prompts::kRules).append("\n");
    user.append("1. Output exactly one line per entity type listed below, in the listed order.\n");
    user.append("2. If several entities were extracted for one entity type, merge them into a single value: an "
                "enumeration separated by \"; \" (for example several data creators), or the single "
                "best-supported value when they are alternative readings of the same fact.\n");
    if (options.policy == InferencePolicy::strict) {
        user.append("3. If no entity was extracted for an entity type and the document excerpt does not state "
                    "it, use the value N/A. Do not guess.\n");
    } else {
        user.append("3. If no entity was extracted for an entity type, give a best guess supported by the "
                    "document excerpt, or N/A when nothing supports one.\n");
    }
    user.append("4. Remove labels, markup and surrounding quotes from values; keep URLs, identifiers and dates "
                "intact.\n");
    user.append("5. Write all values in English.\n\n");

    append_entity_types(user, schema);

    user.append(prompts::kEntities).append("\n");
    for (auto const& entry : raw.entries) {
        user.append(format_entity(entry.field, entry.value)).append("\n");
    }
    user.append("\n");

    user.append(prompts::kExcerpt).append("\n");
    auto const excerpt = utf8_prefix(doc.page_text, options.excerpt_chars);
    built.truncated = excerpt.size() < doc.page_text.size();
    user.append(excerpt).append("\n\n");

    user.append(prompts::kOutputFormat).append("\n");
    user.append("Return one line per entity type, formatted exactly as:\n");
    user.append(kFormatLine).append("\n");
    user.append("Output nothing but entity lines.\n");

    built.request.model = options.model;
    built.request.temperature = options.temperature;
    built.request.max_tokens = options.max_tokens;
    built.request.messages = {{llm::Role::system, std::string(prompts::kPostprocessRole)},
                              {llm::Role::user, std::move(user)}};
    return built;
}

}  // namespace metaharvest::extraction
