#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "metaharvest/core/error.hpp"
#include "metaharvest/extraction/record.hpp"
#include "metaharvest/schema/schema.hpp"

namespace metaharvest::extraction {

/// The response held no parseable entity line at all (as opposed to entity
/// lines that all say N/A).
class EmptyExtractionError : public Error {
  public:
    using Error::Error;
};

/// `("entity" | <field> | <value>)`
[[nodiscard]] auto format_entity(std::string_view field, std::string_view value) -> std::string;

struct ParsedEntities {
    std::vector<ExtractedEntity> entities;
    std::size_t unknown_fields = 0;  ///< well-formed lines naming a field outside the schema
    std::size_t skipped_lines = 0;   ///< non-blank lines not in the tuple format
};

/// Schema field matching `name` case-insensitively, treating '_' and '-' as
/// spaces and ignoring surrounding quotes or markdown emphasis.
[[nodiscard]] auto match_field(schema::MetadataSchema const& schema, std::string_view name)
    -> schema::FieldDefinition const*;

/// Tolerant line-by-line parse of the entity tuple format. Field names are
/// canonicalised to the schema's spelling; empty values become N/A.
/// Throws EmptyExtractionError when no line parses.
[[nodiscard]] auto parse_entity_response(std::string_view text, schema::MetadataSchema const& schema,
                                         Stage stage = Stage::raw) -> ParsedEntities;

/// Enforces one entry per schema field, in schema order: distinct non-N/A values
/// are joined with "; ", fields without any value become N/A.
[[nodiscard]] auto collapse_entries(schema::MetadataSchema const& schema, std::vector<RecordEntry> const& entries)
    -> std::vector<RecordEntry>;

inline constexpr std::string_view kMultiValueSeparator = "; ";

}  // namespace metaharvest::extraction
