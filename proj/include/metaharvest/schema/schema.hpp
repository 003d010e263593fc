#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "metaharvest/core/error.hpp"

namespace metaharvest::schema {

enum class MatchMode { exact, fuzzy };

[[nodiscard]] auto to_string(MatchMode mode) -> char const*;

struct FieldDefinition {
    std::string name;
    std::string group;
    std::string definition;
    MatchMode match_mode = MatchMode::exact;
    std::string standard_ref;

    auto operator==(FieldDefinition const&) const -> bool = default;
};

/// Ordered set of metadata fields; order drives prompt layout and output order.
struct MetadataSchema {
    std::string schema_id;
    std::vector<FieldDefinition> fields;

    [[nodiscard]] auto find(std::string_view name) const -> FieldDefinition const*;
    [[nodiscard]] auto field_names() const -> std::vector<std::string>;
    [[nodiscard]] auto group_names() const -> std::vector<std::string>;

    auto operator==(MetadataSchema const&) const -> bool = default;
};

/// Malformed schema JSON; carries the 1-based line and column of the failure.
class SchemaParseError : public Error {
  public:
    SchemaParseError(std::string const& what, std::size_t line, std::size_t column);
    [[nodiscard]] auto line() const noexcept -> std::size_t { return line_; }
    [[nodiscard]] auto column() const noexcept -> std::size_t { return column_; }

  private:
    std::size_t line_;
    std::size_t column_;
};

/// Well-formed JSON that violates a schema invariant.
class SchemaValidationError : public Error {
  public:
    SchemaValidationError(std::string const& what, std::string field);
    [[nodiscard]] auto field() const -> std::string const& { return field_; }

  private:
    std::string field_;
};

class UnknownSchemaError : public Error {
  public:
    using Error::Error;
};

/// Checks the invariants: non-empty id, at least one field, unique non-empty
/// names (compared case-insensitively), non-empty definitions.
void validate(MetadataSchema const& schema);

[[nodiscard]] auto parse_schema(std::string_view json_text) -> MetadataSchema;
[[nodiscard]] auto load_schema(std::string const& path) -> MetadataSchema;

/// Canonical JSON form: two-space indentation, members in a fixed order,
/// trailing newline.
[[nodiscard]] auto serialize(MetadataSchema const& schema) -> std::string;

[[nodiscard]] auto builtin_schema_ids() -> std::vector<std::string>;
[[nodiscard]] auto builtin_schema_json(std::string_view id) -> std::string_view;
[[nodiscard]] auto builtin_schema(std::string_view id) -> MetadataSchema;

/// A built-in id, or else a path to a schema file.
[[nodiscard]] auto resolve_schema(std::string const& id_or_path) -> MetadataSchema;

}  // namespace metaharvest::schema
