#include "metaharvest/schema/schema.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

#include <nlohmann/json.hpp>

#include "metaharvest/core/text.hpp"

namespace metaharvest::schema {

auto to_string(MatchMode mode) -> char const*
{
    return mode == MatchMode::exact ? "exact" : "fuzzy";
}

SchemaParseError::SchemaParseError(std::string const& what, std::size_t line, std::size_t column)
    : Error("schema parse error at line " + std::to_string(line) + ", column " + std::to_string(column) + ": "
            + what),
      line_(line),
      column_(column)
{
}

SchemaValidationError::SchemaValidationError(std::string const& what, std::string field)
    : Error(field.empty() ? "invalid schema: " + what : "invalid schema field '" + field + "': " + what),
      field_(std::move(field))
{
}

auto MetadataSchema::find(std::string_view name) const -> FieldDefinition const*
{
    for (auto const& field : fields) {
        if (field.name == name) {
            return &field;
        }
    }
    return nullptr;
}

auto MetadataSchema::field_names() const -> std::vector<std::string>
{
    std::vector<std::string> names;
    names.reserve(fields.size());
    for (auto const& field : fields) {
        names.push_back(field.name);
    }
    return names;
}

auto MetadataSchema::group_names() const -> std::vector<std::string>
{
    std::vector<std::string> groups;
    for (auto const& field : fields) {
        if (std::find(groups.begin(), groups.end(), field.group) == groups.end()) {
            groups.push_back(field.group);
        }
    }
    return groups;
}

void validate(MetadataSchema const& schema)
{
    if (trim(schema.schema_id).empty()) {
        throw SchemaValidationError("schema_id is empty", "");
    }
    if (schema.fields.empty()) {
        throw SchemaValidationError("schema has no fields", "");
    }
    std::set<std::string> seen;
    for (auto const& field : schema.fields) {
        if (trim(field.name).empty()) {
            throw SchemaValidationError("field name is empty", "");
        }
        if (field.name.find('|') != std::string::npos || field.name.find('\n') != std::string::npos) {
            throw SchemaValidationError("field names may not contain '|' or line breaks", field.name);
        }
        if (!seen.insert(to_lower_ascii(field.name)).second) {
            throw SchemaValidationError("duplicate field name", field.name);
        }
        if (trim(field.definition).empty()) {
            throw SchemaValidationError("definition is empty", field.name);
        }
    }
}

namespace {

auto line_and_column(std::string_view text, std::size_t byte) -> std::pair<std::size_t, std::size_t>
{
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

auto required_string(nlohmann::json const& obj, char const* key, std::string const& field) -> std::string
{
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw SchemaValidationError(std::string("missing or non-string \"") + key + "\"", field);
    }
    return obj[key].get<std::string>();
}

}  // namespace

auto parse_schema(std::string_view json_text) -> MetadataSchema
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (nlohmann::json::parse_error const& e) {
        // e.byte is 1-based and points just past the offending character
        auto const [line, column] = line_and_column(json_text, e.byte == 0 ? 0 : e.byte - 1);
        throw SchemaParseError(e.what(), line, column);
    }
    if (!doc.is_object()) {
        throw SchemaValidationError("top level must be an object", "");
    }
    MetadataSchema schema;
    schema.schema_id = required_string(doc, "schema_id", "");
    if (!doc.contains("fields") || !doc["fields"].is_array()) {
        throw SchemaValidationError("missing \"fields\" array", "");
    }
    for (auto const& item : doc["fields"]) {
        if (!item.is_object()) {
            throw SchemaValidationError("field entries must be objects", "");
        }
        FieldDefinition field;
        field.name = required_string(item, "name", "");
        field.group = required_string(item, "group", field.name);
        field.definition = required_string(item, "definition", field.name);
        auto const mode = item.contains("match_mode") ? required_string(item, "match_mode", field.name) : "exact";
        if (mode == "exact") {
            field.match_mode = MatchMode::exact;
        } else if (mode == "fuzzy") {
            field.match_mode = MatchMode::fuzzy;
        } else {
            throw SchemaValidationError("match_mode must be \"exact\" or \"fuzzy\"", field.name);
        }
        field.standard_ref = item.contains("standard_ref") ? required_string(item, "standard_ref", field.name) : "";
        schema.fields.push_back(std::move(field));
    }
    validate(schema);
    return schema;
}

auto load_schema(std::string const& path) -> MetadataSchema
{
    return parse_schema(read_file(path));
}

auto serialize(MetadataSchema const& schema) -> std::string
{
    nlohmann::ordered_json fields = nlohmann::ordered_json::array();
    for (auto const& field : schema.fields) {
        fields.push_back({{"name", field.name},
                          {"group", field.group},
                          {"definition", field.definition},
                          {"match_mode", to_string(field.match_mode)},
                          {"standard_ref", field.standard_ref}});
    }
    nlohmann::ordered_json doc = {{"schema_id", schema.schema_id}, {"fields", std::move(fields)}};
    return doc.dump(2) + "\n";
}

auto builtin_schema(std::string_view id) -> MetadataSchema
{
    return parse_schema(builtin_schema_json(id));
}

auto resolve_schema(std::string const& id_or_path) -> MetadataSchema
{
    auto const ids = builtin_schema_ids();
    if (std::find(ids.begin(), ids.end(), id_or_path) != ids.end()) {
        return builtin_schema(id_or_path);
    }
    std::error_code ec;
    if (std::filesystem::is_regular_file(id_or_path, ec)) {
        return load_schema(id_or_path);
    }
    throw UnknownSchemaError("unknown schema '" + id_or_path + "' (built-ins: lter-life, croissant)");
}

}  // namespace metaharvest::schema
