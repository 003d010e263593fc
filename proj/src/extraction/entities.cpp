#include "metaharvest/extraction/entities.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "metaharvest/core/text.hpp"

namespace metaharvest::extraction {

namespace {

auto strip_decoration(std::string_view s) -> std::string_view
{
    s = trim(s);
    while (s.size() >= 2) {
        char const f = s.front();
        char const b = s.back();
        if ((f == '"' && b == '"') || (f == '\'' && b == '\'') || (f == '*' && b == '*') || (f == '`' && b == '`')
            || (f == '<' && b == '>')) {
            s = trim(s.substr(1, s.size() - 2));
        } else {
            break;
        }
    }
    return s;
}

auto normalise_name(std::string_view name) -> std::string
{
    std::string out = to_lower_ascii(strip_decoration(name));
    std::replace(out.begin(), out.end(), '_', ' ');
    std::replace(out.begin(), out.end(), '-', ' ');
    return collapse_whitespace(out);
}

}  // namespace

auto format_entity(std::string_view field, std::string_view value) -> std::string
{
    std::string out = "(\"entity\" | ";
    out.append(field).append(" | ").append(value).append(")");
    return out;
}

auto match_field(schema::MetadataSchema const& schema, std::string_view name) -> schema::FieldDefinition const*
{
    auto const wanted = normalise_name(name);
    for (auto const& field : schema.fields) {
        if (normalise_name(field.name) == wanted) {
            return &field;
        }
    }
    return nullptr;
}

auto parse_entity_response(std::string_view text, schema::MetadataSchema const& schema, Stage stage)
    -> ParsedEntities
{
    ParsedEntities parsed;
    std::size_t well_formed = 0;
    for (auto raw_line : split_lines(text)) {
        auto line = trim(raw_line);
        if (line.empty()) {
            continue;
        }
        // tolerate list markers and trailing separators some models add
        if (line.starts_with("- ") || line.starts_with("* ")) {
            line = trim(line.substr(2));
        }
        while (!line.empty() && (line.back() == ',' || line.back() == ';')) {
            line = trim(line.substr(0, line.size() - 1));
        }
        if (line.size() < 2 || line.front() != '(' || line.back() != ')') {
            ++parsed.skipped_lines;
            continue;
        }
        auto const inner = line.substr(1, line.size() - 2);
        auto const first = inner.find('|');
        auto const second = first == std::string_view::npos ? first : inner.find('|', first + 1);
        if (second == std::string_view::npos || !iequals(strip_decoration(inner.substr(0, first)), "entity")) {
            ++parsed.skipped_lines;
            continue;
        }
        ++well_formed;
        auto const name = inner.substr(first + 1, second - first - 1);
        auto const* field = match_field(schema, name);
        if (field == nullptr) {
            ++parsed.unknown_fields;
            continue;
        }
        auto value = std::string(trim(inner.substr(second + 1)));
        if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
            value = std::string(trim(std::string_view(value).substr(1, value.size() - 2)));
        }
        if (value.empty() || is_not_available(value)) {
            value = std::string(kNotAvailable);
        }
        parsed.entities.push_back({field->name, std::move(value), stage});
    }
    if (parsed.skipped_lines > 0) {
        spdlog::warn("entity response: skipped {} line(s) not in tuple format", parsed.skipped_lines);
    }
    if (parsed.unknown_fields > 0) {
        spdlog::warn("entity response: dropped {} entit(ies) with unknown field names", parsed.unknown_fields);
    }
    if (well_formed == 0) {
        throw EmptyExtractionError("LLM response contains no entity lines");
    }
    return parsed;
}

auto collapse_entries(schema::MetadataSchema const& schema, std::vector<RecordEntry> const& entries)
    -> std::vector<RecordEntry>
{
    std::vector<RecordEntry> out;
    out.reserve(schema.fields.size());
    for (auto const& field : schema.fields) {
        std::vector<std::string> values;
        for (auto const& entry : entries) {
            if (entry.field != field.name || is_not_available(entry.value)) {
                continue;
            }
            auto value = collapse_whitespace(entry.value);
            if (!value.empty() && std::find(values.begin(), values.end(), value) == values.end()) {
                values.push_back(std::move(value));
            }
        }
        out.push_back({field.name, values.empty() ? std::string(kNotAvailable) : join(values, kMultiValueSeparator)});
    }
    return out;
}

}  // namespace metaharvest::extraction
