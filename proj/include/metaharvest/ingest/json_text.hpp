#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace metaharvest::ingest {

/// Linearizes a JSON document into "key/path: value" lines in document order,
/// mirroring parse_structured_metadata. Array elements reuse the parent key.
/// Returns nullopt when the input is not valid JSON.
[[nodiscard]] auto linearize_json(std::string_view json) -> std::optional<std::string>;

}  // namespace metaharvest::ingest
