#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "metaharvest/store/store.hpp"

namespace metaharvest::evaluation {

/// unavailable: absent from the source; structured: clearly labelled as
/// metadata; unstructured: only present in free-form text.
enum class Availability { unavailable, structured, unstructured };

[[nodiscard]] auto to_string(Availability availability) -> char const*;
[[nodiscard]] auto parse_availability(std::string_view text) -> std::optional<Availability>;

struct AnnotationEntry {
    std::string value;  ///< "N/A" exactly when unavailable
    Availability availability = Availability::unavailable;
};

struct GroundTruthAnnotation {
    std::string source_id;
    std::string schema_id;
    std::map<std::string, AnnotationEntry> entries;
};

/// Throws metaharvest::Error when members are missing or when availability
/// and value disagree (unavailable <=> N/A).
[[nodiscard]] auto annotation_from_json(nlohmann::json const& json) -> GroundTruthAnnotation;
[[nodiscard]] auto to_json(GroundTruthAnnotation const& annotation) -> nlohmann::ordered_json;

/// Reads every *.json file in `dir`; each holds one annotation object or an
/// array of them. Unreadable files are reported per file.
[[nodiscard]] auto load_annotations(std::filesystem::path const& dir) -> store::LoadResult<GroundTruthAnnotation>;

}  // namespace metaharvest::evaluation
