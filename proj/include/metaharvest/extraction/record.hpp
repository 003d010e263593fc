#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace metaharvest::extraction {

/// Value recorded for a field the source does not provide.
inline constexpr std::string_view kNotAvailable = "N/A";

/// True for "N/A" in any letter case, ignoring surrounding whitespace.
[[nodiscard]] auto is_not_available(std::string_view value) -> bool;

enum class Stage { raw, postprocessed };

[[nodiscard]] auto to_string(Stage stage) -> char const*;
[[nodiscard]] auto parse_stage(std::string_view text) -> std::optional<Stage>;

struct ExtractedEntity {
    std::string field_name;
    std::string value;
    Stage stage = Stage::raw;

    auto operator==(ExtractedEntity const&) const -> bool = default;
};

struct Provenance {
    std::string model;
    std::string prompt_hash;
    std::string timestamp;
    std::string prompt_version;
    std::string inference_policy;
    bool truncated = false;
    bool downgraded = false;  ///< post-processing fell back to the raw entities

    auto operator==(Provenance const&) const -> bool = default;
};

struct RecordEntry {
    std::string field;
    std::string value;

    auto operator==(RecordEntry const&) const -> bool = default;
};

/// Harvested metadata for one dataset. Raw records may hold several entries per
/// field; post-processed records hold exactly one per schema field, in schema order.
struct MetadataRecord {
    std::string source_id;
    std::string schema_id;
    Stage stage = Stage::raw;
    std::vector<RecordEntry> entries;
    Provenance provenance;

    /// First value recorded for `field`, if any.
    [[nodiscard]] auto find(std::string_view field) const -> std::string const*;

    auto operator==(MetadataRecord const&) const -> bool = default;
};

[[nodiscard]] auto to_json(MetadataRecord const& record) -> nlohmann::ordered_json;

/// Throws metaharvest::Error on missing or mistyped members.
[[nodiscard]] auto record_from_json(nlohmann::ordered_json const& json) -> MetadataRecord;

}  // namespace metaharvest::extraction
