#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaharvest/ingest/document.hpp"

namespace metaharvest::cli {

/// LLM settings a manifest may pin; environment variables and flags override them.
struct LlmSettings {
    std::optional<std::string> base_url;
    std::optional<std::string> model;
    std::optional<std::string> embed_model;
    std::optional<double> temperature;
    std::optional<double> requests_per_minute;
};

/// A corpus definition:
///
///     {"corpus_id": "...", "schema_id": "lter-life",
///      "sources": [{"id", "landing_url", "metadata_file_url"?, "provider"}],
///      "llm": {"base_url", "model", "embed_model", "temperature", "requests_per_minute"}}
///
/// URLs without a scheme are file paths relative to the manifest's directory.
struct CorpusManifest {
    std::string corpus_id;
    std::string schema_id;
    std::vector<ingest::DatasetSource> sources;
    LlmSettings llm;
};

/// Throws metaharvest::Error naming the offending member or source.
[[nodiscard]] auto parse_manifest(std::string_view json_text, std::filesystem::path const& base_dir = {})
    -> CorpusManifest;
[[nodiscard]] auto load_manifest(std::filesystem::path const& path) -> CorpusManifest;

}  // namespace metaharvest::cli
