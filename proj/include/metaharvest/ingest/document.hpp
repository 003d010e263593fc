#pragma once

#include <cstddef>
#include <optional>
#include <string>

namespace metaharvest::ingest {

struct DatasetSource {
    std::string id;
    std::string landing_url;
    std::optional<std::string> metadata_file_url;
    std::string provider;
};

/// Throws metaharvest::Error when the id is empty or not a file-name-safe slug,
/// or when a URL is not absolute.
void validate(DatasetSource const& source);

struct SourceDocument {
    std::string source_id;
    std::string page_text;
    std::optional<std::string> structured_text;
    std::string fetched_at;
    std::string content_hash;
    bool truncated = false;
};

/// Digest over page_text and structured_text; distinguishes an absent structured
/// text from an empty one.
[[nodiscard]] auto content_hash(std::string const& page_text, std::optional<std::string> const& structured_text)
    -> std::string;

[[nodiscard]] auto make_document(std::string source_id, std::string page_text,
                                 std::optional<std::string> structured_text, std::string fetched_at)
    -> SourceDocument;

}  // namespace metaharvest::ingest
