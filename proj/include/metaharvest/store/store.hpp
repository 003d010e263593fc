#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "metaharvest/core/error.hpp"
#include "metaharvest/extraction/record.hpp"

namespace metaharvest::store {

enum class CacheKind { page, llm, embedding };

[[nodiscard]] auto to_string(CacheKind kind) -> char const*;

struct CacheEntry {
    std::string key;
    std::string payload;
    std::string created_at;
    CacheKind kind = CacheKind::page;
    std::string media_type;  ///< pages only
};

class StoreError : public Error {
  public:
    using Error::Error;
};

/// Raised when a key is re-put with a different payload.
class ImmutabilityError : public StoreError {
  public:
    using StoreError::StoreError;
};

template <typename T>
struct LoadResult {
    std::vector<T> items;
    std::vector<std::string> errors;    ///< one per unreadable file
    std::vector<std::string> warnings;
};

/// Writes `content` to `path` via a temporary file and rename.
void write_file_atomic(std::filesystem::path const& path, std::string_view content);

/// Content-addressed corpus directory:
///
///     <root>/cache/<kind>/<key>            payload bytes
///     <root>/cache/<kind>/<key>.meta.json  creation time and media type
///     <root>/records/<source_id>.<stage>.json
///     <root>/annotations/
///     <root>/matrices/
///
/// Cache entries are immutable. Writers to distinct keys never contend;
/// same-key writers race on an atomic link, and the loser verifies that its
/// payload matches the winner's.
class Store {
  public:
    using Clock = std::function<std::chrono::system_clock::time_point()>;

    explicit Store(std::filesystem::path root, Clock clock = {});

    [[nodiscard]] auto root() const -> std::filesystem::path const& { return root_; }
    [[nodiscard]] auto records_dir() const -> std::filesystem::path { return root_ / "records"; }
    [[nodiscard]] auto annotations_dir() const -> std::filesystem::path { return root_ / "annotations"; }
    [[nodiscard]] auto matrices_dir() const -> std::filesystem::path { return root_ / "matrices"; }

    /// Idempotent for identical payloads; throws ImmutabilityError otherwise.
    void put(std::string const& key, std::string_view payload, CacheKind kind, std::string_view media_type = {});

    [[nodiscard]] auto get(std::string const& key, CacheKind kind) const -> std::optional<CacheEntry>;

    [[nodiscard]] auto now() const -> std::string;

    void save_record(extraction::MetadataRecord const& record) const;

    /// Loads every record file under records/. A non-empty `schema_id` keeps only
    /// records of that schema (a warning is added when the filter removes all).
    [[nodiscard]] auto load_records(std::string_view schema_id = {},
                                    std::optional<extraction::Stage> stage = std::nullopt) const
        -> LoadResult<extraction::MetadataRecord>;

  private:
    [[nodiscard]] auto entry_path(std::string const& key, CacheKind kind) const -> std::filesystem::path;

    std::filesystem::path root_;
    Clock clock_;
};

[[nodiscard]] auto load_records_from(std::filesystem::path const& dir, std::string_view schema_id = {},
                                     std::optional<extraction::Stage> stage = std::nullopt)
    -> LoadResult<extraction::MetadataRecord>;

[[nodiscard]] auto record_file_name(extraction::MetadataRecord const& record) -> std::string;

}  // namespace metaharvest::store
