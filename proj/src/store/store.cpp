#include "metaharvest/store/store.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaharvest/core/hash.hpp"
#include "metaharvest/core/text.hpp"

namespace fs = std::filesystem;

namespace metaharvest::store {

using extraction::MetadataRecord;
using extraction::Stage;

auto to_string(CacheKind kind) -> char const*
{
    switch (kind) {
    case CacheKind::page: return "page";
    case CacheKind::llm: return "llm";
    case CacheKind::embedding: return "embedding";
    }
    return "unknown";
}

namespace {

auto temp_name(fs::path const& path) -> fs::path
{
    static std::atomic<unsigned long> counter{0};
    std::ostringstream name;
    name << path.filename().string() << ".tmp." << std::hash<std::thread::id>{}(std::this_thread::get_id()) << "."
         << counter++;
    return path.parent_path() / name.str();
}

void write_plain(fs::path const& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw StoreError("cannot write " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.close();
    if (!out) {
        throw StoreError("write failed for " + path.string());
    }
}

auto slurp(fs::path const& path) -> std::string
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw StoreError("cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Publishes `content` at `path` only if nothing is there yet. Returns false when
// another writer got there first.
auto publish_once(fs::path const& path, std::string_view content) -> bool
{
    auto const tmp = temp_name(path);
    write_plain(tmp, content);
    std::error_code ec;
    fs::create_hard_link(tmp, path, ec);
    fs::remove(tmp);
    if (!ec) {
        return true;
    }
    if (ec == std::errc::file_exists) {
        return false;
    }
    throw StoreError("cannot publish " + path.string() + ": " + ec.message());
}

}  // namespace

void write_file_atomic(fs::path const& path, std::string_view content)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    auto const tmp = temp_name(path);
    write_plain(tmp, content);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw StoreError("cannot rename into " + path.string() + ": " + ec.message());
    }
}

Store::Store(fs::path root, Clock clock) : root_(std::move(root)), clock_(std::move(clock))
{
    if (!clock_) {
        clock_ = [] { return std::chrono::system_clock::now(); };
    }
    for (auto const* sub : {"cache/page", "cache/llm", "cache/embedding", "records", "annotations", "matrices"}) {
        fs::create_directories(root_ / sub);
    }
}

auto Store::now() const -> std::string { return format_utc(clock_()); }

auto Store::entry_path(std::string const& key, CacheKind kind) const -> fs::path
{
    if (!is_sha256_hex(key)) {
        throw StoreError("malformed cache key '" + key + "'");
    }
    return root_ / "cache" / to_string(kind) / key;
}

void Store::put(std::string const& key, std::string_view payload, CacheKind kind, std::string_view media_type)
{
    auto const path = entry_path(key, kind);
    auto meta_path = path;
    meta_path += ".meta.json";

    nlohmann::ordered_json meta = {
        {"key", key}, {"kind", to_string(kind)}, {"created_at", now()}, {"media_type", media_type}};
    // Metadata first: a visible payload always has metadata next to it.
    publish_once(meta_path, meta.dump(2) + "\n");
    if (!publish_once(path, payload)) {
        if (slurp(path) != payload) {
            throw ImmutabilityError("cache key " + key + " already holds a different payload");
        }
    }
}

auto Store::get(std::string const& key, CacheKind kind) const -> std::optional<CacheEntry>
{
    auto const path = entry_path(key, kind);
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
        return std::nullopt;
    }
    CacheEntry entry;
    entry.key = key;
    entry.kind = kind;
    entry.payload = slurp(path);
    auto meta_path = path;
    meta_path += ".meta.json";
    auto const meta = nlohmann::json::parse(slurp(meta_path), nullptr, false);
    if (meta.is_object()) {
        entry.created_at = meta.value("created_at", "");
        entry.media_type = meta.value("media_type", "");
    }
    return entry;
}

auto record_file_name(MetadataRecord const& record) -> std::string
{
    return record.source_id + "." + extraction::to_string(record.stage) + ".json";
}

void Store::save_record(MetadataRecord const& record) const
{
    if (record.source_id.empty() || record.source_id.find_first_of("/\\") != std::string::npos) {
        throw StoreError("invalid source id '" + record.source_id + "'");
    }
    write_file_atomic(records_dir() / record_file_name(record), to_json(record).dump(2) + "\n");
}

auto Store::load_records(std::string_view schema_id, std::optional<Stage> stage) const -> LoadResult<MetadataRecord>
{
    return load_records_from(records_dir(), schema_id, stage);
}

auto load_records_from(fs::path const& dir, std::string_view schema_id, std::optional<Stage> stage)
    -> LoadResult<MetadataRecord>
{
    LoadResult<MetadataRecord> result;
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) {
        result.errors.push_back("records directory not found: " + dir.string());
        return result;
    }
    std::vector<fs::path> files;
    for (auto const& item : fs::directory_iterator(dir)) {
        if (item.is_regular_file() && item.path().extension() == ".json") {
            files.push_back(item.path());
        }
    }
    std::sort(files.begin(), files.end());
    std::size_t filtered = 0;
    for (auto const& file : files) {
        try {
            auto const json = nlohmann::ordered_json::parse(slurp(file));
            auto record = extraction::record_from_json(json);
            if (stage && record.stage != *stage) {
                continue;
            }
            if (!schema_id.empty() && record.schema_id != schema_id) {
                ++filtered;
                continue;
            }
            result.items.push_back(std::move(record));
        } catch (std::exception const& e) {
            result.errors.push_back(file.filename().string() + ": " + e.what());
            spdlog::warn("skipping record file {}: {}", file.string(), e.what());
        }
    }
    if (filtered > 0) {
        result.warnings.push_back(std::to_string(filtered) + " record(s) skipped: schema_id differs from '"
                                  + std::string(schema_id) + "'");
    }
    return result;
}

}  // namespace metaharvest::store
