#include "metaharvest/cli/manifest.hpp"

#include <set>

#include <nlohmann/json.hpp>

#include "metaharvest/core/error.hpp"
#include "metaharvest/core/text.hpp"

namespace metaharvest::cli {

namespace {

using nlohmann::json;

auto required_string(json const& obj, char const* key, std::string const& where) -> std::string
{
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw Error(where + ": \"" + key + "\" must be a string");
    }
    return obj[key].get<std::string>();
}

auto optional_string(json const& obj, char const* key, std::string const& where) -> std::optional<std::string>
{
    if (!obj.contains(key) || obj[key].is_null()) {
        return std::nullopt;
    }
    if (!obj[key].is_string()) {
        throw Error(where + ": \"" + key + "\" must be a string");
    }
    return obj[key].get<std::string>();
}

auto optional_number(json const& obj, char const* key, std::string const& where) -> std::optional<double>
{
    if (!obj.contains(key) || obj[key].is_null()) {
        return std::nullopt;
    }
    if (!obj[key].is_number()) {
        throw Error(where + ": \"" + key + "\" must be a number");
    }
    return obj[key].get<double>();
}

auto resolve_location(std::string const& url, std::filesystem::path const& base_dir) -> std::string
{
    if (url.find("://") != std::string::npos || url.empty()) {
        return url;
    }
    auto path = std::filesystem::path(url);
    if (path.is_relative()) {
        path = base_dir / path;
    }
    return "file://" + std::filesystem::absolute(path).lexically_normal().string();
}

}  // namespace

auto parse_manifest(std::string_view json_text, std::filesystem::path const& base_dir) -> CorpusManifest
{
    json doc;
    try {
        doc = json::parse(json_text);
    }
    catch (json::parse_error const& e) {
        throw Error(std::string("manifest is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error("manifest must be a JSON object");
    }
    CorpusManifest manifest;
    manifest.corpus_id = required_string(doc, "corpus_id", "manifest");
    manifest.schema_id = optional_string(doc, "schema_id", "manifest").value_or("");
    if (!doc.contains("sources") || !doc["sources"].is_array()) {
        throw Error("manifest: \"sources\" must be an array");
    }
    if (doc["sources"].empty()) {
        throw Error("manifest: \"sources\" is empty");
    }
    std::set<std::string> ids;
    for (auto const& item : doc["sources"]) {
        if (!item.is_object()) {
            throw Error("manifest: every source must be an object");
        }
        ingest::DatasetSource source;
        source.id = required_string(item, "id", "source");
        std::string const where = "source " + source.id;
        source.landing_url = resolve_location(required_string(item, "landing_url", where), base_dir);
        if (auto file = optional_string(item, "metadata_file_url", where)) {
            source.metadata_file_url = resolve_location(*file, base_dir);
        }
        source.provider = optional_string(item, "provider", where).value_or("");
        ingest::validate(source);
        if (!ids.insert(source.id).second) {
            throw Error("manifest: duplicate source id \"" + source.id + "\"");
        }
        manifest.sources.push_back(std::move(source));
    }
    if (doc.contains("llm")) {
        auto const& llm = doc["llm"];
        if (!llm.is_object()) {
            throw Error("manifest: \"llm\" must be an object");
        }
        manifest.llm.base_url = optional_string(llm, "base_url", "llm");
        manifest.llm.model = optional_string(llm, "model", "llm");
        manifest.llm.embed_model = optional_string(llm, "embed_model", "llm");
        manifest.llm.temperature = optional_number(llm, "temperature", "llm");
        manifest.llm.requests_per_minute = optional_number(llm, "requests_per_minute", "llm");
        if (manifest.llm.temperature && *manifest.llm.temperature < 0) {
            throw Error("llm: temperature must be >= 0");
        }
    }
    return manifest;
}

auto load_manifest(std::filesystem::path const& path) -> CorpusManifest
{
    return parse_manifest(read_file(path.string()), path.parent_path());
}

}  // namespace metaharvest::cli
