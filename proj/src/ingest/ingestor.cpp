#include "metaharvest/ingest/ingestor.hpp"

#include <spdlog/spdlog.h>

#include "metaharvest/core/error.hpp"
#include "metaharvest/core/hash.hpp"
#include "metaharvest/core/text.hpp"
#include "metaharvest/ingest/html_text.hpp"
#include "metaharvest/ingest/json_text.hpp"
#include "metaharvest/ingest/url.hpp"
#include "metaharvest/ingest/xml_text.hpp"
#include "metaharvest/store/store.hpp"

namespace metaharvest::ingest {

void validate(DatasetSource const& source)
{
    if (source.id.empty()) {
        throw Error("dataset source with empty id");
    }
    for (char c : source.id) {
        bool const ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-'
            || c == '_' || c == '.';
        if (!ok) {
            throw Error("dataset source id '" + source.id + "' must use only letters, digits, '-', '_' or '.'");
        }
    }
    if (!parse_url(source.landing_url)) {
        throw Error("dataset source '" + source.id + "': landing_url is not an absolute URL: " + source.landing_url);
    }
    if (source.metadata_file_url && !parse_url(*source.metadata_file_url)) {
        throw Error("dataset source '" + source.id
                    + "': metadata_file_url is not an absolute URL: " + *source.metadata_file_url);
    }
}

auto content_hash(std::string const& page_text, std::optional<std::string> const& structured_text) -> std::string
{
    std::string material = page_text;
    material.push_back('\0');
    if (structured_text) {
        material.push_back('1');
        material += *structured_text;
    } else {
        material.push_back('0');
    }
    return sha256_hex(material);
}

auto make_document(std::string source_id, std::string page_text, std::optional<std::string> structured_text,
                   std::string fetched_at) -> SourceDocument
{
    SourceDocument doc;
    doc.source_id = std::move(source_id);
    doc.content_hash = content_hash(page_text, structured_text);
    doc.page_text = std::move(page_text);
    doc.structured_text = std::move(structured_text);
    doc.fetched_at = std::move(fetched_at);
    return doc;
}

auto bytes_to_text(std::string const& body, std::string const& media_type) -> std::string
{
    if (media_type.find("html") != std::string::npos) {
        return extract_text(body);
    }
    if (media_type.find("xml") != std::string::npos) {
        try {
            return parse_structured_metadata(body);
        } catch (XmlParseError const& e) {
            spdlog::warn("{}; falling back to lenient HTML text extraction", e.what());
            return extract_text(body);
        }
    }
    if (media_type.find("json") != std::string::npos) {
        if (auto text = linearize_json(body)) {
            return *text;
        }
    }
    return sanitize_utf8(body);
}

Ingestor::Ingestor(PageRenderer& renderer, store::Store* cache, IngestOptions options)
    : renderer_(renderer), cache_(cache), options_(options)
{
}

auto Ingestor::fetch_cached(std::string const& url) -> Page
{
    auto const key = sha256_hex("page\n" + url);
    if (cache_ != nullptr) {
        if (auto entry = cache_->get(key, store::CacheKind::page)) {
            return {std::move(entry->payload), std::move(entry->media_type), std::move(entry->created_at)};
        }
    }
    auto result = renderer_.fetch(url);
    if (cache_ != nullptr) {
        cache_->put(key, result.body, store::CacheKind::page, result.media_type);
        auto entry = cache_->get(key, store::CacheKind::page);
        return {std::move(entry->payload), std::move(entry->media_type), std::move(entry->created_at)};
    }
    return {std::move(result.body), std::move(result.media_type),
            format_utc(std::chrono::system_clock::now())};
}

auto Ingestor::ingest(DatasetSource const& source) -> SourceDocument
{
    validate(source);
    auto page = fetch_cached(source.landing_url);
    auto page_text = bytes_to_text(page.body, page.media_type);
    if (trim(page_text).empty()) {
        throw Error("landing page of '" + source.id + "' yielded no text: " + source.landing_url);
    }
    bool truncated = false;
    if (utf8_length(page_text) > options_.max_page_chars) {
        spdlog::warn("page text of '{}' truncated to {} characters", source.id, options_.max_page_chars);
        page_text = std::string(utf8_prefix(page_text, options_.max_page_chars));
        truncated = true;
    }
    std::optional<std::string> structured;
    if (source.metadata_file_url) {
        auto file = fetch_cached(*source.metadata_file_url);
        auto const& type = file.media_type.empty() || file.media_type == "text/plain" ? std::string("application/xml")
                                                                                       : file.media_type;
        if (type.find("xml") != std::string::npos) {
            structured = parse_structured_metadata(file.body);
        } else {
            structured = bytes_to_text(file.body, type);
        }
    }
    auto doc = make_document(source.id, std::move(page_text), std::move(structured), std::move(page.fetched_at));
    doc.truncated = truncated;
    return doc;
}

}  // namespace metaharvest::ingest
