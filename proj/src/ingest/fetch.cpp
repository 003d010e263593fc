#include "metaharvest/ingest/fetch.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "metaharvest/core/text.hpp"
#include "metaharvest/ingest/url.hpp"

namespace metaharvest::ingest {

auto to_string(FetchError::Kind kind) -> char const*
{
    switch (kind) {
    case FetchError::Kind::invalid_url: return "invalid_url";
    case FetchError::Kind::network: return "network";
    case FetchError::Kind::timeout: return "timeout";
    case FetchError::Kind::not_found: return "not_found";
    case FetchError::Kind::http_status: return "http_status";
    case FetchError::Kind::too_many_redirects: return "too_many_redirects";
    case FetchError::Kind::io: return "io";
    }
    return "unknown";
}

FetchError::FetchError(Kind kind, std::string url, std::string cause, int status)
    : Error(std::string("fetch ") + ingest::to_string(kind) + " for " + url + ": " + cause),
      kind_(kind),
      url_(std::move(url)),
      cause_(std::move(cause)),
      status_(status)
{
}

auto media_type_for_path(std::string const& path) -> std::string
{
    auto const ext = to_lower_ascii(std::filesystem::path(path).extension().string());
    if (ext == ".html" || ext == ".htm" || ext == ".xhtml") {
        return "text/html";
    }
    if (ext == ".xml") {
        return "application/xml";
    }
    if (ext == ".json") {
        return "application/json";
    }
    return "text/plain";
}

StaticFetcher::StaticFetcher(FetchOptions options) : options_(std::move(options)) {}

namespace {

auto strip_media_type(std::string const& content_type) -> std::string
{
    return to_lower_ascii(trim(std::string_view(content_type).substr(0, content_type.find(';'))));
}

auto read_local(std::string const& url, std::string const& path) -> FetchResult
{
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) {
        throw FetchError(FetchError::Kind::not_found, url, "no such file");
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FetchError(FetchError::Kind::io, url, "cannot open file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return FetchResult{ss.str(), media_type_for_path(path), url, 0};
}

}  // namespace

auto StaticFetcher::fetch(std::string const& url_text) -> FetchResult
{
    auto url = parse_url(url_text);
    if (!url) {
        throw FetchError(FetchError::Kind::invalid_url, url_text, "not an absolute http(s) or file URL");
    }
    if (url->scheme == "file") {
        return read_local(url_text, url->target);
    }

    int redirects = 0;
    while (true) {
        auto const current = url->to_string();
        httplib::Client client(url->origin());
        auto const secs = options_.timeout.count() / 1000;
        auto const usecs = (options_.timeout.count() % 1000) * 1000;
        client.set_connection_timeout(secs, usecs);
        client.set_read_timeout(secs, usecs);
        client.set_write_timeout(secs, usecs);
        client.set_follow_location(false);
        httplib::Headers headers{{"User-Agent", options_.user_agent}};

        ++network_requests_;
        auto const started = std::chrono::steady_clock::now();
        auto res = client.Get(url->target, headers);
        if (!res) {
            auto const elapsed = std::chrono::steady_clock::now() - started;
            auto const err = res.error();
            if (err == httplib::Error::ConnectionTimeout || elapsed >= options_.timeout) {
                throw FetchError(FetchError::Kind::timeout, current, httplib::to_string(err));
            }
            throw FetchError(FetchError::Kind::network, current, httplib::to_string(err));
        }
        auto const status = res->status;
        if (status >= 300 && status < 400 && res->has_header("Location")) {
            if (redirects >= options_.max_redirects) {
                throw FetchError(FetchError::Kind::too_many_redirects, url_text,
                                 "more than " + std::to_string(options_.max_redirects) + " redirects",
                                 status);
            }
            auto next = resolve_url(*url, res->get_header_value("Location"));
            if (!next || next->scheme == "file") {
                throw FetchError(FetchError::Kind::invalid_url, current,
                                 "bad redirect location: " + res->get_header_value("Location"), status);
            }
            url = std::move(next);
            ++redirects;
            continue;
        }
        if (status == 404 || status == 410) {
            throw FetchError(FetchError::Kind::not_found, current, "HTTP " + std::to_string(status), status);
        }
        if (status < 200 || status >= 300) {
            throw FetchError(FetchError::Kind::http_status, current, "HTTP " + std::to_string(status), status);
        }
        auto media_type = strip_media_type(res->get_header_value("Content-Type"));
        if (media_type.empty()) {
            media_type = media_type_for_path(url->target.substr(0, url->target.find('?')));
        }
        return FetchResult{std::move(res->body), std::move(media_type), current, redirects};
    }
}

}  // namespace metaharvest::ingest
