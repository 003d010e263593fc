#include "metaharvest/ingest/url.hpp"

#include <charconv>

#include "metaharvest/core/text.hpp"

namespace metaharvest::ingest {

auto Url::origin() const -> std::string
{
    bool const default_port = (scheme == "http" && port == 80) || (scheme == "https" && port == 443);
    return scheme + "://" + host + (default_port ? "" : ":" + std::to_string(port));
}

auto Url::to_string() const -> std::string
{
    if (scheme == "file") {
        return "file://" + target;
    }
    return origin() + target;
}

auto parse_url(std::string_view text) -> std::optional<Url>
{
    text = trim(text);
    auto const sep = text.find("://");
    if (sep == std::string_view::npos || sep == 0) {
        return std::nullopt;
    }
    Url url;
    url.scheme = to_lower_ascii(text.substr(0, sep));
    auto rest = text.substr(sep + 3);
    if (auto const hash = rest.find('#'); hash != std::string_view::npos) {
        rest = rest.substr(0, hash);
    }
    if (url.scheme == "file") {
        // file:///abs/path or file://localhost/abs/path
        if (rest.starts_with("localhost/")) {
            rest.remove_prefix(9);
        }
        if (!rest.starts_with('/')) {
            return std::nullopt;
        }
        url.target = std::string(rest);
        return url;
    }
    if (url.scheme != "http" && url.scheme != "https") {
        return std::nullopt;
    }
    auto const path_start = rest.find_first_of("/?");
    auto authority = rest.substr(0, path_start);
    url.target = path_start == std::string_view::npos ? "/" : std::string(rest.substr(path_start));
    if (url.target.starts_with('?')) {
        url.target.insert(url.target.begin(), '/');
    }
    if (auto const at = authority.rfind('@'); at != std::string_view::npos) {
        authority = authority.substr(at + 1);
    }
    url.port = url.scheme == "https" ? 443 : 80;
    std::string_view host = authority;
    if (authority.starts_with('[')) {
        auto const close = authority.find(']');
        if (close == std::string_view::npos) {
            return std::nullopt;
        }
        host = authority.substr(0, close + 1);
        authority = authority.substr(close + 1);
        if (!authority.empty() && !authority.starts_with(':')) {
            return std::nullopt;
        }
        if (authority.starts_with(':')) {
            authority.remove_prefix(1);
        } else {
            authority = {};
        }
    } else if (auto const colon = authority.rfind(':'); colon != std::string_view::npos) {
        host = authority.substr(0, colon);
        authority = authority.substr(colon + 1);
    } else {
        authority = {};
    }
    if (!authority.empty()) {
        int port = 0;
        auto const [ptr, ec] = std::from_chars(authority.data(), authority.data() + authority.size(), port);
        if (ec != std::errc{} || ptr != authority.data() + authority.size() || port <= 0 || port > 65535) {
            return std::nullopt;
        }
        url.port = port;
    }
    if (host.empty()) {
        return std::nullopt;
    }
    for (char c : host) {
        if (is_space(c) || c == '/' || c == '\\') {
            return std::nullopt;
        }
    }
    url.host = to_lower_ascii(host);
    return url;
}

auto resolve_url(Url const& base, std::string_view location) -> std::optional<Url>
{
    location = trim(location);
    if (location.find("://") != std::string_view::npos) {
        return parse_url(location);
    }
    if (location.starts_with("//")) {
        return parse_url(base.scheme + ":" + std::string(location));
    }
    Url url = base;
    if (location.starts_with('/')) {
        url.target = std::string(location);
    } else {
        auto dir = base.target.substr(0, base.target.find('?'));
        dir = dir.substr(0, dir.rfind('/') + 1);
        url.target = dir + std::string(location);
    }
    return url;
}

}  // namespace metaharvest::ingest
