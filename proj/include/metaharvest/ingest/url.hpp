#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace metaharvest::ingest {

struct Url {
    std::string scheme;  ///< lowercase: http, https or file
    std::string host;
    int port = 0;
    std::string target;  ///< path plus query for http(s); filesystem path for file

    /// "scheme://host[:port]" for http(s).
    [[nodiscard]] auto origin() const -> std::string;
    [[nodiscard]] auto to_string() const -> std::string;
};

/// Parses an absolute http, https or file URL. Fragments are dropped.
[[nodiscard]] auto parse_url(std::string_view text) -> std::optional<Url>;

/// Resolves a redirect `location` against `base`.
[[nodiscard]] auto resolve_url(Url const& base, std::string_view location) -> std::optional<Url>;

}  // namespace metaharvest::ingest
