#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <string>

#include "metaharvest/core/error.hpp"

namespace metaharvest::ingest {

struct FetchResult {
    std::string body;
    std::string media_type;  ///< lowercase, without parameters
    std::string final_url;
    int redirects = 0;
};

class FetchError : public Error {
  public:
    enum class Kind { invalid_url, network, timeout, not_found, http_status, too_many_redirects, io };

    FetchError(Kind kind, std::string url, std::string cause, int status = 0);

    [[nodiscard]] auto kind() const noexcept -> Kind { return kind_; }
    [[nodiscard]] auto url() const -> std::string const& { return url_; }
    [[nodiscard]] auto cause() const -> std::string const& { return cause_; }
    [[nodiscard]] auto status() const noexcept -> int { return status_; }

  private:
    Kind kind_;
    std::string url_;
    std::string cause_;
    int status_;
};

[[nodiscard]] auto to_string(FetchError::Kind kind) -> char const*;

struct FetchOptions {
    std::chrono::milliseconds timeout{30'000};
    int max_redirects = 5;
    std::string user_agent = "metaharvest/0.1";
};

/// Turns a URL into page bytes. The default implementation performs a static
/// fetch; a renderer that executes scripts (a headless browser) can be plugged
/// in by implementing this interface.
class PageRenderer {
  public:
    virtual ~PageRenderer() = default;
    [[nodiscard]] virtual auto fetch(std::string const& url) -> FetchResult = 0;
};

/// Plain HTTP(S) GET with manual redirect following, plus file:// support.
class StaticFetcher final : public PageRenderer {
  public:
    explicit StaticFetcher(FetchOptions options = {});

    [[nodiscard]] auto fetch(std::string const& url) -> FetchResult override;

    /// Number of network requests issued (file:// reads excluded).
    [[nodiscard]] auto network_requests() const noexcept -> std::size_t { return network_requests_; }

  private:
    FetchOptions options_;
    std::atomic<std::size_t> network_requests_{0};
};

/// Media type guessed from a path's extension.
[[nodiscard]] auto media_type_for_path(std::string const& path) -> std::string;

}  // namespace metaharvest::ingest
