#pragma once

#include <atomic>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "metaharvest/llm/gateway.hpp"
#include "metaharvest/llm/rate_limiter.hpp"

namespace metaharvest::llm {

struct HttpReply {
    int status = 0;
    std::string body;
};

using HeaderList = std::vector<std::pair<std::string, std::string>>;

/// POSTs JSON. Connection-level failures throw LlmError(transient).
class HttpTransport {
  public:
    virtual ~HttpTransport() = default;
    [[nodiscard]] virtual auto post(std::string const& url, std::string const& body, HeaderList const& headers)
        -> HttpReply = 0;
};

class HttplibTransport final : public HttpTransport {
  public:
    explicit HttplibTransport(std::chrono::milliseconds timeout);
    [[nodiscard]] auto post(std::string const& url, std::string const& body, HeaderList const& headers)
        -> HttpReply override;

  private:
    std::chrono::milliseconds timeout_;
};

/// Maps a non-2xx HTTP status to the gateway error taxonomy:
/// 401/403 auth, 429 rate limit, 5xx and 408 transient, other 4xx malformed.
[[nodiscard]] auto error_for_status(int status, std::string const& body) -> LlmError;

/// Chat-completion client for an OpenAI-compatible endpoint
/// (`POST <base_url>/chat/completions`, bearer token).
class HttpChatModel final : public ChatModel {
  public:
    HttpChatModel(GatewayConfig config, std::shared_ptr<HttpTransport> transport,
                  std::shared_ptr<TokenBucket> limiter = nullptr);

    [[nodiscard]] auto complete(ChatRequest const& request) -> Completion override;
    [[nodiscard]] auto endpoint() const -> std::string override;

    [[nodiscard]] auto http_requests() const noexcept -> std::size_t { return http_requests_; }

  private:
    GatewayConfig config_;
    std::shared_ptr<HttpTransport> transport_;
    std::shared_ptr<TokenBucket> limiter_;
    std::atomic<std::size_t> http_requests_{0};
};

/// Embedding client for `POST <base_url>/embeddings`.
class HttpEmbedder final : public Embedder {
  public:
    HttpEmbedder(GatewayConfig config, std::shared_ptr<HttpTransport> transport,
                 std::shared_ptr<TokenBucket> limiter = nullptr);

    [[nodiscard]] auto embed(std::string_view text) -> EmbeddingVector override;
    [[nodiscard]] auto model() const -> std::string override { return config_.embed_model; }
    [[nodiscard]] auto endpoint() const -> std::string override;

    [[nodiscard]] auto http_requests() const noexcept -> std::size_t { return http_requests_; }

  private:
    GatewayConfig config_;
    std::shared_ptr<HttpTransport> transport_;
    std::shared_ptr<TokenBucket> limiter_;
    std::atomic<std::size_t> http_requests_{0};
};

}  // namespace metaharvest::llm
