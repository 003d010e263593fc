#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "metaharvest/core/error.hpp"

namespace metaharvest::llm {

enum class Role { system, user };

[[nodiscard]] auto to_string(Role role) -> char const*;

struct Message {
    Role role = Role::user;
    std::string text;

    auto operator==(Message const&) const -> bool = default;
};

struct ChatRequest {
    std::string model;
    std::vector<Message> messages;
    double temperature = 0.0;
    int max_tokens = 4096;

    /// Throws LlmError(precondition) unless there is at least one message,
    /// temperature >= 0 and max_tokens > 0.
    void validate() const;

    auto operator==(ChatRequest const&) const -> bool = default;
};

/// Messages as a JSON array of {"role","content"} objects; the canonical prompt text.
[[nodiscard]] auto messages_json(ChatRequest const& request) -> std::string;

/// Digest of the message list; identifies a prompt independently of model settings.
[[nodiscard]] auto prompt_hash(ChatRequest const& request) -> std::string;

/// Digest of (endpoint, model, messages, temperature).
[[nodiscard]] auto cache_key(std::string_view endpoint, ChatRequest const& request) -> std::string;

struct Completion {
    std::string text;
    std::string created_at;  ///< when the response was first produced
};

struct EmbeddingVector {
    std::vector<double> values;
    std::string model;

    auto operator==(EmbeddingVector const&) const -> bool = default;
};

class LlmError : public Error {
  public:
    enum class Kind { auth, rate_limit, transient, malformed, precondition, config };

    LlmError(Kind kind, std::string const& what);

    [[nodiscard]] auto kind() const noexcept -> Kind { return kind_; }
    [[nodiscard]] auto retryable() const noexcept -> bool
    {
        return kind_ == Kind::rate_limit || kind_ == Kind::transient;
    }

  private:
    Kind kind_;
};

[[nodiscard]] auto to_string(LlmError::Kind kind) -> char const*;

class ChatModel {
  public:
    virtual ~ChatModel() = default;
    [[nodiscard]] virtual auto complete(ChatRequest const& request) -> Completion = 0;
    /// Identifies where requests go; part of the cache key.
    [[nodiscard]] virtual auto endpoint() const -> std::string = 0;
};

class Embedder {
  public:
    virtual ~Embedder() = default;
    /// Deterministic per (model, text). Throws LlmError(precondition) on empty text.
    [[nodiscard]] virtual auto embed(std::string_view text) -> EmbeddingVector = 0;
    [[nodiscard]] virtual auto model() const -> std::string = 0;
    [[nodiscard]] virtual auto endpoint() const -> std::string = 0;
};

struct RetryPolicy {
    int max_retries = 3;
    std::chrono::milliseconds initial_backoff{500};
    double multiplier = 2.0;
    /// Sleep hook; defaults to std::this_thread::sleep_for.
    std::function<void(std::chrono::milliseconds)> sleep;
};

/// Runs `attempt` until it succeeds, retrying retryable LlmErrors with
/// exponential backoff. Non-retryable errors propagate immediately.
template <typename F>
auto with_retries(RetryPolicy const& policy, F&& attempt) -> decltype(attempt(0));

struct GatewayConfig {
    std::string base_url;
    std::string api_key;
    std::string model;
    std::string embed_model;
    std::chrono::milliseconds timeout{120'000};
    RetryPolicy retry;
    double requests_per_minute = 0;  ///< 0 disables rate limiting
};

/// Reads METAHARVEST_LLM_BASE_URL, METAHARVEST_LLM_API_KEY,
/// METAHARVEST_LLM_MODEL and METAHARVEST_EMBED_MODEL on top of `base`.
[[nodiscard]] auto apply_environment(GatewayConfig base) -> GatewayConfig;

}  // namespace metaharvest::llm

#include "metaharvest/llm/retry_impl.hpp"
