#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <string>

#include "metaharvest/llm/gateway.hpp"

namespace metaharvest::llm {

/// Deterministic chat model for offline runs and tests. Answers from a table
/// keyed by prompt_hash(); prompts missing from the table go to the fallback
/// responder, and without one the call fails with LlmError(malformed).
class MockChatModel final : public ChatModel {
  public:
    using Responder = std::function<std::string(ChatRequest const&)>;

    explicit MockChatModel(Responder fallback = {});

    void add_response(std::string const& prompt_hash, std::string text);

    /// Adds every member of a JSON object {"<prompt hash>": "<response>"}.
    void load_table(std::string const& json_text);

    [[nodiscard]] auto complete(ChatRequest const& request) -> Completion override;
    [[nodiscard]] auto endpoint() const -> std::string override { return "mock://chat"; }

    [[nodiscard]] auto calls() const noexcept -> std::size_t { return calls_; }

  private:
    Responder fallback_;
    std::map<std::string, std::string> table_;
    mutable std::mutex mutex_;
    std::atomic<std::size_t> calls_{0};
};

/// Hash-derived unit vectors: identical texts map to identical vectors and
/// distinct texts to (almost surely) distinct, near-orthogonal ones.
class MockEmbedder final : public Embedder {
  public:
    explicit MockEmbedder(std::size_t dimensions = 64, std::string model = "mock-hash-embedding");

    [[nodiscard]] auto embed(std::string_view text) -> EmbeddingVector override;
    [[nodiscard]] auto model() const -> std::string override { return model_; }
    [[nodiscard]] auto endpoint() const -> std::string override { return "mock://embeddings"; }

    [[nodiscard]] auto calls() const noexcept -> std::size_t { return calls_; }

  private:
    std::size_t dimensions_;
    std::string model_;
    std::atomic<std::size_t> calls_{0};
};

}  // namespace metaharvest::llm
