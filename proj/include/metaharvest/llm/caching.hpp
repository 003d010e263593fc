#pragma once

#include <atomic>
#include <cstddef>

#include "metaharvest/llm/gateway.hpp"

namespace metaharvest::store {
class Store;
}

namespace metaharvest::llm {

/// Serves completions from the store when present; otherwise calls through and
/// records the response. The returned created_at is the stored one, so warm
/// re-runs reproduce provenance timestamps exactly.
class CachingChatModel final : public ChatModel {
  public:
    CachingChatModel(ChatModel& inner, store::Store& store);

    [[nodiscard]] auto complete(ChatRequest const& request) -> Completion override;
    [[nodiscard]] auto endpoint() const -> std::string override { return inner_.endpoint(); }

    [[nodiscard]] auto hits() const noexcept -> std::size_t { return hits_; }
    [[nodiscard]] auto misses() const noexcept -> std::size_t { return misses_; }

  private:
    ChatModel& inner_;
    store::Store& store_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

class CachingEmbedder final : public Embedder {
  public:
    CachingEmbedder(Embedder& inner, store::Store& store);

    [[nodiscard]] auto embed(std::string_view text) -> EmbeddingVector override;
    [[nodiscard]] auto model() const -> std::string override { return inner_.model(); }
    [[nodiscard]] auto endpoint() const -> std::string override { return inner_.endpoint(); }

    [[nodiscard]] auto hits() const noexcept -> std::size_t { return hits_; }
    [[nodiscard]] auto misses() const noexcept -> std::size_t { return misses_; }

  private:
    Embedder& inner_;
    store::Store& store_;
    std::atomic<std::size_t> hits_{0};
    std::atomic<std::size_t> misses_{0};
};

}  // namespace metaharvest::llm
