#include "metaharvest/llm/caching.hpp"

#include <nlohmann/json.hpp>

#include "metaharvest/core/hash.hpp"
#include "metaharvest/core/text.hpp"
#include "metaharvest/store/store.hpp"

namespace metaharvest::llm {

CachingChatModel::CachingChatModel(ChatModel& inner, store::Store& store) : inner_(inner), store_(store) {}

auto CachingChatModel::complete(ChatRequest const& request) -> Completion
{
    request.validate();
    auto const key = cache_key(inner_.endpoint(), request);
    if (auto entry = store_.get(key, store::CacheKind::llm)) {
        ++hits_;
        return {std::move(entry->payload), std::move(entry->created_at)};
    }
    ++misses_;
    auto completion = inner_.complete(request);
    store_.put(key, completion.text, store::CacheKind::llm);
    auto entry = store_.get(key, store::CacheKind::llm);
    return {std::move(entry->payload), std::move(entry->created_at)};
}

CachingEmbedder::CachingEmbedder(Embedder& inner, store::Store& store) : inner_(inner), store_(store) {}

auto CachingEmbedder::embed(std::string_view text) -> EmbeddingVector
{
    if (trim(text).empty()) {
        throw LlmError(LlmError::Kind::precondition, "cannot embed empty text");
    }
    auto const key = sha256_hex("embedding\n" + inner_.endpoint() + "\n" + inner_.model() + "\n" + std::string(text));
    if (auto entry = store_.get(key, store::CacheKind::embedding)) {
        auto const json = nlohmann::json::parse(entry->payload, nullptr, false);
        if (json.is_object() && json.contains("values")) {
            ++hits_;
            return {json["values"].get<std::vector<double>>(), json.value("model", inner_.model())};
        }
    }
    ++misses_;
    auto vec = inner_.embed(text);
    nlohmann::ordered_json payload = {{"model", vec.model}, {"values", vec.values}};
    auto const text_payload = payload.dump();
    store_.put(key, text_payload, store::CacheKind::embedding);
    // hand back the stored form so cold and warm runs see the same bits
    auto const stored = nlohmann::json::parse(text_payload);
    return {stored["values"].get<std::vector<double>>(), vec.model};
}

}  // namespace metaharvest::llm
