#include "metaharvest/llm/mock.hpp"

#include <cmath>
#include <cstdint>

#include <nlohmann/json.hpp>

#include "metaharvest/core/hash.hpp"
#include "metaharvest/core/text.hpp"

namespace metaharvest::llm {

MockChatModel::MockChatModel(Responder fallback) : fallback_(std::move(fallback)) {}

void MockChatModel::add_response(std::string const& prompt_hash, std::string text)
{
    std::lock_guard lock(mutex_);
    table_[prompt_hash] = std::move(text);
}

void MockChatModel::load_table(std::string const& json_text)
{
    auto const json = nlohmann::json::parse(json_text, nullptr, false);
    if (!json.is_object()) {
        throw LlmError(LlmError::Kind::config, "mock response table must be a JSON object");
    }
    for (auto const& [key, value] : json.items()) {
        if (!value.is_string()) {
            throw LlmError(LlmError::Kind::config, "mock response for " + key + " is not a string");
        }
        add_response(key, value.get<std::string>());
    }
}

auto MockChatModel::complete(ChatRequest const& request) -> Completion
{
    request.validate();
    ++calls_;
    auto const hash = prompt_hash(request);
    {
        std::lock_guard lock(mutex_);
        if (auto it = table_.find(hash); it != table_.end()) {
            return {it->second, format_utc(std::chrono::system_clock::now())};
        }
    }
    if (fallback_) {
        return {fallback_(request), format_utc(std::chrono::system_clock::now())};
    }
    throw LlmError(LlmError::Kind::malformed, "mock has no response for prompt " + hash);
}

MockEmbedder::MockEmbedder(std::size_t dimensions, std::string model)
    : dimensions_(dimensions), model_(std::move(model))
{
}

auto MockEmbedder::embed(std::string_view text) -> EmbeddingVector
{
    if (trim(text).empty()) {
        throw LlmError(LlmError::Kind::precondition, "cannot embed empty text");
    }
    ++calls_;
    EmbeddingVector vec;
    vec.model = model_;
    vec.values.reserve(dimensions_);
    // SHA-256 in counter mode; each 8 hex digits give one coordinate in [-1, 1].
    std::string const seed = model_ + "\n" + std::string(text) + "\n";
    for (std::size_t block = 0; vec.values.size() < dimensions_; ++block) {
        auto const digest = sha256_hex(seed + std::to_string(block));
        for (std::size_t i = 0; i + 8 <= digest.size() && vec.values.size() < dimensions_; i += 8) {
            auto const word = static_cast<std::uint32_t>(std::stoul(digest.substr(i, 8), nullptr, 16));
            vec.values.push_back(static_cast<double>(word) / 2147483647.5 - 1.0);
        }
    }
    double norm = 0;
    for (double v : vec.values) {
        norm += v * v;
    }
    norm = std::sqrt(norm);
    for (double& v : vec.values) {
        v /= norm;
    }
    return vec;
}

}  // namespace metaharvest::llm
