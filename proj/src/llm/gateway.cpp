#include "metaharvest/llm/gateway.hpp"

#include <cstdio>
#include <cstdlib>

#include <nlohmann/json.hpp>

#include "metaharvest/core/hash.hpp"

namespace metaharvest::llm {

auto to_string(Role role) -> char const*
{
    return role == Role::system ? "system" : "user";
}

auto to_string(LlmError::Kind kind) -> char const*
{
    switch (kind) {
    case LlmError::Kind::auth: return "auth";
    case LlmError::Kind::rate_limit: return "rate_limit";
    case LlmError::Kind::transient: return "transient";
    case LlmError::Kind::malformed: return "malformed";
    case LlmError::Kind::precondition: return "precondition";
    case LlmError::Kind::config: return "config";
    }
    return "unknown";
}

LlmError::LlmError(Kind kind, std::string const& what)
    : Error(std::string("llm ") + llm::to_string(kind) + " error: " + what), kind_(kind)
{
}

void ChatRequest::validate() const
{
    if (messages.empty()) {
        throw LlmError(LlmError::Kind::precondition, "chat request without messages");
    }
    if (!(temperature >= 0.0)) {
        throw LlmError(LlmError::Kind::precondition, "temperature must be >= 0");
    }
    if (max_tokens <= 0) {
        throw LlmError(LlmError::Kind::precondition, "max_tokens must be positive");
    }
}

auto messages_json(ChatRequest const& request) -> std::string
{
    nlohmann::ordered_json messages = nlohmann::ordered_json::array();
    for (auto const& m : request.messages) {
        messages.push_back({{"role", to_string(m.role)}, {"content", m.text}});
    }
    return messages.dump();
}

auto prompt_hash(ChatRequest const& request) -> std::string
{
    return sha256_hex(messages_json(request));
}

auto cache_key(std::string_view endpoint, ChatRequest const& request) -> std::string
{
    char temperature[32];
    std::snprintf(temperature, sizeof temperature, "%.17g", request.temperature);
    std::string material = "chat\n";
    material.append(endpoint);
    material += "\n" + request.model + "\n" + messages_json(request) + "\n" + temperature;
    return sha256_hex(material);
}

auto apply_environment(GatewayConfig base) -> GatewayConfig
{
    auto read = [](char const* name, std::string& target) {
        if (char const* value = std::getenv(name); value != nullptr && *value != '\0') {
            target = value;
        }
    };
    read("METAHARVEST_LLM_BASE_URL", base.base_url);
    read("METAHARVEST_LLM_API_KEY", base.api_key);
    read("METAHARVEST_LLM_MODEL", base.model);
    read("METAHARVEST_EMBED_MODEL", base.embed_model);
    return base;
}

}  // namespace metaharvest::llm
