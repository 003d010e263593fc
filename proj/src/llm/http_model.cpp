#include "metaharvest/llm/http_model.hpp"

#include <cmath>

#include <httplib.h>
#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaharvest/core/text.hpp"
#include "metaharvest/ingest/url.hpp"

namespace metaharvest::llm {

namespace {

auto strip_trailing_slash(std::string url) -> std::string
{
    while (!url.empty() && url.back() == '/') {
        url.pop_back();
    }
    return url;
}

auto auth_headers(GatewayConfig const& config) -> HeaderList
{
    return {{"Authorization", "Bearer " + config.api_key}, {"Accept", "application/json"}};
}

void require_credentials(GatewayConfig const& config)
{
    if (config.base_url.empty()) {
        throw LlmError(LlmError::Kind::config, "no LLM base URL configured (METAHARVEST_LLM_BASE_URL)");
    }
    if (config.api_key.empty()) {
        throw LlmError(LlmError::Kind::auth, "no API key configured (METAHARVEST_LLM_API_KEY)");
    }
}

auto excerpt(std::string const& body) -> std::string
{
    return collapse_whitespace(utf8_prefix(sanitize_utf8(body), 200));
}

}  // namespace

HttplibTransport::HttplibTransport(std::chrono::milliseconds timeout) : timeout_(timeout) {}

auto HttplibTransport::post(std::string const& url_text, std::string const& body, HeaderList const& headers)
    -> HttpReply
{
    auto const url = ingest::parse_url(url_text);
    if (!url || url->scheme == "file") {
        throw LlmError(LlmError::Kind::config, "invalid endpoint URL: " + url_text);
    }
    httplib::Client client(url->origin());
    auto const secs = timeout_.count() / 1000;
    auto const usecs = (timeout_.count() % 1000) * 1000;
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);
    httplib::Headers h;
    for (auto const& [name, value] : headers) {
        h.emplace(name, value);
    }
    auto res = client.Post(url->target, h, body, "application/json");
    if (!res) {
        throw LlmError(LlmError::Kind::transient, url_text + ": " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
}

auto error_for_status(int status, std::string const& body) -> LlmError
{
    auto const detail = "HTTP " + std::to_string(status) + ": " + excerpt(body);
    if (status == 401 || status == 403) {
        return {LlmError::Kind::auth, detail};
    }
    if (status == 429) {
        return {LlmError::Kind::rate_limit, detail};
    }
    if (status >= 500 || status == 408) {
        return {LlmError::Kind::transient, detail};
    }
    return {LlmError::Kind::malformed, detail};
}

HttpChatModel::HttpChatModel(GatewayConfig config, std::shared_ptr<HttpTransport> transport,
                             std::shared_ptr<TokenBucket> limiter)
    : config_(std::move(config)), transport_(std::move(transport)), limiter_(std::move(limiter))
{
}

auto HttpChatModel::endpoint() const -> std::string
{
    return strip_trailing_slash(config_.base_url) + "/chat/completions";
}

auto HttpChatModel::complete(ChatRequest const& request) -> Completion
{
    request.validate();
    require_credentials(config_);
    auto const model = request.model.empty() ? config_.model : request.model;
    nlohmann::ordered_json payload = {
        {"model", model},
        {"messages", nlohmann::ordered_json::parse(messages_json(request))},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };
    auto const body = payload.dump();
    auto const url = endpoint();
    auto const hash = prompt_hash(request);
    spdlog::info("llm complete: model={} request={}", model, hash.substr(0, 16));

    return with_retries(config_.retry, [&](int attempt) {
        if (limiter_) {
            limiter_->acquire();
        }
        ++http_requests_;
        spdlog::debug("llm complete attempt {} request={}", attempt + 1, hash.substr(0, 16));
        auto const reply = transport_->post(url, body, auth_headers(config_));
        if (reply.status < 200 || reply.status >= 300) {
            throw error_for_status(reply.status, reply.body);
        }
        auto const json = nlohmann::json::parse(reply.body, nullptr, false);
        if (json.is_discarded() || !json.contains("choices") || !json["choices"].is_array()
            || json["choices"].empty()) {
            throw LlmError(LlmError::Kind::malformed, "response without choices: " + excerpt(reply.body));
        }
        auto const& message = json["choices"][0].value("message", nlohmann::json::object());
        if (!message.contains("content") || !message["content"].is_string()) {
            throw LlmError(LlmError::Kind::malformed, "response without message content: " + excerpt(reply.body));
        }
        return Completion{message["content"].get<std::string>(), format_utc(std::chrono::system_clock::now())};
    });
}

HttpEmbedder::HttpEmbedder(GatewayConfig config, std::shared_ptr<HttpTransport> transport,
                           std::shared_ptr<TokenBucket> limiter)
    : config_(std::move(config)), transport_(std::move(transport)), limiter_(std::move(limiter))
{
}

auto HttpEmbedder::endpoint() const -> std::string
{
    return strip_trailing_slash(config_.base_url) + "/embeddings";
}

auto HttpEmbedder::embed(std::string_view text) -> EmbeddingVector
{
    if (trim(text).empty()) {
        throw LlmError(LlmError::Kind::precondition, "cannot embed empty text");
    }
    require_credentials(config_);
    nlohmann::ordered_json payload = {{"model", config_.embed_model}, {"input", std::string(text)}};
    auto const body = payload.dump();
    auto const url = endpoint();
    return with_retries(config_.retry, [&](int) {
        if (limiter_) {
            limiter_->acquire();
        }
        ++http_requests_;
        auto const reply = transport_->post(url, body, auth_headers(config_));
        if (reply.status < 200 || reply.status >= 300) {
            throw error_for_status(reply.status, reply.body);
        }
        auto const json = nlohmann::json::parse(reply.body, nullptr, false);
        if (json.is_discarded() || !json.contains("data") || !json["data"].is_array() || json["data"].empty()
            || !json["data"][0].contains("embedding") || !json["data"][0]["embedding"].is_array()) {
            throw LlmError(LlmError::Kind::malformed, "embedding response without data: " + excerpt(reply.body));
        }
        EmbeddingVector vec;
        vec.model = config_.embed_model;
        for (auto const& v : json["data"][0]["embedding"]) {
            if (!v.is_number() || !std::isfinite(v.get<double>())) {
                throw LlmError(LlmError::Kind::malformed, "non-numeric embedding value");
            }
            vec.values.push_back(v.get<double>());
        }
        if (vec.values.empty()) {
            throw LlmError(LlmError::Kind::malformed, "empty embedding");
        }
        return vec;
    });
}

}  // namespace metaharvest::llm
