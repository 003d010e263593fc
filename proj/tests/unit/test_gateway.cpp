#include <doctest.h>

#include <cmath>
#include <deque>
#include <set>

#include "metaharvest/llm/caching.hpp"
#include "metaharvest/llm/http_model.hpp"
#include "metaharvest/llm/mock.hpp"
#include "metaharvest/linking/link_matrix.hpp"
#include "metaharvest/store/store.hpp"
#include "support/temp_dir.hpp"

using namespace metaharvest;
using namespace metaharvest::llm;

namespace {

auto request(std::string text) -> ChatRequest
{
    ChatRequest r;
    r.model = "m";
    r.messages = {{Role::system, "role"}, {Role::user, std::move(text)}};
    return r;
}

class ScriptedTransport final : public HttpTransport {
  public:
    explicit ScriptedTransport(std::deque<HttpReply> replies) : replies_(std::move(replies)) {}

    auto post(std::string const& url, std::string const& body, HeaderList const& headers) -> HttpReply override
    {
        urls.push_back(url);
        bodies.push_back(body);
        last_headers = headers;
        if (replies_.empty()) {
            return {500, "exhausted"};
        }
        auto reply = replies_.front();
        replies_.pop_front();
        return reply;
    }

    std::vector<std::string> urls;
    std::vector<std::string> bodies;
    HeaderList last_headers;

  private:
    std::deque<HttpReply> replies_;
};

auto chat_body(std::string const& content) -> std::string
{
    return nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", content}}}}}}}.dump();
}

auto config() -> GatewayConfig
{
    GatewayConfig c;
    c.base_url = "http://llm.invalid/v1/";
    c.api_key = "secret";
    c.model = "m";
    c.embed_model = "e";
    c.retry.initial_backoff = std::chrono::milliseconds(100);
    return c;
}

}  // namespace

TEST_CASE("prompt hash ignores model settings, cache key does not")
{
    auto a = request("x");
    auto b = a;
    b.temperature = 0.5;
    b.model = "other";
    CHECK(prompt_hash(a) == prompt_hash(b));
    CHECK(cache_key("e1", a) != cache_key("e1", b));
    CHECK(cache_key("e1", a) != cache_key("e2", a));
    CHECK(prompt_hash(a) != prompt_hash(request("y")));
}

TEST_CASE("request validation")
{
    ChatRequest empty;
    CHECK_THROWS_AS(empty.validate(), LlmError);
    auto r = request("x");
    r.temperature = -1;
    CHECK_THROWS_AS(r.validate(), LlmError);
    r.temperature = 0;
    r.max_tokens = 0;
    CHECK_THROWS_AS(r.validate(), LlmError);
}

TEST_CASE("mock chat model answers from its table")
{
    MockChatModel mock;
    auto const r = request("hello");
    mock.add_response(prompt_hash(r), "canned");
    CHECK(mock.complete(r).text == "canned");
    try {
        (void)mock.complete(request("unknown"));
        FAIL("expected an error");
    } catch (LlmError const& e) {
        CHECK(e.kind() == LlmError::Kind::malformed);
    }
    MockChatModel with_fallback([](ChatRequest const& req) { return "echo:" + req.messages.back().text; });
    CHECK(with_fallback.complete(request("q")).text == "echo:q");

    MockChatModel loaded;
    loaded.load_table(nlohmann::json{{prompt_hash(r), "from table"}}.dump());
    CHECK(loaded.complete(r).text == "from table");
    CHECK_THROWS_AS(loaded.load_table("[1]"), LlmError);
}

TEST_CASE("mock embedder is deterministic and unit length")
{
    MockEmbedder embedder;
    auto const a = embedder.embed("dataset");
    CHECK(a == embedder.embed("dataset"));
    CHECK(a.values.size() == 64);
    double norm = 0;
    for (double v : a.values) {
        norm += v * v;
    }
    CHECK(std::sqrt(norm) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS((void)embedder.embed(""), LlmError);

    std::set<std::vector<double>> seen;
    for (int i = 0; i < 100; ++i) {
        seen.insert(embedder.embed("text " + std::to_string(i)).values);
    }
    CHECK(seen.size() == 100);
    CHECK(std::abs(linking::cosine_similarity(embedder.embed("a"), embedder.embed("b"))) < 0.6);
}

TEST_CASE("rate limit is retried once with backoff")
{
    auto transport = std::make_shared<ScriptedTransport>(std::deque<HttpReply>{{429, "slow down"}, {200, chat_body("ok")}});
    auto cfg = config();
    std::vector<std::chrono::milliseconds> sleeps;
    cfg.retry.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d); };
    HttpChatModel model(cfg, transport);
    CHECK(model.complete(request("x")).text == "ok");
    CHECK(model.http_requests() == 2);
    REQUIRE(sleeps.size() == 1);
    CHECK(sleeps[0] == std::chrono::milliseconds(100));
    CHECK(transport->urls[0] == "http://llm.invalid/v1/chat/completions");
    auto const body = nlohmann::json::parse(transport->bodies[0]);
    CHECK(body["model"] == "m");
    CHECK(body["temperature"] == 0.0);
    CHECK(body["messages"][0]["role"] == "system");
    bool has_auth = false;
    for (auto const& [k, v] : transport->last_headers) {
        has_auth = has_auth || (k == "Authorization" && v == "Bearer secret");
    }
    CHECK(has_auth);
}

TEST_CASE("backoff grows and retries are bounded")
{
    auto transport = std::make_shared<ScriptedTransport>(
        std::deque<HttpReply>{{503, ""}, {503, ""}, {503, ""}, {503, ""}, {200, chat_body("late")}});
    auto cfg = config();
    std::vector<long long> sleeps;
    cfg.retry.sleep = [&](std::chrono::milliseconds d) { sleeps.push_back(d.count()); };
    HttpChatModel model(cfg, transport);
    CHECK_THROWS_AS((void)model.complete(request("x")), LlmError);
    CHECK(model.http_requests() == 4);
    CHECK(sleeps == std::vector<long long>{100, 200, 400});
}

TEST_CASE("auth failures are not retried")
{
    auto transport = std::make_shared<ScriptedTransport>(std::deque<HttpReply>{{401, "bad key"}});
    auto cfg = config();
    int sleeps = 0;
    cfg.retry.sleep = [&](std::chrono::milliseconds) { ++sleeps; };
    HttpChatModel model(cfg, transport);
    try {
        (void)model.complete(request("x"));
        FAIL("expected an error");
    } catch (LlmError const& e) {
        CHECK(e.kind() == LlmError::Kind::auth);
    }
    CHECK(model.http_requests() == 1);
    CHECK(sleeps == 0);
}

TEST_CASE("missing credentials fail before any request")
{
    auto transport = std::make_shared<ScriptedTransport>(std::deque<HttpReply>{});
    auto cfg = config();
    cfg.api_key.clear();
    HttpChatModel model(cfg, transport);
    try {
        (void)model.complete(request("x"));
        FAIL("expected an error");
    } catch (LlmError const& e) {
        CHECK(e.kind() == LlmError::Kind::auth);
    }
    CHECK(transport->urls.empty());
}

TEST_CASE("status mapping and malformed bodies")
{
    CHECK(error_for_status(403, "").kind() == LlmError::Kind::auth);
    CHECK(error_for_status(429, "").kind() == LlmError::Kind::rate_limit);
    CHECK(error_for_status(500, "").kind() == LlmError::Kind::transient);
    CHECK(error_for_status(408, "").kind() == LlmError::Kind::transient);
    CHECK(error_for_status(400, "").kind() == LlmError::Kind::malformed);

    auto transport = std::make_shared<ScriptedTransport>(std::deque<HttpReply>{{200, "{\"choices\": []}"}});
    HttpChatModel model(config(), transport);
    try {
        (void)model.complete(request("x"));
        FAIL("expected an error");
    } catch (LlmError const& e) {
        CHECK(e.kind() == LlmError::Kind::malformed);
    }
}

TEST_CASE("http embedder parses vectors")
{
    auto transport = std::make_shared<ScriptedTransport>(
        std::deque<HttpReply>{{200, R"({"data":[{"embedding":[0.5,-0.25,1]}]})"}});
    HttpEmbedder embedder(config(), transport);
    auto const v = embedder.embed("text");
    CHECK(v.values == std::vector<double>{0.5, -0.25, 1.0});
    CHECK(v.model == "e");
    CHECK(transport->urls[0] == "http://llm.invalid/v1/embeddings");
    CHECK_THROWS_AS((void)embedder.embed("  "), LlmError);
}

TEST_CASE("caching wrappers serve repeats without inner calls")
{
    testing::TempDir dir;
    store::Store store(dir.path());
    MockChatModel inner([](ChatRequest const& r) { return "answer to " + r.messages.back().text; });
    CachingChatModel cached(inner, store);
    auto const first = cached.complete(request("q"));
    auto const second = cached.complete(request("q"));
    CHECK(first.text == second.text);
    CHECK(first.created_at == second.created_at);
    CHECK(inner.calls() == 1);
    CHECK(cached.hits() == 1);
    CHECK(cached.misses() == 1);

    // a fresh wrapper over the same store is warm too
    MockChatModel cold;
    CachingChatModel again(cold, store);
    CHECK(again.complete(request("q")).text == "answer to q");
    CHECK(cold.calls() == 0);

    MockEmbedder embedder(16);
    CachingEmbedder cached_embedder(embedder, store);
    auto const a = cached_embedder.embed("x");
    auto const b = cached_embedder.embed("x");
    CHECK(a == b);
    CHECK(embedder.calls() == 1);
    CHECK(a.values == embedder.embed("x").values);
}

TEST_CASE("token bucket")
{
    TokenBucket unlimited(0);
    for (int i = 0; i < 1000; ++i) {
        unlimited.acquire();
    }
    CHECK(unlimited.pending_wait().count() == 0);

    TokenBucket limited(60.0);  // one per second
    CHECK(limited.pending_wait().count() == 0);
    limited.acquire();
    auto const wait = limited.pending_wait();
    CHECK(wait > std::chrono::milliseconds(900));
    CHECK(wait <= std::chrono::milliseconds(1000));
}
