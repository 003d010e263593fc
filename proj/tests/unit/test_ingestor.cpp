#include <doctest.h>

#include "metaharvest/ingest/ingestor.hpp"
#include "metaharvest/ingest/json_text.hpp"
#include "metaharvest/store/store.hpp"
#include "support/fake_renderer.hpp"
#include "support/temp_dir.hpp"

using namespace metaharvest;
using namespace metaharvest::ingest;

TEST_CASE("DatasetSource validation")
{
    CHECK_NOTHROW(validate(DatasetSource{"ok-id_1.x", "https://example.org/", std::nullopt, "P"}));
    CHECK_THROWS_AS(validate(DatasetSource{"", "https://example.org/", std::nullopt, "P"}), Error);
    CHECK_THROWS_AS(validate(DatasetSource{"bad id", "https://example.org/", std::nullopt, "P"}), Error);
    CHECK_THROWS_AS(validate(DatasetSource{"a/b", "https://example.org/", std::nullopt, "P"}), Error);
    CHECK_THROWS_AS(validate(DatasetSource{"id", "example.org", std::nullopt, "P"}), Error);
    CHECK_THROWS_AS(validate(DatasetSource{"id", "https://example.org/", "relative.xml", "P"}), Error);
}

TEST_CASE("content_hash changes exactly when a text changes")
{
    auto const base = content_hash("page", std::nullopt);
    CHECK(base == content_hash("page", std::nullopt));
    CHECK(base != content_hash("page ", std::nullopt));
    CHECK(base != content_hash("page", std::string()));
    CHECK(content_hash("page", "x") != content_hash("page", "y"));
    // the separator keeps the two texts apart
    CHECK(content_hash("ab", "c") != content_hash("a", "bc"));
}

TEST_CASE("bytes_to_text dispatches on media type")
{
    CHECK(bytes_to_text("<p>a</p><p>b</p>", "text/html") == "a\nb");
    CHECK(bytes_to_text("<r><t>x</t></r>", "application/xml") == "r/t: x");
    CHECK(bytes_to_text(R"({"title":"x","tags":["a","b"],"n":{"k":1}})", "application/json")
          == "title: x\ntags: a\ntags: b\nn/k: 1");
    CHECK(bytes_to_text("plain", "text/plain") == "plain");
    CHECK_FALSE(linearize_json("not json"));
}

TEST_CASE("ingest combines landing page and metadata file")
{
    testing::FakeRenderer renderer;
    renderer.add("https://p.example/ds", "<h1>Dataset</h1><p>About it</p>");
    renderer.add("https://p.example/ds.xml", "<rec><title>Dataset</title></rec>", "text/xml");
    Ingestor ingestor(renderer, nullptr);
    auto const doc = ingestor.ingest({"ds", "https://p.example/ds", "https://p.example/ds.xml", "P"});
    CHECK(doc.source_id == "ds");
    CHECK(doc.page_text == "Dataset\nAbout it");
    REQUIRE(doc.structured_text);
    CHECK(*doc.structured_text == "rec/title: Dataset");
    CHECK(doc.content_hash == content_hash(doc.page_text, doc.structured_text));
    CHECK_FALSE(doc.truncated);
}

TEST_CASE("ingest rejects pages without text and truncates long ones")
{
    testing::FakeRenderer renderer;
    renderer.add("https://p.example/empty", "<script>only()</script>");
    renderer.add("https://p.example/long", "<p>" + std::string(500, 'x') + "</p>");
    Ingestor ingestor(renderer, nullptr, IngestOptions{.max_page_chars = 100});
    CHECK_THROWS_AS((void)ingestor.ingest({"e", "https://p.example/empty", std::nullopt, ""}), Error);
    auto const doc = ingestor.ingest({"l", "https://p.example/long", std::nullopt, ""});
    CHECK(doc.page_text.size() == 100);
    CHECK(doc.truncated);
}

TEST_CASE("cached ingest is byte-identical and performs no fetch")
{
    testing::TempDir dir;
    store::Store store(dir.path());
    testing::FakeRenderer renderer;
    renderer.add("https://p.example/ds", "<p>Text</p>");
    renderer.add("https://p.example/ds.xml", "<r><a>1</a></r>", "application/xml");
    DatasetSource const source{"ds", "https://p.example/ds", "https://p.example/ds.xml", ""};

    auto const first = Ingestor(renderer, &store).ingest(source);
    CHECK(renderer.calls() == 2);

    testing::FakeRenderer offline;  // knows no URLs
    auto const second = Ingestor(offline, &store).ingest(source);
    CHECK(offline.calls() == 0);
    CHECK(second.page_text == first.page_text);
    CHECK(second.structured_text == first.structured_text);
    CHECK(second.fetched_at == first.fetched_at);
    CHECK(second.content_hash == first.content_hash);
}
