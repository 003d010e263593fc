#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "metaharvest/cli/app.hpp"
#include "metaharvest/cli/manifest.hpp"
#include "metaharvest/schema/schema.hpp"
#include "support/temp_dir.hpp"

using namespace metaharvest;
namespace fs = std::filesystem;

namespace {

std::string const kFixtures = METAHARVEST_FIXTURES;
std::string const kManifest = kFixtures + "/corpus/manifest.json";
std::string const kAnnotations = kFixtures + "/corpus/annotations";

struct Run {
    int code = 0;
    std::string out;
    std::string err;
    cli::RunStats stats;
};

auto run(std::vector<std::string> args) -> Run
{
    Run r;
    std::ostringstream out;
    std::ostringstream err;
    r.code = cli::run_cli(args, out, err, &r.stats);
    r.out = out.str();
    r.err = err.str();
    return r;
}

auto slurp(fs::path const& path) -> std::string
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

auto harvest_mock(fs::path const& out, std::vector<std::string> extra = {}) -> Run
{
    std::vector<std::string> args = {"harvest", "--corpus", kManifest, "--out", out.string(), "--llm", "mock"};
    args.insert(args.end(), extra.begin(), extra.end());
    return run(args);
}

}  // namespace

TEST_CASE("manifest parsing")
{
    auto const m = cli::parse_manifest(R"({"corpus_id": "c", "schema_id": "croissant",
        "sources": [{"id": "a", "landing_url": "pages/a.html", "provider": "P"},
                    {"id": "b", "landing_url": "https://example.org/b", "metadata_file_url": "meta/b.xml",
                     "provider": "Q"}],
        "llm": {"model": "m", "requests_per_minute": 30}})",
                                       "/data/corpus");
    CHECK(m.corpus_id == "c");
    REQUIRE(m.sources.size() == 2);
    CHECK(m.sources[0].landing_url == "file:///data/corpus/pages/a.html");
    CHECK(m.sources[1].landing_url == "https://example.org/b");
    CHECK(m.sources[1].metadata_file_url == "file:///data/corpus/meta/b.xml");
    CHECK(m.llm.model == "m");
    CHECK(m.llm.requests_per_minute == 30.0);
    CHECK_FALSE(m.llm.base_url);

    CHECK_THROWS_AS((void)cli::parse_manifest("{", "/x"), Error);
    CHECK_THROWS_AS((void)cli::parse_manifest(R"({"corpus_id": "c", "sources": []})", "/x"), Error);
    CHECK_THROWS_AS((void)cli::parse_manifest(R"({"corpus_id": "c", "sources": [
        {"id": "a", "landing_url": "a.html", "provider": "P"}, {"id": "a", "landing_url": "b.html", "provider": "P"}]})",
                                              "/x"),
                    Error);
    CHECK_THROWS_AS((void)cli::parse_manifest(R"({"corpus_id": "c", "sources": [
        {"id": "bad id/..", "landing_url": "a.html", "provider": "P"}]})",
                                              "/x"),
                    Error);
}

TEST_CASE("schema commands")
{
    auto const list = run({"schema", "list"});
    CHECK(list.code == 0);
    CHECK(list.out.find("lter-life") != std::string::npos);
    CHECK(list.out.find("croissant") != std::string::npos);

    testing::TempDir dir;
    auto const exported = run({"schema", "export", "croissant", "-o", (dir / "c.json").string()});
    CHECK(exported.code == 0);
    CHECK(schema::parse_schema(slurp(dir / "c.json")) == schema::builtin_schema("croissant"));
    CHECK(run({"schema", "show", "lter-life"}).out.find("Temporal coverage") != std::string::npos);
    CHECK(run({"schema", "show", "nope"}).code != 0);
}

TEST_CASE("offline harvest writes records and a report")
{
    testing::TempDir dir;
    auto const r = harvest_mock(dir.path());
    CHECK_MESSAGE(r.code == 0, r.err);
    CHECK(r.stats.network_requests == 0);
    CHECK(r.stats.page_fetches == 4);
    CHECK(r.stats.chat_calls == 6);
    for (auto const* id : {"ecotope-2016", "camera-trap-p2", "landsat-ndvi"}) {
        CHECK(fs::exists(dir / "records" / (std::string(id) + ".raw.json")));
        CHECK(fs::exists(dir / "records" / (std::string(id) + ".postprocessed.json")));
    }
    auto const report = nlohmann::json::parse(slurp(dir / "harvest_report.json"));
    CHECK(report["succeeded"].size() == 3);
    CHECK(report["failed"].empty());
    CHECK(report["model"] == "mock-scripted");

    auto const post = nlohmann::json::parse(slurp(dir / "records/ecotope-2016.postprocessed.json"));
    CHECK(post["entries"].size() == 21);

    // warm re-run: nothing below the caches, same bytes
    auto const before = slurp(dir / "records/landsat-ndvi.postprocessed.json");
    auto const again = harvest_mock(dir.path());
    CHECK(again.code == 0);
    CHECK(again.stats.page_fetches == 0);
    CHECK(again.stats.chat_calls == 0);
    CHECK(slurp(dir / "records/landsat-ndvi.postprocessed.json") == before);
}

TEST_CASE("raw-only harvest skips post-processing")
{
    testing::TempDir dir;
    auto const r = harvest_mock(dir.path(), {"--stage", "raw"});
    CHECK(r.code == 0);
    CHECK(r.stats.chat_calls == 3);
    CHECK(fs::exists(dir / "records/ecotope-2016.raw.json"));
    CHECK_FALSE(fs::exists(dir / "records/ecotope-2016.postprocessed.json"));
}

TEST_CASE("live mode without credentials fails before fetching")
{
    testing::TempDir dir;
    ::unsetenv("METAHARVEST_LLM_API_KEY");
    auto const r = run({"harvest", "--corpus", kManifest, "--out", dir.path().string(), "--llm", "live",
                        "--llm-base-url", "http://127.0.0.1:1/v1", "--llm-model", "m"});
    CHECK(r.code == 2);
    CHECK(r.err.find("METAHARVEST_LLM_API_KEY") != std::string::npos);
    CHECK(r.stats.page_fetches == 0);
}

TEST_CASE("unreachable source is reported and the rest harvested")
{
    testing::TempDir dir;
    std::ofstream(dir / "manifest.json") << R"({"corpus_id": "c", "schema_id": "lter-life", "sources": [
        {"id": "ok", "landing_url": ")" << kFixtures << R"(/corpus/pages/landsat-ndvi.html", "provider": "P"},
        {"id": "gone", "landing_url": "missing.html", "provider": "P"}]})";
    auto const r = run({"harvest", "--corpus", (dir / "manifest.json").string(), "--out", (dir / "out").string(),
                        "--llm", "mock"});
    CHECK(r.code == 1);
    CHECK(r.err.find("gone") != std::string::npos);
    auto const report = nlohmann::json::parse(slurp(dir / "out/harvest_report.json"));
    CHECK(report["succeeded"] == nlohmann::json::array({"ok"}));
    CHECK(report["failed"][0]["stage"] == "ingest");
}

TEST_CASE("evaluate writes scores and grouped summaries")
{
    testing::TempDir dir;
    REQUIRE(harvest_mock(dir.path()).code == 0);
    auto const r = run({"evaluate", "--out", dir.path().string(), "--annotations", kAnnotations, "--corpus",
                        kManifest, "--group-by", "provider"});
    CHECK_MESSAGE(r.code == 0, r.err);
    CHECK(r.stats.chat_calls == 0);
    auto const csv = slurp(dir / "scores.csv");
    CHECK(csv.starts_with("source_id,provider,field,stage,schema,metric,score,outcome,availability\n"));
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 63);
    CHECK(csv.find("Google Earth Engine") != std::string::npos);
    auto const summary = slurp(dir / "summary.txt");
    CHECK(summary == r.out);
    CHECK(summary.find("provider=Zenodo") != std::string::npos);
    CHECK(summary.find("provider=Rijkswaterstaat") != std::string::npos);
    auto const meta = nlohmann::json::parse(slurp(dir / "scores.meta.json"));
    CHECK(meta["tokenizer"] == "lowercase-ascii/split-non-alphanumeric");
    CHECK(meta["rows"] == 63);
    CHECK(meta["errors"].empty());

    auto const raw = run({"evaluate", "--out", dir.path().string(), "--annotations", kAnnotations, "--stage", "all",
                          "--group-by", "stage,field"});
    CHECK(raw.code == 0);
    CHECK(raw.out.find("stage=raw") != std::string::npos);
    CHECK(raw.out.find("stage=postprocessed") != std::string::npos);
}

TEST_CASE("LLM metrics without a gateway name both metrics")
{
    testing::TempDir dir;
    REQUIRE(harvest_mock(dir.path()).code == 0);
    auto const r = run({"evaluate", "--out", dir.path().string(), "--annotations", kAnnotations, "--metrics", "llm"});
    CHECK(r.code == 2);
    CHECK(r.err.find("faithfulness") != std::string::npos);
    CHECK(r.err.find("response_relevancy") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "scores.csv"));
}

TEST_CASE("LLM metrics with the mock gateway")
{
    testing::TempDir dir;
    REQUIRE(harvest_mock(dir.path()).code == 0);
    auto const r = run({"evaluate", "--out", dir.path().string(), "--annotations", kAnnotations, "--corpus",
                        kManifest, "--metrics", "all", "--llm", "mock"});
    CHECK_MESSAGE(r.code == 0, r.err);
    CHECK(r.stats.chat_calls > 0);
    CHECK(r.stats.page_fetches == 0);
    auto const csv = slurp(dir / "scores.csv");
    CHECK(csv.find(",faithfulness,") != std::string::npos);
    CHECK(csv.find(",response_relevancy,") != std::string::npos);
    auto const meta = nlohmann::json::parse(slurp(dir / "scores.meta.json"));
    CHECK(meta["embedding_model"] == "mock-hash-embedding");
}

TEST_CASE("link matrices")
{
    testing::TempDir dir;
    REQUIRE(harvest_mock(dir.path()).code == 0);
    auto const temporal = run({"link", "--out", dir.path().string(), "--kind", "temporal", "--llm", "mock",
                               "--present-date", "2025-06-07"});
    CHECK_MESSAGE(temporal.code == 0, temporal.err);
    auto const report = nlohmann::json::parse(slurp(dir / "matrices/temporal_overlap.report.json"));
    CHECK(report["present_date"] == "2025-06-07");
    auto const matrix = nlohmann::json::parse(slurp(dir / "matrices/temporal_overlap.json"));
    CHECK(matrix["kind"] == "temporal_overlap");
    auto const n = matrix["ids"].size();
    CHECK(n >= 2);
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(matrix["values"][i][i] == 1.0);
    }

    auto const similarity = run({"link", "--out", dir.path().string(), "--kind", "similarity", "--llm", "mock"});
    CHECK_MESSAGE(similarity.code == 0, similarity.err);
    auto const cosine = nlohmann::json::parse(slurp(dir / "matrices/cosine_similarity.json"));
    CHECK(cosine["embedding_model"] == "mock-hash-embedding");
    auto const cosine_report = nlohmann::json::parse(slurp(dir / "matrices/cosine_similarity.report.json"));
    CHECK(cosine["ids"].size() + cosine_report["excluded"].size() == 3);
    CHECK(cosine["ids"].size() >= 2);

    auto const csv = slurp(dir / "matrices/cosine_similarity.csv");
    REQUIRE(run({"link", "--out", dir.path().string(), "--kind", "similarity", "--llm", "mock"}).code == 0);
    CHECK(slurp(dir / "matrices/cosine_similarity.csv") == csv);

    CHECK(run({"link", "--out", dir.path().string(), "--kind", "sideways", "--llm", "mock"}).code != 0);
}

TEST_CASE("the installed binary reports usage errors")
{
    auto const command = std::string(METAHARVEST_BINARY) + " harvest > /dev/null 2>&1";
    auto const status = std::system(command.c_str());
    CHECK(status != 0);
}
