#include <doctest.h>

#include <atomic>
#include <fstream>
#include <thread>
#include <vector>

#include "metaharvest/core/hash.hpp"
#include "metaharvest/store/store.hpp"
#include "support/temp_dir.hpp"

using namespace metaharvest;
using namespace metaharvest::store;
using extraction::MetadataRecord;
using extraction::Stage;

namespace {

auto sample_record(std::string id, Stage stage = Stage::postprocessed, std::string schema = "lter-life")
    -> MetadataRecord
{
    MetadataRecord r;
    r.source_id = std::move(id);
    r.schema_id = std::move(schema);
    r.stage = stage;
    r.entries = {{"Title", "A title"}, {"Description", "Line one; \"quoted\" \xC3\xA9"}, {"License", "N/A"}};
    r.provenance = {"model-x", sha256_hex("p"), "2025-06-07T00:00:00Z", "v1", "strict", true, false};
    return r;
}

}  // namespace

TEST_CASE("put then get returns identical bytes")
{
    testing::TempDir dir;
    Store store(dir.path());
    std::string payload = "binary\0bytes\xFF", full(payload.data(), 13);
    auto const key = sha256_hex("k");
    store.put(key, full, CacheKind::page, "text/html");
    auto const entry = store.get(key, CacheKind::page);
    REQUIRE(entry);
    CHECK(entry->payload == full);
    CHECK(entry->media_type == "text/html");
    CHECK(entry->created_at.size() == 20);
    CHECK_FALSE(store.get(key, CacheKind::llm));
    CHECK_FALSE(store.get(sha256_hex("other"), CacheKind::page));
}

TEST_CASE("put is idempotent and immutable")
{
    testing::TempDir dir;
    Store store(dir.path());
    auto const key = sha256_hex("k");
    store.put(key, "same", CacheKind::llm);
    auto const created = store.get(key, CacheKind::llm)->created_at;
    CHECK_NOTHROW(store.put(key, "same", CacheKind::llm));
    CHECK(store.get(key, CacheKind::llm)->created_at == created);
    CHECK_THROWS_AS(store.put(key, "different", CacheKind::llm), ImmutabilityError);
    CHECK(store.get(key, CacheKind::llm)->payload == "same");
}

TEST_CASE("malformed keys are rejected")
{
    testing::TempDir dir;
    Store store(dir.path());
    CHECK_THROWS_AS(store.put("../escape", "x", CacheKind::page), StoreError);
    CHECK_THROWS_AS((void)store.get("short", CacheKind::page), StoreError);
}

TEST_CASE("concurrent writers to one key agree")
{
    testing::TempDir dir;
    Store store(dir.path());
    auto const key = sha256_hex("shared");
    std::vector<std::thread> threads;
    std::atomic<int> failures{0};
    for (int i = 0; i < 8; ++i) {
        threads.emplace_back([&] {
            try {
                store.put(key, "payload", CacheKind::embedding);
            }
            catch (...) {
                ++failures;
            }
        });
    }
    for (auto& t : threads) {
        t.join();
    }
    CHECK(failures == 0);
    CHECK(store.get(key, CacheKind::embedding)->payload == "payload");
}

TEST_CASE("records round-trip with stage and provenance")
{
    testing::TempDir dir;
    Store store(dir.path());
    std::vector<MetadataRecord> saved;
    for (int i = 0; i < 16; ++i) {
        saved.push_back(sample_record("ds-" + std::to_string(100 + i)));
        store.save_record(saved.back());
    }
    auto const loaded = store.load_records("lter-life");
    CHECK(loaded.errors.empty());
    REQUIRE(loaded.items.size() == 16);
    for (std::size_t i = 0; i < saved.size(); ++i) {
        CHECK(loaded.items[i] == saved[i]);
    }
    CHECK(std::filesystem::exists(dir / "records/ds-100.postprocessed.json"));
}

TEST_CASE("schema filter and stage filter")
{
    testing::TempDir dir;
    Store store(dir.path());
    store.save_record(sample_record("a", Stage::raw));
    store.save_record(sample_record("a", Stage::postprocessed));
    auto const wrong = store.load_records("croissant");
    CHECK(wrong.items.empty());
    CHECK(wrong.warnings.size() == 1);
    CHECK(store.load_records("", Stage::raw).items.size() == 1);
    CHECK(store.load_records().items.size() == 2);
}

TEST_CASE("a corrupted record file does not stop the others")
{
    testing::TempDir dir;
    Store store(dir.path());
    store.save_record(sample_record("good"));
    std::ofstream(dir / "records/bad.postprocessed.json") << "{ not json";
    std::ofstream(dir / "records/partial.raw.json") << R"({"source_id": "partial"})";
    auto const loaded = store.load_records();
    CHECK(loaded.items.size() == 1);
    CHECK(loaded.errors.size() == 2);
}
