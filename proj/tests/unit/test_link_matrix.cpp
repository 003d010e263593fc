#include <doctest.h>

#include "metaharvest/linking/link_matrix.hpp"
#include "metaharvest/llm/mock.hpp"

using namespace metaharvest;
using namespace metaharvest::linking;

namespace {

auto described(std::string id, std::string description) -> extraction::MetadataRecord
{
    extraction::MetadataRecord r;
    r.source_id = std::move(id);
    r.schema_id = "lter-life";
    r.stage = extraction::Stage::postprocessed;
    r.entries = {{"Title", "t"}, {"Description", std::move(description)}};
    return r;
}

class FixedEmbedder final : public llm::Embedder {
  public:
    explicit FixedEmbedder(std::string model) : model_(std::move(model)) {}
    auto embed(std::string_view text) -> llm::EmbeddingVector override
    {
        return {{1.0, static_cast<double>(text.size())}, text == "odd" ? "other-model" : model_};
    }
    auto model() const -> std::string override { return model_; }
    auto endpoint() const -> std::string override { return "test://fixed"; }

  private:
    std::string model_;
};

auto range(std::string_view text) { return parse_canonical_range(text); }

}  // namespace

TEST_CASE("cosine similarity")
{
    std::vector<double> const v = {0.3, -2, 5};
    CHECK(cosine_similarity(v, v) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(cosine_similarity(std::vector<double>{1, 0, 0}, std::vector<double>{0, 1, 0}) == 0.0);
    CHECK(cosine_similarity(std::vector<double>{1, 1, 0}, std::vector<double>{1, 0, 0})
          == doctest::Approx(0.70711).epsilon(1e-5));
    CHECK(cosine_similarity(std::vector<double>{1, 1, 0}, std::vector<double>{1, 0, 0})
          == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(cosine_similarity(std::vector<double>{1, 2}, std::vector<double>{-1, -2}) == doctest::Approx(-1.0));
    CHECK_THROWS_AS((void)cosine_similarity(std::vector<double>{0, 0}, std::vector<double>{1, 0}), Error);
    CHECK_THROWS_AS((void)cosine_similarity(std::vector<double>{1}, std::vector<double>{1, 0}), Error);
}

TEST_CASE("similarity matrix is symmetric with a unit diagonal")
{
    llm::MockEmbedder embedder;
    std::vector<extraction::MetadataRecord> const records = {
        described("a1", "Landsat surface reflectance composite"),
        described("b1", "Camera trap images of mammals"),
        described("a2", "Landsat surface reflectance composite"),
        described("b2", "Camera trap images of mammals"),
        described("none", "N/A"),
    };
    auto const result = similarity_matrix(records, embedder);
    CHECK(result.excluded == std::vector<std::string>{"none"});
    auto const& m = result.matrix;
    CHECK(m.ids == std::vector<std::string>{"a1", "b1", "a2", "b2"});
    CHECK(m.embedding_model == "mock-hash-embedding");
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(m.values[i][i] == doctest::Approx(1.0).epsilon(1e-12));
        for (std::size_t j = 0; j < 4; ++j) {
            CHECK(std::abs(m.values[i][j] - m.values[j][i]) < 1e-12);
            CHECK((m.values[i][j] >= -1.0 && m.values[i][j] <= 1.0));
        }
    }
    // identical descriptions form blocks that beat cross-group entries
    CHECK(m.values[0][2] == doctest::Approx(1.0));
    CHECK(m.values[1][3] == doctest::Approx(1.0));
    for (std::size_t a : {0u, 2u}) {
        for (std::size_t b : {1u, 3u}) {
            CHECK(m.values[a][b] < m.values[0][2]);
        }
    }
}

TEST_CASE("single record and error cases")
{
    llm::MockEmbedder embedder;
    auto const one = similarity_matrix(std::vector{described("x", "text")}, embedder);
    CHECK(one.matrix.values == std::vector<std::vector<double>>{{1.0}});

    CHECK_THROWS_AS((void)similarity_matrix(std::vector{described("x", "a"), described("x", "b")}, embedder), Error);

    FixedEmbedder mixed("m");
    CHECK_THROWS_AS((void)similarity_matrix(std::vector{described("x", "even"), described("y", "odd")}, mixed),
                    Error);
}

TEST_CASE("overlap matrix is one-sided")
{
    std::vector<std::pair<std::string, CanonicalDateRange>> const ranges = {
        {"p1", range("2021-08-13-2023-08-31")},
        {"p2", range("2021-08-14-2021-09-24")},
        {"old", range("1990-01-01-1990-12-31")},
    };
    auto const m = overlap_matrix(ranges);
    CHECK(m.kind == MatrixKind::temporal_overlap);
    CHECK(m.values[1][0] == 1.0);
    CHECK(m.values[0][1] < 1.0);
    CHECK(m.values[0][2] == 0.0);
    CHECK(m.values[2][0] == 0.0);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m.values[i][i] == 1.0);
    }
}

TEST_CASE("matrix export")
{
    std::vector<std::pair<std::string, CanonicalDateRange>> const ranges = {
        {"a", range("2000-01-01-2000-12-31")},
        {"b", range("2000-07-01-2001-06-30")},
    };
    auto const m = overlap_matrix(ranges);
    CHECK(to_csv(m) == "id,a,b\na,1.000000,0.502732\nb,0.504110,1.000000\n");
    auto const json = to_json(m);
    CHECK(json["kind"] == "temporal_overlap");
    CHECK(json["ids"] == nlohmann::json::array({"a", "b"}));
    CHECK_FALSE(json.contains("embedding_model"));
    CHECK(json["values"][0][1].get<double>() == doctest::Approx(184.0 / 366.0));
}
