#include "metaharvest/linking/link_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace metaharvest::linking {

auto cosine_similarity(std::span<double const> a, std::span<double const> b) -> double
{
    if (a.size() != b.size()) {
        throw Error("cosine similarity of vectors with different dimensions (" + std::to_string(a.size()) + " vs "
                    + std::to_string(b.size()) + ")");
    }
    double dot = 0;
    double na = 0;
    double nb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
    }
    if (na == 0 || nb == 0) {
        throw Error("cosine similarity of a zero-norm vector");
    }
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

auto cosine_similarity(llm::EmbeddingVector const& a, llm::EmbeddingVector const& b) -> double
{
    return cosine_similarity(std::span<double const>(a.values), std::span<double const>(b.values));
}

auto to_string(MatrixKind kind) -> char const*
{
    return kind == MatrixKind::cosine_similarity ? "cosine_similarity" : "temporal_overlap";
}

auto similarity_matrix(std::span<extraction::MetadataRecord const> records, llm::Embedder& embedder,
                       std::string_view field) -> SimilarityResult
{
    SimilarityResult result;
    std::set<std::string> seen;
    std::vector<llm::EmbeddingVector> vectors;
    for (auto const& record : records) {
        if (!seen.insert(record.source_id).second) {
            throw Error("duplicate record for " + record.source_id);
        }
        auto const* value = record.find(field);
        if (value == nullptr || extraction::is_not_available(*value)) {
            result.excluded.push_back(record.source_id);
            continue;
        }
        auto vector = embedder.embed(*value);
        if (!vectors.empty() && vector.model != vectors.front().model) {
            throw Error("embedding models differ within one matrix: " + vectors.front().model + " vs "
                        + vector.model);
        }
        result.matrix.ids.push_back(record.source_id);
        vectors.push_back(std::move(vector));
    }

    auto const n = vectors.size();
    auto& m = result.matrix;
    m.kind = MatrixKind::cosine_similarity;
    m.embedding_model = n > 0 ? vectors.front().model : embedder.model();
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m.values[i][i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            m.values[i][j] = m.values[j][i] = cosine_similarity(vectors[i], vectors[j]);
        }
    }
    return result;
}

auto overlap_matrix(std::span<std::pair<std::string, CanonicalDateRange> const> ranges) -> LinkMatrix
{
    LinkMatrix m;
    m.kind = MatrixKind::temporal_overlap;
    auto const n = ranges.size();
    m.values.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        m.ids.push_back(ranges[i].first);
        for (std::size_t j = 0; j < n; ++j) {
            m.values[i][j] = i == j ? 1.0 : temporal_overlap_fraction(ranges[i].second, ranges[j].second);
        }
    }
    return m;
}

namespace {

auto csv_cell(std::string_view text) -> std::string
{
    if (text.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(text);
    }
    std::string out = "\"";
    for (char c : text) {
        out += c;
        if (c == '"') {
            out += '"';
        }
    }
    return out + "\"";
}

}  // namespace

auto to_csv(LinkMatrix const& matrix) -> std::string
{
    std::string out = "id";
    for (auto const& id : matrix.ids) {
        out += "," + csv_cell(id);
    }
    out += "\n";
    char buf[32];
    for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
        out += csv_cell(matrix.ids[i]);
        for (double v : matrix.values[i]) {
            // Avoid "-0.000000" for tiny negative cosines.
            std::snprintf(buf, sizeof buf, ",%.6f", std::abs(v) < 5e-7 ? 0.0 : v);
            out += buf;
        }
        out += "\n";
    }
    return out;
}

auto to_json(LinkMatrix const& matrix) -> nlohmann::ordered_json
{
    nlohmann::ordered_json json;
    json["ids"] = matrix.ids;
    json["kind"] = to_string(matrix.kind);
    if (!matrix.embedding_model.empty()) {
        json["embedding_model"] = matrix.embedding_model;
    }
    json["values"] = matrix.values;
    return json;
}

}  // namespace metaharvest::linking
