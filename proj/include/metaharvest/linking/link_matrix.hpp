#pragma once

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "metaharvest/core/error.hpp"
#include "metaharvest/extraction/record.hpp"
#include "metaharvest/linking/date_range.hpp"
#include "metaharvest/llm/gateway.hpp"

namespace metaharvest::linking {

/// Throws metaharvest::Error on dimension mismatch or a zero-norm vector.
[[nodiscard]] auto cosine_similarity(std::span<double const> a, std::span<double const> b) -> double;
[[nodiscard]] auto cosine_similarity(llm::EmbeddingVector const& a, llm::EmbeddingVector const& b) -> double;

enum class MatrixKind { cosine_similarity, temporal_overlap };

[[nodiscard]] auto to_string(MatrixKind kind) -> char const*;

struct LinkMatrix {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> values;  ///< values[i][j], row-major
    MatrixKind kind = MatrixKind::cosine_similarity;
    std::string embedding_model;  ///< cosine matrices only
};

struct SimilarityResult {
    LinkMatrix matrix;
    std::vector<std::string> excluded;  ///< records without a value for the field
};

/// Embeds `field` of every record and fills the symmetric cosine matrix.
/// Records whose value is N/A or missing are excluded and listed. Throws
/// metaharvest::Error for duplicate source ids or vectors from different models.
[[nodiscard]] auto similarity_matrix(std::span<extraction::MetadataRecord const> records, llm::Embedder& embedder,
                                     std::string_view field = "Description") -> SimilarityResult;

/// values[i][j] = temporal_overlap_fraction(range_i, range_j).
[[nodiscard]] auto overlap_matrix(std::span<std::pair<std::string, CanonicalDateRange> const> ranges)
    -> LinkMatrix;

/// Header row and column hold the ids; values use 6 decimals.
[[nodiscard]] auto to_csv(LinkMatrix const& matrix) -> std::string;
[[nodiscard]] auto to_json(LinkMatrix const& matrix) -> nlohmann::ordered_json;

}  // namespace metaharvest::linking
