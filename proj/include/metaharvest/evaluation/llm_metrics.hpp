#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "metaharvest/ingest/document.hpp"
#include "metaharvest/llm/gateway.hpp"

namespace metaharvest::evaluation {

namespace prompts {

inline constexpr std::string_view kStatementsRole =
    "---Role---\nYou break an answer into short, self-contained factual statements.";
inline constexpr std::string_view kVerdictsRole =
    "---Role---\nYou judge whether each statement can be directly inferred from a context.";
inline constexpr std::string_view kQuestionsRole =
    "---Role---\nYou write questions that a given answer about a dataset would answer.";

inline constexpr std::string_view kAnswer = "---Answer---";
inline constexpr std::string_view kContext = "---Context---";
inline constexpr std::string_view kStatements = "---Statements---";
inline constexpr std::string_view kOutputFormat = "---Output format---";

}  // namespace prompts

struct JudgeOptions {
    std::string model;
    double temperature = 0.0;
    int max_tokens = 2048;
    std::size_t questions = 3;
    std::size_t max_context_chars = 200'000;
};

struct FaithfulnessResult {
    double score = 1.0;
    std::size_t statements = 0;
    std::size_t supported = 0;
    std::vector<std::string> warnings;
};

/// "What is the <field> of this dataset?" with the field name lowercased.
[[nodiscard]] auto template_question(std::string_view field_name) -> std::string;

/// Fraction of the value's atomic statements that the judge finds supported by
/// the document: one call decomposes the value, one call returns a verdict per
/// statement. A value without statements scores 1.0 with a warning.
[[nodiscard]] auto faithfulness(std::string_view value, ingest::SourceDocument const& doc, llm::ChatModel& judge,
                                JudgeOptions const& options) -> FaithfulnessResult;

struct RelevancyResult {
    double score = 0.0;
    std::vector<std::string> questions;
    std::vector<double> similarities;  ///< per question, clamped to [0, 1]
};

/// Mean cosine similarity between questions generated from the value and the
/// template question for the field. Negative cosines count as 0.
[[nodiscard]] auto response_relevancy(std::string_view value, std::string_view field_name, llm::ChatModel& judge,
                                      llm::Embedder& embedder, JudgeOptions const& options) -> RelevancyResult;

/// First JSON object embedded in model output (code fences and prose around it
/// are ignored). Throws LlmError(malformed) when none parses.
[[nodiscard]] auto extract_json_object(std::string_view text) -> std::string;

}  // namespace metaharvest::evaluation
