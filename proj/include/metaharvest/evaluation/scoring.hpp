#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metaharvest/evaluation/annotation.hpp"
#include "metaharvest/evaluation/llm_metrics.hpp"
#include "metaharvest/extraction/record.hpp"
#include "metaharvest/ingest/document.hpp"
#include "metaharvest/llm/gateway.hpp"
#include "metaharvest/schema/schema.hpp"

namespace metaharvest::evaluation {

/// TP: present and retrieved, FN: present but reported N/A,
/// TN: absent and reported N/A, FP: absent but a value was reported.
enum class Outcome { tp, fn, tn, fp };

[[nodiscard]] auto to_string(Outcome outcome) -> char const*;

[[nodiscard]] auto classify_retrieval(Availability availability, std::string_view record_value) -> Outcome;
[[nodiscard]] auto classify_retrieval(AnnotationEntry const& annotation, std::string_view record_value) -> Outcome;

enum class Metric { rouge_l_f1, faithfulness, response_relevancy };

[[nodiscard]] auto to_string(Metric metric) -> char const*;

/// One line of the score table. Every (dataset, stage, field) has at least one
/// row; fields without an accuracy score carry no metric and no score.
struct ScoreRow {
    std::string source_id;
    std::string provider;
    std::string field;
    std::string stage;
    std::string schema_id;
    std::optional<Metric> metric;
    std::optional<double> score;
    Outcome outcome = Outcome::tn;
    Availability availability = Availability::unavailable;
};

struct EvaluationOptions {
    bool rouge = true;
    /// Faithfulness and response relevancy for fuzzy TP fields; needs judge,
    /// embedder and documents.
    bool llm_metrics = false;
    llm::ChatModel* judge = nullptr;
    llm::Embedder* embedder = nullptr;
    JudgeOptions judge_options;
    std::function<ingest::SourceDocument const*(std::string const& source_id)> documents;
    std::map<std::string, std::string> providers;  ///< source_id -> provider
};

struct ScoreTable {
    std::vector<ScoreRow> rows;
    std::vector<std::string> errors;
    std::vector<std::string> warnings;
};

/// Scores each record against the annotation with the same source and schema.
/// Records without an annotation, and annotations missing a schema field, are
/// reported as errors; the remaining records are still scored.
[[nodiscard]] auto evaluate_corpus(std::span<extraction::MetadataRecord const> records,
                                   std::span<GroundTruthAnnotation const> annotations,
                                   schema::MetadataSchema const& schema, EvaluationOptions const& options)
    -> ScoreTable;

struct MeanSem {
    double mean = 0.0;
    double sem = 0.0;  ///< sample standard deviation / sqrt(n); 0 for n < 2
    std::size_t n = 0;
};

[[nodiscard]] auto mean_sem(std::span<double const> values) -> MeanSem;

enum class GroupKey { provider, field, availability, stage, schema };

[[nodiscard]] auto to_string(GroupKey key) -> char const*;
[[nodiscard]] auto parse_group_key(std::string_view text) -> std::optional<GroupKey>;

struct Aggregate {
    std::vector<std::string> group;  ///< one value per requested key
    Metric metric = Metric::rouge_l_f1;
    MeanSem stats;
};

/// Mean and SEM of scored rows grouped by `keys` and always by metric, in
/// lexicographic group order.
[[nodiscard]] auto aggregate(std::span<ScoreRow const> rows, std::span<GroupKey const> keys) -> std::vector<Aggregate>;

struct RetrievalSummary {
    /// counts[availability][outcome], each (dataset, stage, field) counted once.
    std::map<Availability, std::array<std::size_t, 4>> counts;

    [[nodiscard]] auto count(Availability a, Outcome o) const -> std::size_t;
    [[nodiscard]] auto total(Availability a) const -> std::size_t;
    /// FN share of present fields of class `a` (structured or unstructured).
    [[nodiscard]] auto fn_rate(Availability a) const -> double;
    [[nodiscard]] auto tn_rate() const -> double;
    [[nodiscard]] auto fp_rate() const -> double;
};

[[nodiscard]] auto summarize_retrieval(std::span<ScoreRow const> rows) -> RetrievalSummary;

/// Columns: source_id, provider, field, stage, schema, metric, score, outcome,
/// availability. Scores use 6 decimals; unscored rows leave metric and score empty.
[[nodiscard]] auto to_csv(std::span<ScoreRow const> rows) -> std::string;

/// Plain-text report of retrieval rates and mean ± SEM blocks.
[[nodiscard]] auto format_summary(RetrievalSummary const& retrieval, std::span<GroupKey const> keys,
                                  std::span<Aggregate const> aggregates) -> std::string;

}  // namespace metaharvest::evaluation
