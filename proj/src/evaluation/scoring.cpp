#include "metaharvest/evaluation/scoring.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

#include <spdlog/spdlog.h>

#include "metaharvest/core/text.hpp"
#include "metaharvest/evaluation/rouge.hpp"
#include "metaharvest/extraction/entities.hpp"

namespace metaharvest::evaluation {

auto to_string(Outcome outcome) -> char const*
{
    switch (outcome) {
    case Outcome::tp:
        return "TP";
    case Outcome::fn:
        return "FN";
    case Outcome::tn:
        return "TN";
    case Outcome::fp:
        return "FP";
    }
    return "?";
}

auto classify_retrieval(Availability availability, std::string_view record_value) -> Outcome
{
    bool const reported = !extraction::is_not_available(record_value) && !trim(record_value).empty();
    if (availability == Availability::unavailable) {
        return reported ? Outcome::fp : Outcome::tn;
    }
    return reported ? Outcome::tp : Outcome::fn;
}

auto classify_retrieval(AnnotationEntry const& annotation, std::string_view record_value) -> Outcome
{
    return classify_retrieval(annotation.availability, record_value);
}

auto to_string(Metric metric) -> char const*
{
    switch (metric) {
    case Metric::rouge_l_f1:
        return "rouge_l_f1";
    case Metric::faithfulness:
        return "faithfulness";
    case Metric::response_relevancy:
        return "response_relevancy";
    }
    return "?";
}

auto evaluate_corpus(std::span<extraction::MetadataRecord const> records,
                     std::span<GroundTruthAnnotation const> annotations, schema::MetadataSchema const& schema,
                     EvaluationOptions const& options) -> ScoreTable
{
    ScoreTable table;
    if (options.llm_metrics && (options.judge == nullptr || options.embedder == nullptr || !options.documents)) {
        throw Error("faithfulness and response_relevancy need a judge model, an embedder and source documents");
    }

    std::map<std::string, GroundTruthAnnotation const*> by_source;
    for (auto const& annotation : annotations) {
        if (annotation.schema_id == schema.schema_id) {
            by_source.emplace(annotation.source_id, &annotation);
        }
    }

    std::vector<std::string> missing;
    for (auto const& record : records) {
        if (record.schema_id != schema.schema_id) {
            table.errors.push_back(record.source_id + ": record uses schema " + record.schema_id + ", expected "
                                   + schema.schema_id);
            continue;
        }
        auto const found = by_source.find(record.source_id);
        if (found == by_source.end()) {
            missing.push_back(record.source_id);
            continue;
        }
        auto const& annotation = *found->second;
        auto const entries = extraction::collapse_entries(schema, record.entries);
        auto const provider_it = options.providers.find(record.source_id);
        std::string const provider = provider_it == options.providers.end() ? "" : provider_it->second;

        for (std::size_t f = 0; f < schema.fields.size(); ++f) {
            auto const& field = schema.fields[f];
            auto const truth = annotation.entries.find(field.name);
            if (truth == annotation.entries.end()) {
                table.errors.push_back(record.source_id + ": annotation lacks field \"" + field.name + "\"");
                continue;
            }
            auto const& value = entries[f].value;
            ScoreRow base{record.source_id,
                          provider,
                          field.name,
                          extraction::to_string(record.stage),
                          schema.schema_id,
                          std::nullopt,
                          std::nullopt,
                          classify_retrieval(truth->second, value),
                          truth->second.availability};

            bool scored = false;
            if (base.outcome == Outcome::tp && field.match_mode == schema::MatchMode::exact && options.rouge) {
                auto row = base;
                row.metric = Metric::rouge_l_f1;
                row.score = rouge_l_f1(value, truth->second.value);
                table.rows.push_back(std::move(row));
                scored = true;
            }
            if (base.outcome == Outcome::tp && field.match_mode == schema::MatchMode::fuzzy && options.llm_metrics) {
                auto const* doc = options.documents(record.source_id);
                if (doc == nullptr) {
                    table.errors.push_back(record.source_id + ": no source document for faithfulness of \""
                                           + field.name + "\"");
                }
                else {
                    try {
                        auto faith = faithfulness(value, *doc, *options.judge, options.judge_options);
                        for (auto const& w : faith.warnings) {
                            table.warnings.push_back(record.source_id + "/" + field.name + ": " + w);
                        }
                        auto row = base;
                        row.metric = Metric::faithfulness;
                        row.score = faith.score;
                        table.rows.push_back(std::move(row));

                        auto const relevancy = response_relevancy(value, field.name, *options.judge,
                                                                  *options.embedder, options.judge_options);
                        row = base;
                        row.metric = Metric::response_relevancy;
                        row.score = relevancy.score;
                        table.rows.push_back(std::move(row));
                        scored = true;
                    }
                    catch (llm::LlmError const& e) {
                        table.errors.push_back(record.source_id + "/" + field.name + ": judge failed: " + e.what());
                    }
                }
            }
            if (!scored) {
                table.rows.push_back(std::move(base));
            }
        }
    }
    if (!missing.empty()) {
        table.errors.push_back("no annotation for: " + join(missing, ", "));
    }
    for (auto const& e : table.errors) {
        spdlog::error("evaluate: {}", e);
    }
    return table;
}

auto mean_sem(std::span<double const> values) -> MeanSem
{
    // Welford's running update.
    MeanSem out;
    double m2 = 0;
    for (double v : values) {
        ++out.n;
        double const delta = v - out.mean;
        out.mean += delta / static_cast<double>(out.n);
        m2 += delta * (v - out.mean);
    }
    if (out.n >= 2) {
        auto const n = static_cast<double>(out.n);
        out.sem = std::sqrt(m2 / (n - 1)) / std::sqrt(n);
    }
    return out;
}

auto to_string(GroupKey key) -> char const*
{
    switch (key) {
    case GroupKey::provider:
        return "provider";
    case GroupKey::field:
        return "field";
    case GroupKey::availability:
        return "availability";
    case GroupKey::stage:
        return "stage";
    case GroupKey::schema:
        return "schema";
    }
    return "?";
}

auto parse_group_key(std::string_view text) -> std::optional<GroupKey>
{
    for (auto key : {GroupKey::provider, GroupKey::field, GroupKey::availability, GroupKey::stage, GroupKey::schema}) {
        if (iequals(text, to_string(key))) {
            return key;
        }
    }
    return std::nullopt;
}

namespace {

auto key_value(ScoreRow const& row, GroupKey key) -> std::string
{
    switch (key) {
    case GroupKey::provider:
        return row.provider;
    case GroupKey::field:
        return row.field;
    case GroupKey::availability:
        return to_string(row.availability);
    case GroupKey::stage:
        return row.stage;
    case GroupKey::schema:
        return row.schema_id;
    }
    return {};
}

}  // namespace

auto aggregate(std::span<ScoreRow const> rows, std::span<GroupKey const> keys) -> std::vector<Aggregate>
{
    std::map<std::pair<std::vector<std::string>, Metric>, std::vector<double>> groups;
    for (auto const& row : rows) {
        if (!row.metric || !row.score) {
            continue;
        }
        std::vector<std::string> group;
        for (auto key : keys) {
            group.push_back(key_value(row, key));
        }
        groups[{std::move(group), *row.metric}].push_back(*row.score);
    }
    std::vector<Aggregate> out;
    for (auto const& [id, scores] : groups) {
        out.push_back({id.first, id.second, mean_sem(scores)});
    }
    return out;
}

auto RetrievalSummary::count(Availability a, Outcome o) const -> std::size_t
{
    auto const it = counts.find(a);
    return it == counts.end() ? 0 : it->second[static_cast<std::size_t>(o)];
}

auto RetrievalSummary::total(Availability a) const -> std::size_t
{
    auto const it = counts.find(a);
    if (it == counts.end()) {
        return 0;
    }
    return it->second[0] + it->second[1] + it->second[2] + it->second[3];
}

namespace {

auto ratio(std::size_t num, std::size_t den) -> double
{
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

auto RetrievalSummary::fn_rate(Availability a) const -> double
{
    return ratio(count(a, Outcome::fn), count(a, Outcome::fn) + count(a, Outcome::tp));
}

auto RetrievalSummary::tn_rate() const -> double
{
    return ratio(count(Availability::unavailable, Outcome::tn), total(Availability::unavailable));
}

auto RetrievalSummary::fp_rate() const -> double
{
    return ratio(count(Availability::unavailable, Outcome::fp), total(Availability::unavailable));
}

auto summarize_retrieval(std::span<ScoreRow const> rows) -> RetrievalSummary
{
    RetrievalSummary summary;
    std::set<std::tuple<std::string, std::string, std::string, std::string>> seen;
    for (auto const& row : rows) {
        if (!seen.emplace(row.source_id, row.stage, row.schema_id, row.field).second) {
            continue;
        }
        summary.counts[row.availability][static_cast<std::size_t>(row.outcome)] += 1;
    }
    return summary;
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

auto fixed(double v, int decimals) -> std::string
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

}  // namespace

auto to_csv(std::span<ScoreRow const> rows) -> std::string
{
    std::string out = "source_id,provider,field,stage,schema,metric,score,outcome,availability\n";
    for (auto const& row : rows) {
        out += csv_cell(row.source_id) + "," + csv_cell(row.provider) + "," + csv_cell(row.field) + ","
               + csv_cell(row.stage) + "," + csv_cell(row.schema_id) + ","
               + (row.metric ? to_string(*row.metric) : "") + "," + (row.score ? fixed(*row.score, 6) : "") + ","
               + to_string(row.outcome) + "," + to_string(row.availability) + "\n";
    }
    return out;
}

auto format_summary(RetrievalSummary const& retrieval, std::span<GroupKey const> keys,
                    std::span<Aggregate const> aggregates) -> std::string
{
    std::string out = "Retrieval outcomes (dataset fields)\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "  %-14s %6s %6s %6s %6s\n", "availability", "TP", "FN", "TN", "FP");
    out += buf;
    for (auto a : {Availability::structured, Availability::unstructured, Availability::unavailable}) {
        std::snprintf(buf, sizeof buf, "  %-14s %6zu %6zu %6zu %6zu\n", to_string(a), retrieval.count(a, Outcome::tp),
                      retrieval.count(a, Outcome::fn), retrieval.count(a, Outcome::tn),
                      retrieval.count(a, Outcome::fp));
        out += buf;
    }
    out += "  FN rate structured:   " + fixed(retrieval.fn_rate(Availability::structured), 4) + "\n";
    out += "  FN rate unstructured: " + fixed(retrieval.fn_rate(Availability::unstructured), 4) + "\n";
    out += "  TN rate unavailable:  " + fixed(retrieval.tn_rate(), 4) + "\n";
    out += "  FP rate unavailable:  " + fixed(retrieval.fp_rate(), 4) + "\n";

    out += "\nScores (mean ± SEM, n)";
    if (!keys.empty()) {
        out += " by";
        for (auto key : keys) {
            out += std::string(" ") + to_string(key);
        }
    }
    out += "\n";
    if (aggregates.empty()) {
        out += "  no scored fields\n";
    }
    for (auto const& agg : aggregates) {
        out += " ";
        for (std::size_t i = 0; i < keys.size(); ++i) {
            out += std::string(" ") + to_string(keys[i]) + "=" + (agg.group[i].empty() ? "-" : agg.group[i]);
        }
        out += std::string(" ") + to_string(agg.metric) + ": " + fixed(agg.stats.mean, 4) + " ± "
               + fixed(agg.stats.sem, 4) + " (n=" + std::to_string(agg.stats.n) + ")\n";
    }
    return out;
}

}  // namespace metaharvest::evaluation
