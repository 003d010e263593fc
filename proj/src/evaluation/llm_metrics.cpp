#include "metaharvest/evaluation/llm_metrics.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "metaharvest/core/text.hpp"
#include "metaharvest/linking/link_matrix.hpp"

namespace metaharvest::evaluation {

using llm::LlmError;

auto template_question(std::string_view field_name) -> std::string
{
    return "What is the " + to_lower_ascii(field_name) + " of this dataset?";
}

auto extract_json_object(std::string_view text) -> std::string
{
    for (auto start = text.find('{'); start != std::string_view::npos; start = text.find('{', start + 1)) {
        for (auto end = text.rfind('}'); end != std::string_view::npos && end > start; end = text.rfind('}', end - 1)) {
            auto candidate = text.substr(start, end - start + 1);
            auto const json = nlohmann::json::parse(candidate, nullptr, false);
            if (json.is_object()) {
                return std::string(candidate);
            }
            if (end == 0) {
                break;
            }
        }
    }
    throw LlmError(LlmError::Kind::malformed, "no JSON object in judge response: "
                                                  + collapse_whitespace(utf8_prefix(text, 200)));
}

namespace {

auto make_request(JudgeOptions const& options, std::string_view role, std::string user) -> llm::ChatRequest
{
    llm::ChatRequest request;
    request.model = options.model;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.messages = {{llm::Role::system, std::string(role)}, {llm::Role::user, std::move(user)}};
    return request;
}

auto string_list(nlohmann::json const& json, char const* key) -> std::vector<std::string>
{
    if (!json.contains(key) || !json[key].is_array()) {
        throw LlmError(LlmError::Kind::malformed, std::string("judge response lacks \"") + key + "\" array");
    }
    std::vector<std::string> out;
    for (auto const& item : json[key]) {
        if (item.is_string() && !trim(item.get<std::string>()).empty()) {
            out.push_back(std::string(trim(item.get<std::string>())));
        }
    }
    return out;
}

auto verdict_value(nlohmann::json const& item) -> bool
{
    nlohmann::json const& v = item.is_object() ? item.value("verdict", nlohmann::json()) : item;
    if (v.is_number()) {
        return v.get<double>() >= 1.0;
    }
    if (v.is_boolean()) {
        return v.get<bool>();
    }
    if (v.is_string()) {
        auto const s = to_lower_ascii(trim(v.get<std::string>()));
        return s == "1" || s == "yes" || s == "supported" || s == "true";
    }
    return false;
}

}  // namespace

auto faithfulness(std::string_view value, ingest::SourceDocument const& doc, llm::ChatModel& judge,
                  JudgeOptions const& options) -> FaithfulnessResult
{
    FaithfulnessResult result;

    std::string user;
    user.append(prompts::kAnswer).append("\n").append(trim(value)).append("\n\n");
    user.append(prompts::kOutputFormat).append("\n");
    user.append("Split the answer into short statements that each express one fact and can be understood "
                "without the others. Return only JSON of the form {\"statements\": [\"...\"]}.\n");
    auto const decomposition = judge.complete(make_request(options, prompts::kStatementsRole, std::move(user)));
    auto const statements =
        string_list(nlohmann::json::parse(extract_json_object(decomposition.text)), "statements");
    result.statements = statements.size();
    if (statements.empty()) {
        result.score = 1.0;
        result.warnings.push_back("no statements extracted; value counted as faithful");
        spdlog::warn("faithfulness: no statements extracted from value, scoring 1.0");
        return result;
    }

    std::string context = doc.page_text;
    if (doc.structured_text) {
        context += "\n\n" + *doc.structured_text;
    }
    user.clear();
    user.append(prompts::kContext).append("\n").append(utf8_prefix(context, options.max_context_chars)).append("\n\n");
    user.append(prompts::kStatements).append("\n");
    for (std::size_t i = 0; i < statements.size(); ++i) {
        user.append(std::to_string(i + 1)).append(". ").append(statements[i]).append("\n");
    }
    user.append("\n").append(prompts::kOutputFormat).append("\n");
    user.append("For each statement, in order, decide whether it can be directly inferred from the context. "
                "Return only JSON of the form {\"verdicts\": [{\"statement\": \"...\", \"reason\": \"...\", "
                "\"verdict\": 1}]} using verdict 1 for supported and 0 for unsupported.\n");
    auto const judged = judge.complete(make_request(options, prompts::kVerdictsRole, std::move(user)));
    auto const json = nlohmann::json::parse(extract_json_object(judged.text));
    if (!json.contains("verdicts") || !json["verdicts"].is_array()) {
        throw LlmError(LlmError::Kind::malformed, "judge response lacks \"verdicts\" array");
    }
    auto const& verdicts = json["verdicts"];
    if (verdicts.size() != statements.size()) {
        result.warnings.push_back("judge returned " + std::to_string(verdicts.size()) + " verdicts for "
                                  + std::to_string(statements.size()) + " statements");
    }
    for (std::size_t i = 0; i < std::min(verdicts.size(), statements.size()); ++i) {
        if (verdict_value(verdicts[i])) {
            ++result.supported;
        }
    }
    result.score = static_cast<double>(result.supported) / static_cast<double>(result.statements);
    return result;
}

auto response_relevancy(std::string_view value, std::string_view field_name, llm::ChatModel& judge,
                        llm::Embedder& embedder, JudgeOptions const& options) -> RelevancyResult
{
    RelevancyResult result;
    std::string user;
    user.append(prompts::kAnswer).append("\n").append(trim(value)).append("\n\n");
    user.append(prompts::kOutputFormat).append("\n");
    user.append("Write " + std::to_string(options.questions)
                + " distinct questions about a dataset for which the answer above would be a complete answer. "
                  "Return only JSON of the form {\"questions\": [\"...\"]}.\n");
    auto const completion = judge.complete(make_request(options, prompts::kQuestionsRole, std::move(user)));
    result.questions = string_list(nlohmann::json::parse(extract_json_object(completion.text)), "questions");
    if (result.questions.size() > options.questions) {
        result.questions.resize(options.questions);
    }
    if (result.questions.empty()) {
        throw LlmError(LlmError::Kind::malformed, "judge generated no questions");
    }
    auto const reference = embedder.embed(template_question(field_name));
    double total = 0;
    for (auto const& question : result.questions) {
        auto const similarity = std::max(0.0, linking::cosine_similarity(embedder.embed(question), reference));
        result.similarities.push_back(similarity);
        total += similarity;
    }
    result.score = total / static_cast<double>(result.similarities.size());
    return result;
}

}  // namespace metaharvest::evaluation
