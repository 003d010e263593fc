#include "metaharvest/linking/temporal.hpp"

#include <spdlog/spdlog.h>

#include "metaharvest/core/text.hpp"

namespace metaharvest::linking {

auto build_temporal_prompt(std::string_view raw, std::chrono::year_month_day present_date,
                           TemporalOptions const& options) -> llm::ChatRequest
{
    std::string user;
    user.append(prompts::kCoverage).append("\n").append(trim(raw)).append("\n\n");
    user.append("---Rules---\n");
    user.append("- Answer with exactly one range in the form YYYY-MM-DD-YYYY-MM-DD and nothing else.\n");
    user.append("- A bare year covers January 1 to December 31 of that year.\n");
    user.append("- A bare month covers its first to its last day.\n");
    user.append("- Words such as \"present\", \"now\", \"ongoing\" or \"to date\" mean the present date.\n");
    user.append("- Several periods collapse into the single range spanning all of them.\n");
    user.append(prompts::kPresentDate).append(format_date(present_date)).append("\n");

    llm::ChatRequest request;
    request.model = options.model;
    request.temperature = options.temperature;
    request.max_tokens = options.max_tokens;
    request.messages = {{llm::Role::system, std::string(prompts::kTemporalRole)}, {llm::Role::user, std::move(user)}};
    return request;
}

namespace {

auto strip_decoration(std::string_view text) -> std::string_view
{
    text = trim(text);
    while (text.size() >= 2
           && ((text.front() == '`' && text.back() == '`') || (text.front() == '"' && text.back() == '"'))) {
        text = trim(text.substr(1, text.size() - 2));
    }
    return text;
}

}  // namespace

auto normalize_temporal_coverage(std::string_view raw, std::chrono::year_month_day present_date,
                                 llm::ChatModel& model, TemporalOptions const& options) -> CanonicalDateRange
{
    if (trim(raw).empty()) {
        throw llm::LlmError(llm::LlmError::Kind::precondition, "temporal coverage text is empty");
    }
    auto request = build_temporal_prompt(raw, present_date, options);
    auto const first = model.complete(request).text;
    try {
        return parse_canonical_range(strip_decoration(first));
    }
    catch (DateRangeError const& e) {
        spdlog::warn("temporal normalization rejected \"{}\": {}", collapse_whitespace(first), e.what());
        std::string correction;
        correction.append(prompts::kCorrection).append("\n");
        correction.append("The previous answer \"").append(trim(first)).append("\" was rejected: ");
        correction.append(e.what()).append(".\nAnswer again with only YYYY-MM-DD-YYYY-MM-DD.\n");
        request.messages.push_back({llm::Role::user, std::move(correction)});
    }
    auto const second = model.complete(request).text;
    try {
        return parse_canonical_range(strip_decoration(second));
    }
    catch (DateRangeError const& e) {
        throw NormalizationError("cannot normalize \"" + collapse_whitespace(raw) + "\": " + e.what(), second);
    }
}

}  // namespace metaharvest::linking
