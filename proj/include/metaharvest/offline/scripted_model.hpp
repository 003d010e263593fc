#pragma once

#include <chrono>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "metaharvest/linking/date_range.hpp"
#include "metaharvest/llm/gateway.hpp"

namespace metaharvest::offline {

/// Rule-based stand-in for a chat model, used as the fallback responder of the
/// mock gateway. It recognises the prompts this library builds by their role
/// message and answers each kind deterministically:
///
/// - extraction: "Label: value" lines (and label lines followed by a value
///   line) whose label matches an entity type; N/A for the rest
/// - post-processing: merges the raw entities per type with "; "
/// - temporal coverage: rule_based_range() below
/// - evaluation judges: sentence-split statements, token-containment verdicts,
///   and questions echoing the answer
///
/// Unrecognised prompts throw LlmError(malformed).
[[nodiscard]] auto scripted_response(llm::ChatRequest const& request) -> std::string;

/// Sections of a prompt message keyed by their "---Name---" heading line.
[[nodiscard]] auto prompt_sections(std::string_view text) -> std::map<std::string, std::string>;

/// Spans every date expression in `text` (ISO dates and timestamps, "Month D,
/// YYYY", "Month YYYY", bare years, and "present"/"to date"/"ongoing"/"now",
/// which stand for `present_date`). Years cover Jan 1 to Dec 31 and months
/// their first to last day. Empty when nothing is recognised.
[[nodiscard]] auto rule_based_range(std::string_view text, std::chrono::year_month_day present_date)
    -> std::optional<linking::CanonicalDateRange>;

}  // namespace metaharvest::offline
