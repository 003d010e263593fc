#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include "metaharvest/linking/date_range.hpp"
#include "metaharvest/llm/gateway.hpp"

namespace metaharvest::linking {

namespace prompts {

inline constexpr std::string_view kTemporalRole =
    "---Role---\nYou convert free-form temporal coverage descriptions into a single date range.";
inline constexpr std::string_view kCoverage = "---Temporal coverage---";
inline constexpr std::string_view kPresentDate = "Present date: ";
inline constexpr std::string_view kCorrection = "---Correction---";

}  // namespace prompts

struct TemporalOptions {
    std::string model;
    double temperature = 0.0;
    int max_tokens = 64;
};

/// The model output could not be read as a canonical range, even after one retry.
class NormalizationError : public Error {
  public:
    NormalizationError(std::string const& what, std::string last_output)
        : Error(what), last_output_(std::move(last_output))
    {
    }

    [[nodiscard]] auto last_output() const -> std::string const& { return last_output_; }

  private:
    std::string last_output_;
};

[[nodiscard]] auto build_temporal_prompt(std::string_view raw, std::chrono::year_month_day present_date,
                                         TemporalOptions const& options) -> llm::ChatRequest;

/// Asks the model for "YYYY-MM-DD-YYYY-MM-DD" and validates the answer. A
/// rejected answer is sent back once with the validation error; a second
/// rejection throws NormalizationError. Throws LlmError(precondition) for blank input.
[[nodiscard]] auto normalize_temporal_coverage(std::string_view raw, std::chrono::year_month_day present_date,
                                               llm::ChatModel& model, TemporalOptions const& options)
    -> CanonicalDateRange;

}  // namespace metaharvest::linking
