#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

#include "metaharvest/core/error.hpp"

namespace metaharvest::linking {

/// Closed interval of proleptic Gregorian calendar days.
struct CanonicalDateRange {
    std::chrono::year_month_day start;
    std::chrono::year_month_day end;

    auto operator==(CanonicalDateRange const&) const -> bool = default;
};

class DateRangeError : public Error {
  public:
    enum class Kind { grammar, invalid_date, reversed };

    DateRangeError(Kind kind, std::string const& what) : Error(what), kind_(kind) {}

    [[nodiscard]] auto kind() const noexcept -> Kind { return kind_; }

  private:
    Kind kind_;
};

/// "YYYY-MM-DD"; throws DateRangeError(grammar | invalid_date).
[[nodiscard]] auto parse_date(std::string_view text) -> std::chrono::year_month_day;
[[nodiscard]] auto format_date(std::chrono::year_month_day date) -> std::string;

/// Throws DateRangeError(reversed) when start > end, invalid_date for invalid days.
[[nodiscard]] auto make_range(std::chrono::year_month_day start, std::chrono::year_month_day end)
    -> CanonicalDateRange;

/// Strict "YYYY-MM-DD-YYYY-MM-DD" with zero padding and no surrounding text.
[[nodiscard]] auto parse_canonical_range(std::string_view text) -> CanonicalDateRange;
[[nodiscard]] auto to_string(CanonicalDateRange const& range) -> std::string;

/// Inclusive day count; a single-day range lasts 1 day.
[[nodiscard]] auto duration_days(CanonicalDateRange const& range) -> std::int64_t;
[[nodiscard]] auto overlap_days(CanonicalDateRange const& a, CanonicalDateRange const& b) -> std::int64_t;

/// overlap_days(i, j) / duration_days(i): the share of i covered by j.
[[nodiscard]] auto temporal_overlap_fraction(CanonicalDateRange const& i, CanonicalDateRange const& j) -> double;

}  // namespace metaharvest::linking
