#include "metaharvest/linking/date_range.hpp"

#include <algorithm>
#include <cstdio>

namespace metaharvest::linking {

namespace chr = std::chrono;

namespace {

auto digits(std::string_view text, std::size_t pos, std::size_t count, int& out) -> bool
{
    out = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        if (text[i] < '0' || text[i] > '9') {
            return false;
        }
        out = out * 10 + (text[i] - '0');
    }
    return true;
}

// Parses a date at `pos` assuming the caller checked the length.
auto date_at(std::string_view text, std::size_t pos, std::string_view whole) -> chr::year_month_day
{
    int y = 0;
    int m = 0;
    int d = 0;
    if (!digits(text, pos, 4, y) || text[pos + 4] != '-' || !digits(text, pos + 5, 2, m) || text[pos + 7] != '-'
        || !digits(text, pos + 8, 2, d)) {
        throw DateRangeError(DateRangeError::Kind::grammar,
                             "expected YYYY-MM-DD-YYYY-MM-DD, got \"" + std::string(whole) + "\"");
    }
    chr::year_month_day const date{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                                   chr::day{static_cast<unsigned>(d)}};
    if (!date.ok()) {
        throw DateRangeError(DateRangeError::Kind::invalid_date,
                             "invalid calendar date " + std::string(text.substr(pos, 10)));
    }
    return date;
}

auto day_number(chr::year_month_day date) -> std::int64_t
{
    return chr::sys_days{date}.time_since_epoch().count();
}

}  // namespace

auto parse_date(std::string_view text) -> chr::year_month_day
{
    if (text.size() != 10) {
        throw DateRangeError(DateRangeError::Kind::grammar, "expected YYYY-MM-DD, got \"" + std::string(text) + "\"");
    }
    return date_at(text, 0, text);
}

auto format_date(chr::year_month_day date) -> std::string
{
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                  static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
    return buf;
}

auto make_range(chr::year_month_day start, chr::year_month_day end) -> CanonicalDateRange
{
    if (!start.ok() || !end.ok()) {
        throw DateRangeError(DateRangeError::Kind::invalid_date, "invalid calendar date in range");
    }
    if (chr::sys_days{start} > chr::sys_days{end}) {
        throw DateRangeError(DateRangeError::Kind::reversed,
                             "range starts after it ends: " + format_date(start) + " > " + format_date(end));
    }
    return {start, end};
}

auto parse_canonical_range(std::string_view text) -> CanonicalDateRange
{
    if (text.size() != 21 || text[10] != '-') {
        throw DateRangeError(DateRangeError::Kind::grammar,
                             "expected YYYY-MM-DD-YYYY-MM-DD, got \"" + std::string(text) + "\"");
    }
    auto const start = date_at(text, 0, text);
    auto const end = date_at(text, 11, text);
    return make_range(start, end);
}

auto to_string(CanonicalDateRange const& range) -> std::string
{
    return format_date(range.start) + "-" + format_date(range.end);
}

auto duration_days(CanonicalDateRange const& range) -> std::int64_t
{
    return day_number(range.end) - day_number(range.start) + 1;
}

auto overlap_days(CanonicalDateRange const& a, CanonicalDateRange const& b) -> std::int64_t
{
    auto const first = std::max(day_number(a.start), day_number(b.start));
    auto const last = std::min(day_number(a.end), day_number(b.end));
    return last < first ? 0 : last - first + 1;
}

auto temporal_overlap_fraction(CanonicalDateRange const& i, CanonicalDateRange const& j) -> double
{
    return static_cast<double>(overlap_days(i, j)) / static_cast<double>(duration_days(i));
}

}  // namespace metaharvest::linking
