#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace aeropipe {

using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;
using Date = std::chrono::year_month_day;

/// `YYYY-MM-DDTHH:MM:SSZ`, with `.mmm` only when the millisecond part is nonzero.
std::string format_timestamp(Timestamp ts);

/// Accepts `YYYY-MM-DDTHH:MM:SS[.fff]Z` and `YYYY-MM-DD HH:MM:SS[.fff]`
/// (the latter interpreted as UTC). Throws ParseError.
Timestamp parse_timestamp(std::string_view text);

std::string format_date(Date d);

/// Strict ISO `YYYY-MM-DD`. Throws ParseError.
Date parse_date(std::string_view text);

Timestamp now_utc();

}  // namespace aeropipe
