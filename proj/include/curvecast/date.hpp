#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace curvecast {

using Date = std::chrono::year_month_day;

/// Strict ISO-8601 calendar date (YYYY-MM-DD). Returns nullopt on any deviation.
std::optional<Date> parse_date(std::string_view text);

std::string format_date(const Date& date);

/// Calendar day offset, used only when generating synthetic date indices.
Date add_days(const Date& date, int days);

}  // namespace curvecast
