#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace guard {

// All timestamps are UTC, second resolution.
using Timestamp = std::chrono::sys_seconds;
using Date = std::chrono::year_month_day;

Timestamp now_utc();

Date date_of(Timestamp at);
int hour_of(Timestamp at);

Timestamp make_timestamp(int year, int month, int day, int hour = 0, int minute = 0, int second = 0);
Date make_date(int year, int month, int day);

// ISO-8601 with trailing Z: 2024-01-31T17:05:00Z
std::string format_timestamp(Timestamp at);
std::optional<Timestamp> parse_timestamp(std::string_view text);

// YYYY-MM-DD
std::string format_date(Date d);
std::optional<Date> parse_date(std::string_view text);

}  // namespace guard
