#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace emotrend {

// Calendar date plus a day serial (days since 1970-01-01, UTC). The serial is
// what bucketing and trend regression work in; the y/m/d form is for I/O.
struct CivilDay {
    int year = 1970;
    int month = 1;  // 1..12
    int day = 1;    // 1..31

    bool operator==(const CivilDay&) const = default;
    auto operator<=>(const CivilDay&) const = default;
};

std::int64_t days_from_civil(const CivilDay& cd);
CivilDay civil_from_days(std::int64_t days);

// "YYYY-MM-DD"
std::optional<CivilDay> parse_civil_day(const std::string& text);
std::string format_civil_day(const CivilDay& cd);

// ISO-8601 UTC timestamp: "YYYY-MM-DD", "YYYY-MM-DDTHH:MM:SS",
// optional fractional seconds (ignored), optional "Z" or "+HH:MM" offset.
// Returns epoch seconds, or nullopt when malformed.
std::optional<std::int64_t> parse_timestamp(const std::string& text);
std::string format_timestamp(std::int64_t epoch_seconds);

inline std::int64_t day_of_epoch_seconds(std::int64_t epoch_seconds) {
    // Floor division: pre-1970 timestamps land on the correct day.
    std::int64_t d = epoch_seconds / 86400;
    if (epoch_seconds % 86400 < 0) --d;
    return d;
}

}  // namespace emotrend
