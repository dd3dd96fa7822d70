#include "emotrend/calendar.hpp"

#include <cctype>
#include <cstdio>

namespace emotrend {

namespace {

bool all_digits(const std::string& s, std::size_t from, std::size_t count) {
    if (from + count > s.size()) return false;
    for (std::size_t i = from; i < from + count; ++i) {
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
}

int to_int(const std::string& s, std::size_t from, std::size_t count) {
    int v = 0;
    for (std::size_t i = from; i < from + count; ++i) v = v * 10 + (s[i] - '0');
    return v;
}

bool valid_ymd(int y, int m, int d) {
    if (m < 1 || m > 12 || d < 1) return false;
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    int len = lengths[m - 1];
    const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
    if (m == 2 && leap) len = 29;
    return d <= len;
}

}  // namespace

// Howard Hinnant's civil-days algorithms.
std::int64_t days_from_civil(const CivilDay& cd) {
    int y = cd.year;
    const int m = cd.month;
    const int d = cd.day;
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2) / 5 +
                         static_cast<unsigned>(d) - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

CivilDay civil_from_days(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    return CivilDay{static_cast<int>(y + (m <= 2)), static_cast<int>(m), static_cast<int>(d)};
}

std::optional<CivilDay> parse_civil_day(const std::string& text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
    if (!all_digits(text, 0, 4) || !all_digits(text, 5, 2) || !all_digits(text, 8, 2)) {
        return std::nullopt;
    }
    const int y = to_int(text, 0, 4);
    const int m = to_int(text, 5, 2);
    const int d = to_int(text, 8, 2);
    if (!valid_ymd(y, m, d)) return std::nullopt;
    return CivilDay{y, m, d};
}

std::string format_civil_day(const CivilDay& cd) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", cd.year, cd.month, cd.day);
    return buf;
}

std::optional<std::int64_t> parse_timestamp(const std::string& text) {
    if (text.size() < 10) return std::nullopt;
    auto date = parse_civil_day(text.substr(0, 10));
    if (!date) return std::nullopt;

    std::int64_t secs = days_from_civil(*date) * 86400;
    std::size_t pos = 10;
    if (pos == text.size()) return secs;

    if (text[pos] != 'T' && text[pos] != ' ') return std::nullopt;
    ++pos;
    if (!all_digits(text, pos, 2) || pos + 8 > text.size()) return std::nullopt;
    if (text[pos + 2] != ':' || text[pos + 5] != ':') return std::nullopt;
    if (!all_digits(text, pos + 3, 2) || !all_digits(text, pos + 6, 2)) return std::nullopt;
    const int hh = to_int(text, pos, 2);
    const int mi = to_int(text, pos + 3, 2);
    const int ss = to_int(text, pos + 6, 2);
    if (hh > 23 || mi > 59 || ss > 60) return std::nullopt;  // allow leap second, clamp below
    secs += 3600 * hh + 60 * mi + (ss == 60 ? 59 : ss);
    pos += 8;

    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        std::size_t ndigits = 0;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
            ++pos;
            ++ndigits;
        }
        if (ndigits == 0) return std::nullopt;
    }

    if (pos == text.size()) return secs;  // no designator, treated as UTC
    if (text[pos] == 'Z') return pos + 1 == text.size() ? std::optional(secs) : std::nullopt;
    if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '+' ? 1 : -1;
        ++pos;
        if (!all_digits(text, pos, 2)) return std::nullopt;
        const int oh = to_int(text, pos, 2);
        pos += 2;
        if (pos < text.size() && text[pos] == ':') ++pos;
        if (!all_digits(text, pos, 2)) return std::nullopt;
        const int om = to_int(text, pos, 2);
        pos += 2;
        if (pos != text.size() || oh > 23 || om > 59) return std::nullopt;
        return secs - sign * (3600 * oh + 60 * om);
    }
    return std::nullopt;
}

std::string format_timestamp(std::int64_t epoch_seconds) {
    const std::int64_t day = day_of_epoch_seconds(epoch_seconds);
    const CivilDay cd = civil_from_days(day);
    std::int64_t rem = epoch_seconds - day * 86400;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", cd.year, cd.month,
                  cd.day, static_cast<int>(rem / 3600), static_cast<int>((rem / 60) % 60),
                  static_cast<int>(rem % 60));
    return buf;
}

}  // namespace emotrend
