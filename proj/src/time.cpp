#include "stsc/time.hpp"

#include <array>
#include <cstdio>

namespace stsc {

// Howard Hinnant's chrono-compatible civil day algorithms.
int64_t days_from_civil(int y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);           // [0, 399]
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1; // [0, 365]
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;          // [0, 146096]
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

void civil_from_days(int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);        // [0, 146096]
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const int yr = static_cast<int>(yoe) + static_cast<int>(era) * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);        // [0, 365]
    const unsigned mp = (5 * doy + 2) / 153;                             // [0, 11]
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = yr + (m <= 2);
}

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Parses exactly n digits at s[pos..), advancing pos. Returns nullopt on short
// or non-numeric input.
std::optional<int> take_digits(std::string_view s, size_t& pos, int n) {
    if (pos + n > s.size()) return std::nullopt;
    int v = 0;
    for (int i = 0; i < n; ++i) {
        char c = s[pos + i];
        if (!is_digit(c)) return std::nullopt;
        v = v * 10 + (c - '0');
    }
    pos += n;
    return v;
}

bool expect_char(std::string_view s, size_t& pos, char c) {
    if (pos >= s.size() || s[pos] != c) return false;
    ++pos;
    return true;
}

unsigned days_in_month(int y, unsigned m) {
    static constexpr std::array<unsigned, 12> base = {31, 28, 31, 30, 31, 30,
                                                      31, 31, 30, 31, 30, 31};
    if (m == 2) {
        bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return leap ? 29 : 28;
    }
    return base[m - 1];
}

}  // namespace

std::optional<Instant> parse_rfc3339(std::string_view s) {
    size_t pos = 0;
    auto year = take_digits(s, pos, 4);
    if (!year || !expect_char(s, pos, '-')) return std::nullopt;
    auto month = take_digits(s, pos, 2);
    if (!month || !expect_char(s, pos, '-')) return std::nullopt;
    auto day = take_digits(s, pos, 2);
    if (!day) return std::nullopt;
    if (pos >= s.size() || (s[pos] != 'T' && s[pos] != 't' && s[pos] != ' ')) return std::nullopt;
    ++pos;
    auto hour = take_digits(s, pos, 2);
    if (!hour || !expect_char(s, pos, ':')) return std::nullopt;
    auto minute = take_digits(s, pos, 2);
    if (!minute || !expect_char(s, pos, ':')) return std::nullopt;
    auto second = take_digits(s, pos, 2);
    if (!second) return std::nullopt;

    if (*month < 1 || *month > 12) return std::nullopt;
    if (*day < 1 || static_cast<unsigned>(*day) > days_in_month(*year, *month)) return std::nullopt;
    if (*hour > 23 || *minute > 59 || *second > 60) return std::nullopt;  // leap second tolerated
    int sec = *second == 60 ? 59 : *second;

    // Optional fractional seconds, truncated.
    if (pos < s.size() && s[pos] == '.') {
        ++pos;
        size_t start = pos;
        while (pos < s.size() && is_digit(s[pos])) ++pos;
        if (pos == start) return std::nullopt;
    }

    int64_t offset = 0;
    if (pos >= s.size()) return std::nullopt;
    char c = s[pos];
    if (c == 'Z' || c == 'z') {
        ++pos;
    } else if (c == '+' || c == '-') {
        ++pos;
        auto oh = take_digits(s, pos, 2);
        if (!oh || !expect_char(s, pos, ':')) return std::nullopt;
        auto om = take_digits(s, pos, 2);
        if (!om || *oh > 23 || *om > 59) return std::nullopt;
        offset = static_cast<int64_t>(*oh) * 3600 + *om * 60;
        if (c == '-') offset = -offset;
    } else {
        return std::nullopt;
    }
    if (pos != s.size()) return std::nullopt;

    int64_t days = days_from_civil(*year, *month, *day);
    int64_t secs = days * 86400 + *hour * 3600 + *minute * 60 + sec - offset;
    return Instant{std::chrono::seconds{secs}};
}

std::string format_rfc3339(Instant t) {
    int64_t total = t.time_since_epoch().count();
    int64_t days = total / 86400;
    int64_t rem = total % 86400;
    if (rem < 0) {
        rem += 86400;
        days -= 1;
    }
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02lld:%02lld:%02lldZ", y, m, d,
                  static_cast<long long>(rem / 3600), static_cast<long long>(rem / 60 % 60),
                  static_cast<long long>(rem % 60));
    return buf;
}

std::string format_compact(Instant t) {
    std::string s = format_rfc3339(t);
    std::string out;
    out.reserve(16);
    for (char c : s)
        if (c != '-' && c != ':') out.push_back(c);
    return out;
}

std::optional<Duration> parse_duration(std::string_view s) {
    if (s.size() < 2) return std::nullopt;
    char unit = s.back();
    int64_t mult;
    switch (unit) {
        case 'd': mult = 86400; break;
        case 'h': mult = 3600; break;
        case 'm': mult = 60; break;
        case 's': mult = 1; break;
        default: return std::nullopt;
    }
    int64_t n = 0;
    for (size_t i = 0; i + 1 < s.size(); ++i) {
        if (!is_digit(s[i])) return std::nullopt;
        n = n * 10 + (s[i] - '0');
        if (n > 1'000'000'000) return std::nullopt;
    }
    if (n <= 0) return std::nullopt;
    return Duration{n * mult};
}

std::optional<Instant> parse_iso_week(std::string_view s) {
    // YYYY-Www
    size_t pos = 0;
    auto year = take_digits(s, pos, 4);
    if (!year || !expect_char(s, pos, '-') || !expect_char(s, pos, 'W')) return std::nullopt;
    auto week = take_digits(s, pos, 2);
    if (!week || pos != s.size()) return std::nullopt;
    if (*week < 1 || *week > 53) return std::nullopt;
    // ISO week 1 contains January 4th; weeks start on Monday.
    int64_t jan4 = days_from_civil(*year, 1, 4);
    int64_t dow = ((jan4 % 7) + 7 + 3) % 7;  // 0 = Monday (epoch day 0 was a Thursday)
    int64_t week1_monday = jan4 - dow;
    int64_t monday = week1_monday + (*week - 1) * 7;
    // December 28 always falls in the year's last ISO week; anything later is
    // not a week of this year.
    if (monday > days_from_civil(*year, 12, 28)) return std::nullopt;
    return Instant{std::chrono::seconds{monday * 86400}};
}

Instant floor_to_day(Instant t) {
    int64_t total = t.time_since_epoch().count();
    int64_t days = total / 86400;
    if (total % 86400 < 0) days -= 1;
    return Instant{std::chrono::seconds{days * 86400}};
}

}  // namespace stsc
