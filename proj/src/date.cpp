#include "crisk/date.hpp"

#include <charconv>
#include <cstdio>

#include "crisk/errors.hpp"

namespace crisk {

namespace {

int parse_int(std::string_view s, std::string_view what, std::string_view full) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DomainError("invalid " + std::string(what) + " in date '" + std::string(full) + "'");
    }
    return value;
}

}  // namespace

Date::Date(int year, unsigned month, unsigned day) {
    const std::chrono::year_month_day ymd{std::chrono::year{year},
                                          std::chrono::month{month},
                                          std::chrono::day{day}};
    if (!ymd.ok()) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", year, month, day);
        throw DomainError(std::string("invalid calendar day '") + buf + "'");
    }
    day_ = std::chrono::sys_days{ymd};
}

Date Date::parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
        throw DomainError("expected YYYY-MM-DD, got '" + std::string(iso) + "'");
    }
    const int y = parse_int(iso.substr(0, 4), "year", iso);
    const int m = parse_int(iso.substr(5, 2), "month", iso);
    const int d = parse_int(iso.substr(8, 2), "day", iso);
    return Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::string Date::to_string() const {
    const std::chrono::year_month_day ymd{day_};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

Date Date::plus_days(int n) const { return Date(day_ + std::chrono::days{n}); }

}  // namespace crisk
