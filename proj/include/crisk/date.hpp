#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace crisk {

/// Calendar day. All series in the engine are daily; intraday timestamps are
/// out of scope.
class Date {
public:
    Date() = default;  // 1970-01-01

    /// Throws DomainError if the components do not form a valid calendar day.
    Date(int year, unsigned month, unsigned day);

    /// Parses "YYYY-MM-DD". Throws DomainError on malformed input.
    static Date parse(std::string_view iso);

    std::string to_string() const;

    Date plus_days(int n) const;

    /// Day count from `other` to `*this` (positive when *this is later).
    int operator-(const Date& other) const {
        return static_cast<int>((day_ - other.day_).count());
    }

    auto operator<=>(const Date&) const = default;

    /// Days since 1970-01-01.
    int serial() const { return static_cast<int>(day_.time_since_epoch().count()); }

private:
    explicit Date(std::chrono::sys_days d) : day_(d) {}
    std::chrono::sys_days day_{};
};

}  // namespace crisk
