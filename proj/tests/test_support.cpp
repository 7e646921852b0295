#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include "crisk/date.hpp"
#include "crisk/errors.hpp"
#include "crisk/flatcfg.hpp"
#include "crisk/numfmt.hpp"

using namespace crisk;

TEST_CASE("date parses and prints ISO calendar days") {
    const Date d = Date::parse("2024-02-29");
    CHECK(d.to_string() == "2024-02-29");
    CHECK(Date(2024, 2, 29) == d);
}

TEST_CASE("date rejects malformed and impossible inputs") {
    CHECK_THROWS_AS(Date::parse("2023-02-29"), DomainError);
    CHECK_THROWS_AS(Date::parse("2024-13-01"), DomainError);
    CHECK_THROWS_AS(Date::parse("2024-00-10"), DomainError);
    CHECK_THROWS_AS(Date::parse("2024/01/01"), DomainError);
    CHECK_THROWS_AS(Date::parse("24-01-01"), DomainError);
    CHECK_THROWS_AS(Date::parse(""), DomainError);
    CHECK_THROWS_AS(Date(2023, 2, 29), DomainError);
}

TEST_CASE("date arithmetic is consistent") {
    const Date a = Date::parse("2024-01-01");
    const Date b = a.plus_days(60);
    CHECK(b.to_string() == "2024-03-01");
    CHECK(b - a == 60);
    CHECK(a - b == -60);
    CHECK(a < b);
    CHECK(a.plus_days(0) == a);
}

TEST_CASE("flat config parses keys, comments and blanks") {
    std::istringstream in(
        "# header comment\n"
        "\n"
        "alpha = 1.5\n"
        "  name =  spaced value  \n"
        "flag = true\n");
    const auto cfg = cfg::FlatConfig::parse(in, "test");
    CHECK(cfg.entries().size() == 3);
    CHECK(cfg.get("name") == "spaced value");
    CHECK(cfg.get_double("alpha", 0.0) == 1.5);
    CHECK(cfg.get_bool("flag", false));
    CHECK(cfg.get_long("missing", 7) == 7);
    CHECK(!cfg.has("missing"));
}

TEST_CASE("flat config rejects duplicates and malformed lines") {
    std::istringstream dup("a = 1\na = 2\n");
    CHECK_THROWS_AS(cfg::FlatConfig::parse(dup, "test"), ParseError);
    std::istringstream noeq("just some text\n");
    CHECK_THROWS_AS(cfg::FlatConfig::parse(noeq, "test"), ParseError);
}

TEST_CASE("strict numeric parsing rejects trailing garbage") {
    CHECK(cfg::parse_double("1.25", "x") == 1.25);
    CHECK(cfg::parse_long("-42", "x") == -42);
    CHECK_THROWS_AS(cfg::parse_double("1.25abc", "x"), ConfigError);
    CHECK_THROWS_AS(cfg::parse_double("", "x"), ConfigError);
    CHECK_THROWS_AS(cfg::parse_long("1.5", "x"), ConfigError);
}

TEST_CASE("shortest round-trip formatting re-parses to the same double") {
    const double values[] = {0.0,           1.0 / 3.0,   0.1,  123456.789,
                             -2.5e-11,      1e300,       42.0, 0.30000000000000004,
                             5.477225575051661};
    for (double v : values) {
        const std::string text = format_double(v);
        CHECK(std::strtod(text.c_str(), nullptr) == v);
    }
}
