#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace crisk::cfg {

/// Flat `key = value` config file. Lines starting with '#' and blank lines
/// are ignored; keys keep their file order. Duplicate keys are rejected.
class FlatConfig {
public:
    static FlatConfig parse_file(const std::filesystem::path& path);
    static FlatConfig parse(std::istream& in, std::string origin = "<stream>");

    const std::vector<std::pair<std::string, std::string>>& entries() const {
        return entries_;
    }

    bool has(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const;

    /// Typed getters throw ConfigError when the key is present but malformed.
    double get_double(std::string_view key, double fallback) const;
    long get_long(std::string_view key, long fallback) const;
    bool get_bool(std::string_view key, bool fallback) const;

    const std::string& origin() const { return origin_; }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
    std::string origin_;
};

/// Strict full-string numeric parses used across ingest and config code.
double parse_double(std::string_view text, std::string_view what);
long parse_long(std::string_view text, std::string_view what);

std::string_view trim(std::string_view s);

}  // namespace crisk::cfg
