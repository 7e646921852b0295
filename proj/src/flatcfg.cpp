#include "crisk/flatcfg.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <unordered_map>

#include "crisk/errors.hpp"

namespace crisk::cfg {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

double parse_double(std::string_view text, std::string_view what) {
    const std::string buf(trim(text));
    if (buf.empty()) throw ConfigError("empty " + std::string(what));
    errno = 0;
    char* end = nullptr;
    const double value = std::strtod(buf.c_str(), &end);
    if (errno != 0 || end != buf.c_str() + buf.size()) {
        throw ConfigError("invalid " + std::string(what) + " '" + buf + "'");
    }
    return value;
}

long parse_long(std::string_view text, std::string_view what) {
    const std::string buf(trim(text));
    if (buf.empty()) throw ConfigError("empty " + std::string(what));
    errno = 0;
    char* end = nullptr;
    const long value = std::strtol(buf.c_str(), &end, 10);
    if (errno != 0 || end != buf.c_str() + buf.size()) {
        throw ConfigError("invalid " + std::string(what) + " '" + buf + "'");
    }
    return value;
}

FlatConfig FlatConfig::parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
    return parse(in, path.string());
}

FlatConfig FlatConfig::parse(std::istream& in, std::string origin) {
    FlatConfig cfg;
    cfg.origin_ = std::move(origin);
    std::unordered_map<std::string, std::size_t> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto eq = body.find('=');
        if (eq == std::string_view::npos) {
            throw ParseError(cfg.origin_ + ": expected 'key = value'", lineno);
        }
        std::string key(trim(body.substr(0, eq)));
        std::string value(trim(body.substr(eq + 1)));
        if (key.empty()) {
            throw ParseError(cfg.origin_ + ": empty key", lineno);
        }
        if (!seen.emplace(key, lineno).second) {
            throw ParseError(cfg.origin_ + ": duplicate key '" + key + "'", lineno);
        }
        cfg.entries_.emplace_back(std::move(key), std::move(value));
    }
    return cfg;
}

bool FlatConfig::has(std::string_view key) const { return get(key).has_value(); }

std::optional<std::string> FlatConfig::get(std::string_view key) const {
    for (const auto& [k, v] : entries_) {
        if (k == key) return v;
    }
    return std::nullopt;
}

double FlatConfig::get_double(std::string_view key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    return parse_double(*v, origin_ + ": value for '" + std::string(key) + "'");
}

long FlatConfig::get_long(std::string_view key, long fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    return parse_long(*v, origin_ + ": value for '" + std::string(key) + "'");
}

bool FlatConfig::get_bool(std::string_view key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes") return true;
    if (*v == "false" || *v == "0" || *v == "no") return false;
    throw ConfigError(origin_ + ": value for '" + std::string(key) +
                      "' must be a boolean, got '" + *v + "'");
}

}  // namespace crisk::cfg
