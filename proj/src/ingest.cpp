#include "crisk/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <ostream>
#include <sstream>
#include <utility>

#include "crisk/errors.hpp"
#include "crisk/flatcfg.hpp"
#include "crisk/numfmt.hpp"

namespace crisk::ingest {

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open file '" + path.string() + "'");
    return in;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string item;
    std::stringstream ss(line);
    while (std::getline(ss, item, ',')) {
        fields.emplace_back(cfg::trim(item));
    }
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

void expect_header(const std::string& line, const char* expected) {
    std::string got;
    for (char c : line) {
        if (!std::isspace(static_cast<unsigned char>(c))) got.push_back(c);
    }
    if (got != expected) {
        throw ParseError("expected header '" + std::string(expected) + "', got '" +
                             std::string(cfg::trim(line)) + "'",
                         1);
    }
}

double parse_number(const std::string& text, const char* what, std::size_t line) {
    try {
        return cfg::parse_double(text, what);
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), line);
    }
}

long parse_integer(const std::string& text, const char* what, std::size_t line) {
    try {
        return cfg::parse_long(text, what);
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), line);
    }
}

Date parse_day(const std::string& text, std::size_t line) {
    try {
        return Date::parse(text);
    } catch (const DomainError& e) {
        throw ParseError(e.what(), line);
    }
}

}  // namespace

std::map<std::string, timeseries::PriceSeries> load_series(
    const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty file, expected header row", 1);
    }
    expect_header(line, "date,asset_id,price,market_cap,volume");

    struct Row {
        timeseries::PriceObservation obs;
        std::size_t line;
    };
    std::map<std::string, std::vector<Row>> rows;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (cfg::trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        if (fields[1].empty()) throw ParseError("empty asset_id", line_no);

        Row row;
        row.line = line_no;
        row.obs.day = parse_day(fields[0], line_no);
        row.obs.price = parse_number(fields[2], "price", line_no);
        row.obs.market_cap = parse_number(fields[3], "market_cap", line_no);
        row.obs.volume = parse_number(fields[4], "volume", line_no);
        if (!(row.obs.price > 0.0)) throw ParseError("price must be positive", line_no);
        if (row.obs.market_cap < 0.0) {
            throw ParseError("market_cap must be non-negative", line_no);
        }
        if (row.obs.volume < 0.0) {
            throw ParseError("volume must be non-negative", line_no);
        }
        rows[fields[1]].push_back(std::move(row));
    }

    std::map<std::string, timeseries::PriceSeries> out;
    for (auto& [asset_id, asset_rows] : rows) {
        std::sort(asset_rows.begin(), asset_rows.end(), [](const Row& a, const Row& b) {
            if (a.obs.day != b.obs.day) return a.obs.day < b.obs.day;
            return a.line < b.line;
        });
        std::vector<timeseries::PriceObservation> observations;
        observations.reserve(asset_rows.size());
        for (std::size_t i = 0; i < asset_rows.size(); ++i) {
            if (i > 0 && asset_rows[i].obs.day == asset_rows[i - 1].obs.day) {
                throw ParseError("duplicate observation for asset '" + asset_id +
                                     "' on " + asset_rows[i].obs.day.to_string(),
                                 asset_rows[i].line);
            }
            observations.push_back(asset_rows[i].obs);
        }
        out.emplace(asset_id, timeseries::PriceSeries(asset_id, std::move(observations)));
    }
    return out;
}

std::map<std::string, std::vector<ledger::Trade>> load_trades(
    const std::filesystem::path& path) {
    std::ifstream in = open_or_throw(path);

    std::string line;
    if (!std::getline(in, line)) {
        throw ParseError("empty file, expected header row", 1);
    }
    expect_header(line, "seq,date,asset_id,amount,price");

    // Stable partition: per-asset lists keep file order.
    std::map<std::string, std::vector<ledger::Trade>> out;
    std::map<std::string, std::size_t> first_line_of_bad_seq;

    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (cfg::trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != 5) {
            throw ParseError("expected 5 fields, got " + std::to_string(fields.size()),
                             line_no);
        }
        if (fields[2].empty()) throw ParseError("empty asset_id", line_no);

        ledger::Trade trade;
        trade.seq = parse_integer(fields[0], "seq", line_no);
        trade.day = parse_day(fields[1], line_no);
        trade.asset_id = fields[2];
        trade.amount = parse_number(fields[3], "amount", line_no);
        trade.price = parse_number(fields[4], "price", line_no);
        if (trade.amount == 0.0) throw ParseError("amount must be non-zero", line_no);
        if (!(trade.price > 0.0)) throw ParseError("price must be positive", line_no);

        auto& list = out[trade.asset_id];
        const long expected = static_cast<long>(list.size()) + 1;
        if (trade.seq != expected) {
            throw ParseError("asset '" + trade.asset_id + "': expected seq " +
                                 std::to_string(expected) + ", got " +
                                 std::to_string(trade.seq),
                             line_no);
        }
        if (list.empty() && trade.amount < 0.0) {
            throw NoCostBasisError("asset '" + trade.asset_id +
                                   "': first trade must be a buy (line " +
                                   std::to_string(line_no) + ")");
        }
        list.push_back(std::move(trade));
    }
    return out;
}

void save_series(const std::map<std::string, timeseries::PriceSeries>& series,
                 std::ostream& out) {
    out << "date,asset_id,price,market_cap,volume\n";
    for (const auto& [asset_id, s] : series) {
        for (const auto& obs : s.observations()) {
            out << obs.day.to_string() << ',' << asset_id << ','
                << format_double(obs.price) << ',' << format_double(obs.market_cap)
                << ',' << format_double(obs.volume) << '\n';
        }
    }
}

void save_trades(const std::map<std::string, std::vector<ledger::Trade>>& trades,
                 std::ostream& out) {
    out << "seq,date,asset_id,amount,price\n";
    for (const auto& [asset_id, list] : trades) {
        for (const auto& t : list) {
            out << t.seq << ',' << t.day.to_string() << ',' << asset_id << ','
                << format_double(t.amount) << ',' << format_double(t.price) << '\n';
        }
    }
}

}  // namespace crisk::ingest
