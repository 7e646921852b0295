#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "crisk/ledger.hpp"
#include "crisk/timeseries.hpp"

namespace crisk::ingest {

/// Feed abstraction. Only the file-backed implementation ships; a live
/// market-data client would slot in behind the same interface.
class SeriesSource {
public:
    virtual ~SeriesSource() = default;
    virtual std::map<std::string, timeseries::PriceSeries> load() = 0;
};

/// Reads a delimited series file with header
/// `date,asset_id,price,market_cap,volume`. Rows may arrive in any order;
/// they are grouped per asset and sorted by date. Duplicate (asset, date)
/// pairs and malformed fields are rejected with the offending line number.
std::map<std::string, timeseries::PriceSeries> load_series(
    const std::filesystem::path& path);

/// Reads a trades file with header `seq,date,asset_id,amount,price`.
/// Rows are partitioned per asset in file order; within each asset, seq must
/// run 1, 2, 3, ... and the first trade must be a buy.
std::map<std::string, std::vector<ledger::Trade>> load_trades(
    const std::filesystem::path& path);

/// Inverse of load_series: header plus one row per observation, grouped by
/// asset and ordered by date. Numbers are written in shortest round-trip
/// form, so load(save(x)) reproduces x exactly.
void save_series(const std::map<std::string, timeseries::PriceSeries>& series,
                 std::ostream& out);

/// Inverse of load_trades, grouped by asset in seq order.
void save_trades(const std::map<std::string, std::vector<ledger::Trade>>& trades,
                 std::ostream& out);

class FileSeriesSource final : public SeriesSource {
public:
    explicit FileSeriesSource(std::filesystem::path path) : path_(std::move(path)) {}
    std::map<std::string, timeseries::PriceSeries> load() override {
        return load_series(path_);
    }

private:
    std::filesystem::path path_;
};

}  // namespace crisk::ingest
