#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "crisk/cri.hpp"
#include "crisk/timeseries.hpp"

namespace crisk::report {

/// One output row of the metrics table: an asset or a fund.
/// risk_adjusted_return is populated only when a risk-free rate is
/// configured.
struct MetricsRow {
    std::string name;
    double period_return = 0.0;
    double period_vol = 0.0;
    double cri = 0.0;
    std::optional<double> risk_adjusted_return;
};

struct FundAllocation {
    std::string asset_id;
    double weight = 0.0;
};

/// Composition of the three sub-funds plus the optional parity mix.
/// Parsed from a flat config file with `fund.<name>.<asset> = weight` and
/// `mix.<name> = weight` entries; fund names are alpha, beta, gamma.
struct FundsConfig {
    static constexpr std::array<const char*, 3> fund_names = {"alpha", "beta", "gamma"};
    std::array<std::vector<FundAllocation>, 3> funds;
    std::optional<std::array<double, 3>> mix;
};

FundsConfig load_funds_config(const std::filesystem::path& path);

struct MetricsOptions {
    int window = 90;    // trailing returns behind mean/vol estimates
    int horizon = 30;   // scaling horizon for the period columns, days
    int annualize_days = 365;
    std::optional<double> risk_free_pct;  // annual rate, percent units
    cri::MarketMode mode = cri::MarketMode::standard;
    // Period return defaults to mean daily return * horizon; this switches
    // to the endpoint log return ln(P_t / P_{t-horizon}).
    bool use_horizon_return = false;
    // Total market cap defaults to the sum of every loaded asset's latest
    // market cap.
    std::optional<double> total_market_cap_override;
};

/// Builds the full metrics table: rows for declared funds (alpha, beta,
/// gamma), the parity composite when mix weights exist, then one row per
/// loaded asset in lexicographic order.
std::vector<MetricsRow> compute_metrics_table(
    const std::map<std::string, timeseries::PriceSeries>& series,
    const std::optional<FundsConfig>& funds, const MetricsOptions& opt);

/// Fixed-width text table, 6 decimal places.
std::string format_table(const std::vector<MetricsRow>& rows);

/// CSV with shortest round-trip numbers; re-parses to the exact doubles.
std::string format_csv(const std::vector<MetricsRow>& rows);

/// Entry point behind the crisk binary. Returns the process exit code:
/// 0 success, 2 validation/usage error, 1 internal error.
int cli_main(int argc, const char* const* argv);

}  // namespace crisk::report
