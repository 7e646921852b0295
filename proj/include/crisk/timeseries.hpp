#pragma once

#include <optional>
#include <string>
#include <vector>

#include "crisk/date.hpp"

namespace crisk::timeseries {

struct PriceObservation {
    Date day;
    double price = 0.0;       // quote currency, > 0
    double market_cap = 0.0;  // quote currency, >= 0
    double volume = 0.0;      // quote currency per day, >= 0
};

/// Daily price series with aligned market caps and volumes.
///
/// Invariants enforced on construction: strictly increasing days, every
/// price > 0 (log-return domain). Calendar gaps between observations are
/// allowed and recorded; returns are always taken between consecutive
/// observations, never interpolated.
class PriceSeries {
public:
    PriceSeries(std::string asset_id, std::vector<PriceObservation> observations);

    const std::string& asset_id() const { return asset_id_; }
    const std::vector<PriceObservation>& observations() const { return observations_; }
    bool empty() const { return observations_.empty(); }
    std::size_t size() const { return observations_.size(); }

    const PriceObservation& front() const { return observations_.front(); }
    const PriceObservation& back() const { return observations_.back(); }

    /// Exact calendar-day lookup.
    std::optional<PriceObservation> at(Date day) const;

    /// Total missing calendar days between consecutive observations.
    int gap_days() const { return gap_days_; }

private:
    std::string asset_id_;
    std::vector<PriceObservation> observations_;
    int gap_days_ = 0;
};

struct ReturnObservation {
    Date day;           // day of the later price in the pair
    double log_return;  // dimensionless
};

struct ReturnSeries {
    std::string asset_id;
    std::vector<ReturnObservation> observations;
};

struct VolEstimate {
    Date as_of;                  // day of the last return in the window
    int window_days = 0;         // returns actually used, >= 2
    double daily_vol = 0.0;      // sample standard deviation, >= 0
    double mean_return = 0.0;    // arithmetic mean over the window
    bool partial_window = false; // fewer returns were available than requested
};

/// ln(p_now / p_prev). Both prices must be positive.
double log_return(double p_now, double p_prev);

/// Consecutive-observation log returns; length = series.size() - 1.
ReturnSeries daily_returns(const PriceSeries& series);

/// ln(P_t / P_{t-h}). Requires observations at exactly t and t - h_days;
/// throws InsufficientHistoryError when either endpoint is missing.
double horizon_return(const PriceSeries& series, Date t, int h_days);

/// Trailing-window mean and Bessel-corrected standard deviation of the
/// `window` most recent returns at or before `t`. When fewer than `window`
/// returns exist the estimate covers what is available and is flagged
/// `partial_window`; below 2 returns it throws InsufficientHistoryError.
VolEstimate rolling_vol(const ReturnSeries& returns, Date t, int window);

/// Square-root-of-time scaling: daily_vol * sqrt(h_days).
double scale_vol(double daily_vol, int h_days);

}  // namespace crisk::timeseries
