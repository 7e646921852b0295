#include "crisk/timeseries.hpp"

#include <algorithm>
#include <cmath>

#include "crisk/errors.hpp"

namespace crisk::timeseries {

PriceSeries::PriceSeries(std::string asset_id, std::vector<PriceObservation> observations)
    : asset_id_(std::move(asset_id)), observations_(std::move(observations)) {
    for (std::size_t i = 0; i < observations_.size(); ++i) {
        const auto& obs = observations_[i];
        if (!(obs.price > 0.0)) {
            throw DomainError("asset '" + asset_id_ + "': non-positive price at " +
                              obs.day.to_string());
        }
        if (obs.market_cap < 0.0 || obs.volume < 0.0) {
            throw DomainError("asset '" + asset_id_ + "': negative market cap or volume at " +
                              obs.day.to_string());
        }
        if (i > 0) {
            const int step = obs.day - observations_[i - 1].day;
            if (step <= 0) {
                throw DomainError("asset '" + asset_id_ +
                                  "': observations not strictly increasing at " +
                                  obs.day.to_string());
            }
            gap_days_ += step - 1;
        }
    }
}

std::optional<PriceObservation> PriceSeries::at(Date day) const {
    const auto it = std::lower_bound(
        observations_.begin(), observations_.end(), day,
        [](const PriceObservation& obs, Date d) { return obs.day < d; });
    if (it == observations_.end() || it->day != day) return std::nullopt;
    return *it;
}

double log_return(double p_now, double p_prev) {
    if (!(p_now > 0.0) || !(p_prev > 0.0)) {
        throw DomainError("log_return requires positive prices");
    }
    return std::log(p_now / p_prev);
}

ReturnSeries daily_returns(const PriceSeries& series) {
    ReturnSeries out;
    out.asset_id = series.asset_id();
    const auto& obs = series.observations();
    if (obs.size() < 2) return out;
    out.observations.reserve(obs.size() - 1);
    for (std::size_t i = 1; i < obs.size(); ++i) {
        out.observations.push_back(
            {obs[i].day, log_return(obs[i].price, obs[i - 1].price)});
    }
    return out;
}

double horizon_return(const PriceSeries& series, Date t, int h_days) {
    if (h_days <= 0) throw DomainError("horizon must be a positive day count");
    const auto now = series.at(t);
    if (!now) {
        throw InsufficientHistoryError("asset '" + series.asset_id() +
                                       "': no observation at " + t.to_string());
    }
    const Date start = t.plus_days(-h_days);
    const auto prev = series.at(start);
    if (!prev) {
        throw InsufficientHistoryError("asset '" + series.asset_id() +
                                       "': no observation at " + start.to_string() +
                                       " (" + std::to_string(h_days) + "d before " +
                                       t.to_string() + ")");
    }
    return log_return(now->price, prev->price);
}

VolEstimate rolling_vol(const ReturnSeries& returns, Date t, int window) {
    if (window < 2) throw DomainError("rolling window must be >= 2");
    const auto& obs = returns.observations;
    // index one past the last return at or before t
    const auto end = std::upper_bound(
        obs.begin(), obs.end(), t,
        [](Date d, const ReturnObservation& r) { return d < r.day; });
    const auto available = static_cast<std::size_t>(end - obs.begin());
    if (available < 2) {
        throw InsufficientHistoryError("asset '" + returns.asset_id +
                                       "': fewer than 2 returns at or before " +
                                       t.to_string());
    }
    const std::size_t used = std::min<std::size_t>(available, static_cast<std::size_t>(window));
    const auto begin = end - static_cast<std::ptrdiff_t>(used);

    double sum = 0.0;
    for (auto it = begin; it != end; ++it) sum += it->log_return;
    const double mean = sum / static_cast<double>(used);

    double sum_sq = 0.0;
    for (auto it = begin; it != end; ++it) {
        const double d = it->log_return - mean;
        sum_sq += d * d;
    }
    const double variance = sum_sq / static_cast<double>(used - 1);

    VolEstimate est;
    est.as_of = (end - 1)->day;
    est.window_days = static_cast<int>(used);
    est.daily_vol = std::sqrt(variance);
    est.mean_return = mean;
    est.partial_window = used < static_cast<std::size_t>(window);
    return est;
}

double scale_vol(double daily_vol, int h_days) {
    if (daily_vol < 0.0) throw DomainError("volatility must be non-negative");
    if (h_days <= 0) throw DomainError("horizon must be a positive day count");
    return daily_vol * std::sqrt(static_cast<double>(h_days));
}

}  // namespace crisk::timeseries
