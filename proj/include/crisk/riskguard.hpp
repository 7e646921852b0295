#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace crisk::guard {

/// Thresholds for the five risk-limit pillars, in percent units.
/// Defaults carry the recommended operating values; callers can load an
/// alternative set from a flat key-value config file (see load_config).
struct GuardConfig {
    double x_pct = 10.0;  // recommended max weight per asset, across all funds
    double y_pct = 15.0;  // absolute max weight per asset
    double n_max = 3.0;   // allowed count of assets in the (X, Y] weight band
    bool n_is_percentile = false;  // treat n_max as a percentile of portfolio size
    double z_pct = 25.0;  // price-drop threshold for non-stablecoins
    double s_pct = 10.0;  // drop-below-peg threshold for stablecoins
    double m_pct = 5.0;   // max share of a token's own market cap
    double v_pct = 10.0;  // max share of average daily market volume
    int volume_avg_days = 30;  // averaging window behind market_day_volume_units
    double stable_peg = 1.0;   // stablecoin reference value in quote units
    std::vector<std::string> mcap_exempt;  // assets excused from the P4 cap
};

/// One asset's exposure as seen by the guard. Weights are combined across
/// all funds; market_day_volume_units is already averaged over the config's
/// volume_avg_days window.
struct HoldingSnapshot {
    std::string asset_id;
    double weight_pct = 0.0;
    double position_units = 0.0;
    double token_market_cap = 0.0;
    double reference_price = 0.0;  // baseline for the drop rule, caller-supplied
    double current_price = 0.0;
    bool is_stablecoin = false;
    bool confidence_lost = false;
    double planned_day_volume_units = 0.0;
    double market_day_volume_units = 0.0;
};

enum class RuleId {
    P1_WEIGHT_SOFT,
    P1_WEIGHT_HARD,
    P1_BAND_COUNT,
    P2_UNWIND,
    P3_DROP_HOLD,
    P3_STABLE_DEPEG,
    P4_MCAP_SHARE,
    P5_VOLUME_SHARE,
};

enum class Severity { advisory, breach };

struct Violation {
    RuleId rule_id;
    std::string asset_id;  // empty for portfolio-level findings
    double measured_value = 0.0;
    double threshold = 0.0;
    Severity severity = Severity::advisory;
};

struct GuardReport {
    std::vector<Violation> violations;
    bool clean() const { return violations.empty(); }
};

const char* rule_name(RuleId id);
const char* severity_name(Severity s);

/// Throws ConfigError unless 0 < x <= y <= 100, n_max >= 0, the remaining
/// percentage thresholds sit in (0, 100], volume_avg_days >= 1 and
/// stable_peg > 0.
void validate_config(const GuardConfig& cfg);

/// Band-count limit for the current portfolio size. Fixed-count mode returns
/// n_max as-is; percentile mode resolves it by nearest rank, i.e.
/// ceil(n_max/100 * n_assets).
double resolve_band_limit(const GuardConfig& cfg, std::size_t n_assets);

// The five checks. Each one inspects only its own inputs and uses strict
// inequality at the threshold: a value equal to the limit never violates.
std::vector<Violation> check_weights(const std::vector<HoldingSnapshot>& holdings,
                                     const GuardConfig& cfg);
std::vector<Violation> check_unwind(const std::vector<HoldingSnapshot>& holdings);
std::vector<Violation> check_drawdown(const std::vector<HoldingSnapshot>& holdings,
                                      const GuardConfig& cfg);
std::vector<Violation> check_mcap_share(const std::vector<HoldingSnapshot>& holdings,
                                        const GuardConfig& cfg);
std::vector<Violation> check_volume_share(const std::vector<HoldingSnapshot>& holdings,
                                          const GuardConfig& cfg);

/// Runs all five checks and returns their union, ordered by rule then asset.
GuardReport run_guard(const std::vector<HoldingSnapshot>& holdings,
                      const GuardConfig& cfg);

GuardConfig load_config(const std::string& path);
void save_config(const GuardConfig& cfg, std::ostream& out);

/// One line per violation: rule, severity, scope, measured value, threshold.
std::string format_violation(const Violation& v);

}  // namespace crisk::guard
