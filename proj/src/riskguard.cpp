#include "crisk/riskguard.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include "crisk/errors.hpp"
#include "crisk/flatcfg.hpp"

namespace crisk::guard {

namespace {

void validate_holding(const HoldingSnapshot& h) {
    if (h.weight_pct < 0.0) {
        throw DomainError("asset '" + h.asset_id + "': negative weight");
    }
    if (h.planned_day_volume_units < 0.0 || h.market_day_volume_units < 0.0) {
        throw DomainError("asset '" + h.asset_id + "': negative volume");
    }
}

bool is_exempt(const GuardConfig& cfg, const std::string& asset_id) {
    return std::find(cfg.mcap_exempt.begin(), cfg.mcap_exempt.end(), asset_id) !=
           cfg.mcap_exempt.end();
}

void require_pct(double value, const char* key) {
    if (!(value > 0.0) || value > 100.0) {
        throw ConfigError(std::string(key) + " must lie in (0, 100]");
    }
}

}  // namespace

const char* rule_name(RuleId id) {
    switch (id) {
        case RuleId::P1_WEIGHT_SOFT: return "P1_WEIGHT_SOFT";
        case RuleId::P1_WEIGHT_HARD: return "P1_WEIGHT_HARD";
        case RuleId::P1_BAND_COUNT: return "P1_BAND_COUNT";
        case RuleId::P2_UNWIND: return "P2_UNWIND";
        case RuleId::P3_DROP_HOLD: return "P3_DROP_HOLD";
        case RuleId::P3_STABLE_DEPEG: return "P3_STABLE_DEPEG";
        case RuleId::P4_MCAP_SHARE: return "P4_MCAP_SHARE";
        case RuleId::P5_VOLUME_SHARE: return "P5_VOLUME_SHARE";
    }
    return "UNKNOWN";
}

const char* severity_name(Severity s) {
    return s == Severity::advisory ? "advisory" : "breach";
}

void validate_config(const GuardConfig& cfg) {
    require_pct(cfg.x_pct, "x_pct");
    require_pct(cfg.y_pct, "y_pct");
    if (cfg.x_pct > cfg.y_pct) {
        throw ConfigError("x_pct must not exceed y_pct");
    }
    if (cfg.n_max < 0.0) {
        throw ConfigError("n_max must be non-negative");
    }
    if (cfg.n_is_percentile && cfg.n_max > 100.0) {
        throw ConfigError("n_max as a percentile must lie in [0, 100]");
    }
    require_pct(cfg.z_pct, "z_pct");
    require_pct(cfg.s_pct, "s_pct");
    require_pct(cfg.m_pct, "m_pct");
    require_pct(cfg.v_pct, "v_pct");
    if (cfg.volume_avg_days < 1) {
        throw ConfigError("volume_avg_days must be at least 1");
    }
    if (!(cfg.stable_peg > 0.0)) {
        throw ConfigError("stable_peg must be positive");
    }
}

double resolve_band_limit(const GuardConfig& cfg, std::size_t n_assets) {
    if (!cfg.n_is_percentile) return cfg.n_max;
    return std::ceil(cfg.n_max / 100.0 * static_cast<double>(n_assets));
}

std::vector<Violation> check_weights(const std::vector<HoldingSnapshot>& holdings,
                                     const GuardConfig& cfg) {
    std::vector<Violation> out;
    std::size_t band_count = 0;
    for (const auto& h : holdings) {
        validate_holding(h);
        if (h.weight_pct > cfg.x_pct) {
            out.push_back({RuleId::P1_WEIGHT_SOFT, h.asset_id, h.weight_pct,
                           cfg.x_pct, Severity::advisory});
            if (h.weight_pct <= cfg.y_pct) ++band_count;
        }
        if (h.weight_pct > cfg.y_pct) {
            out.push_back({RuleId::P1_WEIGHT_HARD, h.asset_id, h.weight_pct,
                           cfg.y_pct, Severity::breach});
        }
    }
    const double limit = resolve_band_limit(cfg, holdings.size());
    if (static_cast<double>(band_count) > limit) {
        out.push_back({RuleId::P1_BAND_COUNT, "", static_cast<double>(band_count),
                       limit, Severity::breach});
    }
    return out;
}

std::vector<Violation> check_unwind(const std::vector<HoldingSnapshot>& holdings) {
    std::vector<Violation> out;
    for (const auto& h : holdings) {
        validate_holding(h);
        if (h.confidence_lost && h.position_units != 0.0) {
            out.push_back({RuleId::P2_UNWIND, h.asset_id, h.position_units, 0.0,
                           Severity::breach});
        }
    }
    return out;
}

std::vector<Violation> check_drawdown(const std::vector<HoldingSnapshot>& holdings,
                                      const GuardConfig& cfg) {
    std::vector<Violation> out;
    for (const auto& h : holdings) {
        validate_holding(h);
        // Stablecoins are judged against the configured peg; everything else
        // against the caller-supplied reference price.
        const double reference = h.is_stablecoin ? cfg.stable_peg : h.reference_price;
        if (!(reference > 0.0)) {
            throw DomainError("asset '" + h.asset_id +
                              "': non-positive reference price for drop rule");
        }
        const double drop_pct = 100.0 * (1.0 - h.current_price / reference);
        if (h.is_stablecoin) {
            if (drop_pct > cfg.s_pct) {
                out.push_back({RuleId::P3_STABLE_DEPEG, h.asset_id, drop_pct,
                               cfg.s_pct, Severity::breach});
            }
        } else if (drop_pct > cfg.z_pct) {
            out.push_back({RuleId::P3_DROP_HOLD, h.asset_id, drop_pct, cfg.z_pct,
                           Severity::advisory});
        }
    }
    return out;
}

std::vector<Violation> check_mcap_share(const std::vector<HoldingSnapshot>& holdings,
                                        const GuardConfig& cfg) {
    std::vector<Violation> out;
    for (const auto& h : holdings) {
        validate_holding(h);
        if (is_exempt(cfg, h.asset_id)) continue;
        const double position_value = h.position_units * h.current_price;
        if (position_value == 0.0) continue;
        if (!(h.token_market_cap > 0.0)) {
            throw DomainError("asset '" + h.asset_id +
                              "': non-positive token market cap");
        }
        const double share_pct = 100.0 * position_value / h.token_market_cap;
        if (share_pct > cfg.m_pct) {
            out.push_back({RuleId::P4_MCAP_SHARE, h.asset_id, share_pct, cfg.m_pct,
                           Severity::breach});
        }
    }
    return out;
}

std::vector<Violation> check_volume_share(const std::vector<HoldingSnapshot>& holdings,
                                          const GuardConfig& cfg) {
    std::vector<Violation> out;
    for (const auto& h : holdings) {
        validate_holding(h);
        if (h.planned_day_volume_units == 0.0) continue;
        if (!(h.market_day_volume_units > 0.0)) {
            throw DomainError("asset '" + h.asset_id +
                              "': zero market volume with planned trading");
        }
        const double share_pct =
            100.0 * h.planned_day_volume_units / h.market_day_volume_units;
        if (share_pct > cfg.v_pct) {
            out.push_back({RuleId::P5_VOLUME_SHARE, h.asset_id, share_pct, cfg.v_pct,
                           Severity::breach});
        }
    }
    return out;
}

GuardReport run_guard(const std::vector<HoldingSnapshot>& holdings,
                      const GuardConfig& cfg) {
    validate_config(cfg);
    GuardReport report;
    auto append = [&report](std::vector<Violation> batch) {
        for (auto& v : batch) report.violations.push_back(std::move(v));
    };
    append(check_weights(holdings, cfg));
    append(check_unwind(holdings));
    append(check_drawdown(holdings, cfg));
    append(check_mcap_share(holdings, cfg));
    append(check_volume_share(holdings, cfg));
    std::stable_sort(report.violations.begin(), report.violations.end(),
                     [](const Violation& a, const Violation& b) {
                         if (a.rule_id != b.rule_id) return a.rule_id < b.rule_id;
                         return a.asset_id < b.asset_id;
                     });
    return report;
}

GuardConfig load_config(const std::string& path) {
    cfg::FlatConfig file = cfg::FlatConfig::parse_file(path);
    GuardConfig out;
    for (const auto& [key, value] : file.entries()) {
        if (key == "x_pct") out.x_pct = cfg::parse_double(value, key);
        else if (key == "y_pct") out.y_pct = cfg::parse_double(value, key);
        else if (key == "n_max") out.n_max = cfg::parse_double(value, key);
        else if (key == "n_is_percentile")
            out.n_is_percentile = file.get_bool(key, false);
        else if (key == "z_pct") out.z_pct = cfg::parse_double(value, key);
        else if (key == "s_pct") out.s_pct = cfg::parse_double(value, key);
        else if (key == "m_pct") out.m_pct = cfg::parse_double(value, key);
        else if (key == "v_pct") out.v_pct = cfg::parse_double(value, key);
        else if (key == "volume_avg_days")
            out.volume_avg_days = static_cast<int>(cfg::parse_long(value, key));
        else if (key == "stable_peg") out.stable_peg = cfg::parse_double(value, key);
        else if (key == "mcap_exempt") {
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) {
                item = cfg::trim(item);
                if (!item.empty()) out.mcap_exempt.push_back(item);
            }
        } else {
            throw ConfigError("unknown guard config key '" + key + "'");
        }
    }
    validate_config(out);
    return out;
}

void save_config(const GuardConfig& cfg, std::ostream& out) {
    out << "x_pct = " << cfg.x_pct << "\n";
    out << "y_pct = " << cfg.y_pct << "\n";
    out << "n_max = " << cfg.n_max << "\n";
    out << "n_is_percentile = " << (cfg.n_is_percentile ? "true" : "false") << "\n";
    out << "z_pct = " << cfg.z_pct << "\n";
    out << "s_pct = " << cfg.s_pct << "\n";
    out << "m_pct = " << cfg.m_pct << "\n";
    out << "v_pct = " << cfg.v_pct << "\n";
    out << "volume_avg_days = " << cfg.volume_avg_days << "\n";
    out << "stable_peg = " << cfg.stable_peg << "\n";
    if (!cfg.mcap_exempt.empty()) {
        out << "mcap_exempt = ";
        for (std::size_t i = 0; i < cfg.mcap_exempt.size(); ++i) {
            if (i) out << ",";
            out << cfg.mcap_exempt[i];
        }
        out << "\n";
    }
}

std::string format_violation(const Violation& v) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-16s %-9s %-12s measured=%.6f threshold=%.6f",
                  rule_name(v.rule_id), severity_name(v.severity),
                  v.asset_id.empty() ? "(portfolio)" : v.asset_id.c_str(),
                  v.measured_value, v.threshold);
    return buf;
}

}  // namespace crisk::guard
