#include "crisk/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "crisk/errors.hpp"
#include "crisk/flatcfg.hpp"
#include "crisk/ingest.hpp"
#include "crisk/ledger.hpp"
#include "crisk/numfmt.hpp"
#include "crisk/riskguard.hpp"

namespace crisk::report {

namespace {

int fund_index(const std::string& name) {
    for (int i = 0; i < 3; ++i) {
        if (name == FundsConfig::fund_names[i]) return i;
    }
    return -1;
}

struct SampleStats {
    double mean = 0.0;
    double sd = 0.0;
};

SampleStats two_pass(const std::vector<double>& xs) {
    SampleStats st;
    if (xs.empty()) return st;
    for (double x : xs) st.mean += x;
    st.mean /= static_cast<double>(xs.size());
    if (xs.size() < 2) return st;
    double ss = 0.0;
    for (double x : xs) ss += (x - st.mean) * (x - st.mean);
    st.sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
    return st;
}

// Sample correlation; degenerate (zero-variance) inputs map to 0.
double sample_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const SampleStats sa = two_pass(a);
    const SampleStats sb = two_pass(b);
    if (sa.sd == 0.0 || sb.sd == 0.0) return 0.0;
    double cov = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        cov += (a[i] - sa.mean) * (b[i] - sb.mean);
    }
    cov /= static_cast<double>(a.size() - 1);
    return cov / (sa.sd * sb.sd);
}

struct AssetStats {
    double daily_mean = 0.0;
    double daily_vol = 0.0;
    double period_return = 0.0;
    double period_vol = 0.0;
    double last_price = 0.0;
    double last_mcap = 0.0;
};

AssetStats asset_stats(const timeseries::PriceSeries& s, const MetricsOptions& opt) {
    const timeseries::ReturnSeries rets = timeseries::daily_returns(s);
    const timeseries::VolEstimate ve =
        timeseries::rolling_vol(rets, s.back().day, opt.window);
    AssetStats st;
    st.daily_mean = ve.mean_return;
    st.daily_vol = ve.daily_vol;
    st.period_vol = timeseries::scale_vol(ve.daily_vol, opt.horizon);
    st.period_return = opt.use_horizon_return
                           ? timeseries::horizon_return(s, s.back().day, opt.horizon)
                           : ve.mean_return * static_cast<double>(opt.horizon);
    st.last_price = s.back().price;
    st.last_mcap = s.back().market_cap;
    return st;
}

std::optional<double> risk_adjusted(double daily_mean, double daily_vol,
                                    const MetricsOptions& opt) {
    if (!opt.risk_free_pct) return std::nullopt;
    const double ann_return = daily_mean * static_cast<double>(opt.annualize_days);
    const double ann_vol = timeseries::scale_vol(daily_vol, opt.annualize_days);
    const double excess = ann_return - *opt.risk_free_pct / 100.0;
    if (ann_vol > 0.0) return excess / ann_vol;
    if (excess == 0.0) return 0.0;
    return excess > 0.0 ? std::numeric_limits<double>::infinity()
                        : -std::numeric_limits<double>::infinity();
}

}  // namespace

FundsConfig load_funds_config(const std::filesystem::path& path) {
    const cfg::FlatConfig file = cfg::FlatConfig::parse_file(path);
    FundsConfig out;
    std::array<std::optional<double>, 3> mix;

    for (const auto& [key, value] : file.entries()) {
        if (key.rfind("fund.", 0) == 0) {
            const std::string rest = key.substr(5);
            const std::size_t dot = rest.find('.');
            if (dot == std::string::npos || dot == 0 || dot + 1 >= rest.size()) {
                throw ConfigError("malformed funds config key '" + key +
                                  "', expected fund.<name>.<asset>");
            }
            const std::string name = rest.substr(0, dot);
            const std::string asset = rest.substr(dot + 1);
            const int idx = fund_index(name);
            if (idx < 0) {
                throw ConfigError("unknown fund '" + name + "' in key '" + key +
                                  "' (expected alpha, beta or gamma)");
            }
            out.funds[idx].push_back({asset, cfg::parse_double(value, key)});
        } else if (key.rfind("mix.", 0) == 0) {
            const std::string name = key.substr(4);
            const int idx = fund_index(name);
            if (idx < 0) {
                throw ConfigError("unknown fund '" + name + "' in key '" + key + "'");
            }
            mix[static_cast<std::size_t>(idx)] = cfg::parse_double(value, key);
        } else {
            throw ConfigError("unknown funds config key '" + key + "'");
        }
    }

    const int mix_count = static_cast<int>(mix[0].has_value()) +
                          static_cast<int>(mix[1].has_value()) +
                          static_cast<int>(mix[2].has_value());
    if (mix_count == 3) {
        std::array<double, 3> m{*mix[0], *mix[1], *mix[2]};
        double sum = 0.0;
        for (double w : m) {
            if (w < 0.0 || w > 1.0) {
                throw ConfigError("mix weights must lie in [0, 1]");
            }
            sum += w;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ConfigError("mix weights sum to " + std::to_string(sum) +
                              ", expected 1");
        }
        out.mix = m;
    } else if (mix_count != 0) {
        throw ConfigError("mix weights must name all three funds or none");
    }

    bool any_assets = false;
    for (int f = 0; f < 3; ++f) {
        if (out.funds[f].empty()) continue;
        any_assets = true;
        double sum = 0.0;
        for (const auto& a : out.funds[f]) {
            if (a.weight < 0.0 || a.weight > 1.0) {
                throw ConfigError("fund '" + std::string(FundsConfig::fund_names[f]) +
                                  "': weight for '" + a.asset_id +
                                  "' outside [0, 1]");
            }
            sum += a.weight;
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ConfigError("fund '" + std::string(FundsConfig::fund_names[f]) +
                              "' weights sum to " + std::to_string(sum) +
                              ", expected 1");
        }
    }
    if (!any_assets) {
        throw ConfigError("funds config declares no assets");
    }
    return out;
}

std::vector<MetricsRow> compute_metrics_table(
    const std::map<std::string, timeseries::PriceSeries>& series,
    const std::optional<FundsConfig>& funds, const MetricsOptions& opt) {
    if (opt.window < 2) throw ConfigError("window must be at least 2");
    if (opt.horizon < 1) throw ConfigError("horizon must be at least 1");
    if (opt.annualize_days < 1) throw ConfigError("annualize-days must be at least 1");
    if (series.empty()) throw EmptyPortfolioError("no price series loaded");

    double tmc = 0.0;
    if (opt.total_market_cap_override) {
        tmc = *opt.total_market_cap_override;
    } else {
        for (const auto& [id, s] : series) tmc += s.back().market_cap;
    }
    const cri::MarketContext ctx{tmc, opt.mode};

    std::map<std::string, AssetStats> stats;
    for (const auto& [id, s] : series) stats.emplace(id, asset_stats(s, opt));

    std::vector<MetricsRow> rows;

    if (funds) {
        std::set<std::string> referenced;
        for (int f = 0; f < 3; ++f) {
            for (const auto& a : funds->funds[f]) {
                if (series.find(a.asset_id) == series.end()) {
                    throw ConfigError("fund '" +
                                      std::string(FundsConfig::fund_names[f]) +
                                      "' references unknown asset '" + a.asset_id +
                                      "'");
                }
                referenced.insert(a.asset_id);
            }
        }

        // One shared estimation window for everything fund-related: the
        // trailing `window` dates on which every referenced asset has a
        // return. Fund vols and the correlations behind the parity row then
        // describe the same sample.
        std::map<std::string, std::map<Date, double>> returns_by_asset;
        std::vector<Date> aligned;
        bool first = true;
        for (const auto& id : referenced) {
            const timeseries::ReturnSeries rs =
                timeseries::daily_returns(series.at(id));
            auto& m = returns_by_asset[id];
            std::vector<Date> dates;
            dates.reserve(rs.observations.size());
            for (const auto& obs : rs.observations) {
                m.emplace(obs.day, obs.log_return);
                dates.push_back(obs.day);
            }
            if (first) {
                aligned = std::move(dates);
                first = false;
            } else {
                std::vector<Date> merged;
                std::set_intersection(aligned.begin(), aligned.end(), dates.begin(),
                                      dates.end(), std::back_inserter(merged));
                aligned = std::move(merged);
            }
        }
        if (aligned.size() < 2) {
            throw InsufficientHistoryError(
                "fund assets share fewer than 2 aligned return dates");
        }
        if (aligned.size() > static_cast<std::size_t>(opt.window)) {
            aligned.erase(aligned.begin(),
                          aligned.end() - static_cast<std::ptrdiff_t>(opt.window));
        }

        struct FundDaily {
            bool declared = false;
            std::vector<double> returns;
            SampleStats stats;
            double period_return = 0.0;
            double period_vol = 0.0;
        };
        std::array<FundDaily, 3> fd;
        std::array<cri::FundSpec, 3> specs;

        for (int f = 0; f < 3; ++f) {
            specs[f].fund_id = FundsConfig::fund_names[f];
            fd[f].returns.assign(aligned.size(), 0.0);
            if (funds->funds[f].empty()) continue;
            fd[f].declared = true;
            for (const auto& a : funds->funds[f]) {
                const AssetStats& st = stats.at(a.asset_id);
                specs[f].assets.push_back({a.asset_id, st.period_vol, st.last_mcap,
                                           a.weight, opt.horizon});
                const auto& rmap = returns_by_asset.at(a.asset_id);
                for (std::size_t i = 0; i < aligned.size(); ++i) {
                    fd[f].returns[i] += a.weight * rmap.at(aligned[i]);
                }
            }
            fd[f].stats = two_pass(fd[f].returns);
            fd[f].period_vol = timeseries::scale_vol(fd[f].stats.sd, opt.horizon);
            if (opt.use_horizon_return) {
                double r = 0.0;
                for (const auto& a : funds->funds[f]) {
                    r += a.weight * timeseries::horizon_return(series.at(a.asset_id),
                                                               aligned.back(),
                                                               opt.horizon);
                }
                fd[f].period_return = r;
            } else {
                fd[f].period_return =
                    fd[f].stats.mean * static_cast<double>(opt.horizon);
            }
        }

        for (int f = 0; f < 3; ++f) {
            if (!fd[f].declared) continue;
            MetricsRow row;
            row.name = FundsConfig::fund_names[f];
            row.period_return = fd[f].period_return;
            row.period_vol = fd[f].period_vol;
            row.cri = cri::cri_portfolio(specs[f], ctx);
            row.risk_adjusted_return =
                risk_adjusted(fd[f].stats.mean, fd[f].stats.sd, opt);
            rows.push_back(std::move(row));
        }

        if (funds->mix) {
            cri::ParitySpec ps;
            ps.mix = *funds->mix;
            ps.fund_returns = {fd[0].period_return, fd[1].period_return,
                               fd[2].period_return};
            ps.fund_vols = {fd[0].period_vol, fd[1].period_vol, fd[2].period_vol};
            ps.correlations = {sample_correlation(fd[0].returns, fd[1].returns),
                               sample_correlation(fd[0].returns, fd[2].returns),
                               sample_correlation(fd[2].returns, fd[1].returns)};

            std::vector<double> parity_daily(aligned.size(), 0.0);
            for (std::size_t i = 0; i < aligned.size(); ++i) {
                for (int f = 0; f < 3; ++f) {
                    parity_daily[i] += ps.mix[f] * fd[f].returns[i];
                }
            }
            const SampleStats pstats = two_pass(parity_daily);

            MetricsRow row;
            row.name = "parity";
            row.period_return = cri::parity_return(ps);
            row.period_vol = cri::parity_vol(ps);
            row.cri = cri::parity_cri(specs, ps.mix, ctx);
            row.risk_adjusted_return = risk_adjusted(pstats.mean, pstats.sd, opt);
            rows.push_back(std::move(row));
        }
    }

    for (const auto& [id, s] : series) {
        const AssetStats& st = stats.at(id);
        cri::FundSpec one;
        one.fund_id = id;
        one.assets.push_back({id, st.period_vol, st.last_mcap, 1.0, opt.horizon});
        MetricsRow row;
        row.name = id;
        row.period_return = st.period_return;
        row.period_vol = st.period_vol;
        row.cri = cri::cri_portfolio(one, ctx);
        row.risk_adjusted_return = risk_adjusted(st.daily_mean, st.daily_vol, opt);
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string format_table(const std::vector<MetricsRow>& rows) {
    const bool with_ra = !rows.empty() && rows.front().risk_adjusted_return.has_value();
    std::size_t name_w = 4;
    for (const auto& r : rows) name_w = std::max(name_w, r.name.size());

    std::string out;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-*s  %15s  %15s  %15s", static_cast<int>(name_w),
                  "name", "period_return", "period_vol", "cri");
    out += buf;
    if (with_ra) {
        std::snprintf(buf, sizeof(buf), "  %15s", "risk_adjusted");
        out += buf;
    }
    out += '\n';
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof(buf), "%-*s  %15.6f  %15.6f  %15.6f",
                      static_cast<int>(name_w), r.name.c_str(), r.period_return,
                      r.period_vol, r.cri);
        out += buf;
        if (with_ra) {
            std::snprintf(buf, sizeof(buf), "  %15.6f", *r.risk_adjusted_return);
            out += buf;
        }
        out += '\n';
    }
    return out;
}

std::string format_csv(const std::vector<MetricsRow>& rows) {
    const bool with_ra = !rows.empty() && rows.front().risk_adjusted_return.has_value();
    std::string out = "name,period_return,period_vol,cri";
    if (with_ra) out += ",risk_adjusted_return";
    out += '\n';
    for (const auto& r : rows) {
        out += r.name;
        out += ',';
        out += format_double(r.period_return);
        out += ',';
        out += format_double(r.period_vol);
        out += ',';
        out += format_double(r.cri);
        if (with_ra) {
            out += ',';
            out += format_double(*r.risk_adjusted_return);
        }
        out += '\n';
    }
    return out;
}

namespace {

struct CliOptions {
    std::string series;
    std::string trades;
    std::string funds;
    std::string guard_config;
    std::string flags;
    int window = 90;
    int horizon = 30;
    int annualize_days = 365;
    double risk_free = 0.0;
    double total_market_cap = 0.0;
    std::string mode = "standard";
    std::string format = "table";
    bool horizon_return = false;
};

void add_metric_options(CLI::App* cmd, CliOptions& o, bool with_risk_free) {
    cmd->add_option("--series", o.series, "price series CSV file")->required();
    cmd->add_option("--funds", o.funds, "fund composition config file");
    cmd->add_option("--window", o.window,
                    "trailing window of daily returns behind the estimates")
        ->capture_default_str();
    cmd->add_option("--horizon", o.horizon, "horizon in days for the period columns")
        ->capture_default_str();
    if (with_risk_free) {
        cmd->add_option("--risk-free", o.risk_free,
                        "annual risk-free rate in percent; enables the "
                        "risk-adjusted column");
        cmd->add_option("--annualize-days", o.annualize_days,
                        "days per year for annualization")
            ->capture_default_str();
        cmd->add_flag("--horizon-return", o.horizon_return,
                      "period return as ln(P_t / P_{t-horizon}) instead of mean "
                      "daily return times horizon");
    }
    cmd->add_option("--mode", o.mode, "market factor mode")
        ->check(CLI::IsMember({"standard", "insurance"}))
        ->capture_default_str();
    cmd->add_option("--total-market-cap", o.total_market_cap,
                    "override the total market cap (default: sum of loaded "
                    "assets' latest caps)");
    cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"table", "csv"}))
        ->capture_default_str();
}

// True when the option exists on this subcommand and the user passed it.
bool option_set(const CLI::App* cmd, const std::string& name) {
    const CLI::Option* opt = cmd->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
}

MetricsOptions to_metrics_options(const CLI::App* cmd, const CliOptions& o) {
    MetricsOptions mo;
    mo.window = o.window;
    mo.horizon = o.horizon;
    mo.annualize_days = o.annualize_days;
    if (option_set(cmd, "--risk-free")) mo.risk_free_pct = o.risk_free;
    mo.mode = o.mode == "insurance" ? cri::MarketMode::insurance_inverse
                                    : cri::MarketMode::standard;
    if (cmd->get_option_no_throw("--horizon-return") != nullptr) {
        mo.use_horizon_return = o.horizon_return;
    }
    if (option_set(cmd, "--total-market-cap")) {
        mo.total_market_cap_override = o.total_market_cap;
    }
    return mo;
}

int run_metrics(const CLI::App* cmd, const CliOptions& o) {
    const auto series = ingest::load_series(o.series);
    std::optional<FundsConfig> funds;
    if (option_set(cmd, "--funds")) funds = load_funds_config(o.funds);
    const auto rows = compute_metrics_table(series, funds, to_metrics_options(cmd, o));
    std::cout << (o.format == "csv" ? format_csv(rows) : format_table(rows));
    return 0;
}

int run_cri(const CLI::App* cmd, const CliOptions& o) {
    const auto series = ingest::load_series(o.series);
    std::optional<FundsConfig> funds;
    if (option_set(cmd, "--funds")) funds = load_funds_config(o.funds);
    const auto rows = compute_metrics_table(series, funds, to_metrics_options(cmd, o));
    if (o.format == "csv") {
        std::string out = "name,cri\n";
        for (const auto& r : rows) {
            out += r.name;
            out += ',';
            out += format_double(r.cri);
            out += '\n';
        }
        std::cout << out;
    } else {
        std::size_t name_w = 4;
        for (const auto& r : rows) name_w = std::max(name_w, r.name.size());
        char buf[96];
        for (const auto& r : rows) {
            std::snprintf(buf, sizeof(buf), "%-*s  %15.6f\n",
                          static_cast<int>(name_w), r.name.c_str(), r.cri);
            std::cout << buf;
        }
    }
    return 0;
}

int run_parity(const CLI::App* cmd, const CliOptions& o) {
    const auto series = ingest::load_series(o.series);
    FundsConfig funds = load_funds_config(o.funds);
    if (!funds.mix) {
        throw ConfigError("funds config has no mix weights; the parity composite "
                          "needs mix.alpha, mix.beta and mix.gamma");
    }
    const auto rows =
        compute_metrics_table(series, funds, to_metrics_options(cmd, o));
    const auto it = std::find_if(rows.begin(), rows.end(),
                                 [](const MetricsRow& r) { return r.name == "parity"; });
    if (it == rows.end()) {
        throw ConfigError("parity row missing from metrics table");
    }
    if (o.format == "csv") {
        std::cout << "metric,value\n"
                  << "parity_return," << format_double(it->period_return) << '\n'
                  << "parity_vol," << format_double(it->period_vol) << '\n'
                  << "parity_cri," << format_double(it->cri) << '\n';
    } else {
        char buf[64];
        std::snprintf(buf, sizeof(buf), "parity_return  %15.6f\n", it->period_return);
        std::cout << buf;
        std::snprintf(buf, sizeof(buf), "parity_vol     %15.6f\n", it->period_vol);
        std::cout << buf;
        std::snprintf(buf, sizeof(buf), "parity_cri     %15.6f\n", it->cri);
        std::cout << buf;
    }
    return 0;
}

int run_pnl(const CLI::App* cmd, const CliOptions& o) {
    const auto trades = ingest::load_trades(o.trades);
    std::map<std::string, timeseries::PriceSeries> marks;
    if (option_set(cmd, "--series")) marks = ingest::load_series(o.series);

    struct PnlRowOut {
        std::string asset;
        double position, wavg, realized, unrealized, realized_ret, unrealized_ret;
    };
    std::vector<PnlRowOut> out_rows;
    double total_realized = 0.0;
    double total_unrealized = 0.0;
    for (const auto& [asset, list] : trades) {
        ledger::AssetLedger led(asset);
        for (const auto& t : list) led.apply(t);
        double mark = list.back().price;
        if (const auto it = marks.find(asset); it != marks.end()) {
            mark = it->second.back().price;
        }
        const ledger::PnlSnapshot snap = led.snapshot(mark);
        out_rows.push_back({asset, led.state().position, led.state().wavg_price,
                            snap.realized_pnl, snap.unrealized_pnl,
                            snap.realized_return, snap.unrealized_return});
        total_realized += snap.realized_pnl;
        total_unrealized += snap.unrealized_pnl;
    }

    if (o.format == "csv") {
        std::string out =
            "asset,position,wavg_price,realized_pnl,unrealized_pnl,"
            "realized_return,unrealized_return\n";
        for (const auto& r : out_rows) {
            out += r.asset + ',' + format_double(r.position) + ',' +
                   format_double(r.wavg) + ',' + format_double(r.realized) + ',' +
                   format_double(r.unrealized) + ',' + format_double(r.realized_ret) +
                   ',' + format_double(r.unrealized_ret) + '\n';
        }
        out += "TOTAL,,," + format_double(total_realized) + ',' +
               format_double(total_unrealized) + ",,\n";
        std::cout << out;
    } else {
        std::size_t name_w = 5;
        for (const auto& r : out_rows) name_w = std::max(name_w, r.asset.size());
        char buf[240];
        std::snprintf(buf, sizeof(buf),
                      "%-*s  %15s  %15s  %15s  %15s  %15s  %15s\n",
                      static_cast<int>(name_w), "asset", "position", "wavg_price",
                      "realized_pnl", "unrealized_pnl", "realized_ret",
                      "unrealized_ret");
        std::cout << buf;
        for (const auto& r : out_rows) {
            std::snprintf(buf, sizeof(buf),
                          "%-*s  %15.6f  %15.6f  %15.6f  %15.6f  %15.6f  %15.6f\n",
                          static_cast<int>(name_w), r.asset.c_str(), r.position,
                          r.wavg, r.realized, r.unrealized, r.realized_ret,
                          r.unrealized_ret);
            std::cout << buf;
        }
        std::snprintf(buf, sizeof(buf), "%-*s  %15s  %15s  %15.6f  %15.6f\n",
                      static_cast<int>(name_w), "TOTAL", "", "", total_realized,
                      total_unrealized);
        std::cout << buf;
    }
    return 0;
}

// Trailing-30-day peak price: the default drop-rule reference when the
// flags file does not override it.
double trailing_peak(const timeseries::PriceSeries& s, int days) {
    const Date cutoff = s.back().day.plus_days(-(days - 1));
    double peak = 0.0;
    for (const auto& obs : s.observations()) {
        if (obs.day >= cutoff && obs.price > peak) peak = obs.price;
    }
    return peak;
}

double average_recent_volume(const timeseries::PriceSeries& s, int days) {
    const std::size_t n =
        std::min(static_cast<std::size_t>(days), s.observations().size());
    double sum = 0.0;
    for (std::size_t i = s.observations().size() - n; i < s.observations().size();
         ++i) {
        sum += s.observations()[i].volume;
    }
    return sum / static_cast<double>(n);
}

int run_guard(const CLI::App* cmd, const CliOptions& o) {
    const auto series = ingest::load_series(o.series);

    guard::GuardConfig gc;
    if (option_set(cmd, "--guard-config")) gc = guard::load_config(o.guard_config);

    std::map<std::string, double> positions;
    if (option_set(cmd, "--trades")) {
        const auto trades = ingest::load_trades(o.trades);
        for (const auto& [asset, list] : trades) {
            if (series.find(asset) == series.end()) {
                throw ConfigError("no price series for traded asset '" + asset + "'");
            }
            ledger::LedgerState state;
            state.asset_id = asset;
            for (const auto& t : list) state = ledger::apply_trade(state, t);
            positions[asset] = state.position;
        }
    }

    std::set<std::string> stable;
    std::set<std::string> lost;
    std::map<std::string, double> planned;
    std::map<std::string, double> reference;
    if (option_set(cmd, "--flags")) {
        const cfg::FlatConfig flags = cfg::FlatConfig::parse_file(o.flags);
        for (const auto& [key, value] : flags.entries()) {
            const std::size_t dot = key.find('.');
            if (dot == std::string::npos || dot + 1 >= key.size()) {
                throw ConfigError("malformed guard flag key '" + key +
                                  "', expected <flag>.<asset>");
            }
            const std::string flag = key.substr(0, dot);
            const std::string asset = key.substr(dot + 1);
            if (series.find(asset) == series.end()) {
                throw ConfigError("guard flag '" + key +
                                  "' names an asset with no series");
            }
            if (flag == "stablecoin") {
                if (flags.get_bool(key, false)) stable.insert(asset);
            } else if (flag == "confidence_lost") {
                if (flags.get_bool(key, false)) lost.insert(asset);
            } else if (flag == "planned_volume") {
                planned[asset] = cfg::parse_double(value, key);
            } else if (flag == "reference_price") {
                reference[asset] = cfg::parse_double(value, key);
            } else {
                throw ConfigError("unknown guard flag '" + flag + "' in key '" + key +
                                  "'");
            }
        }
    }

    double total_value = 0.0;
    for (const auto& [asset, pos] : positions) {
        total_value += pos * series.at(asset).back().price;
    }

    std::vector<guard::HoldingSnapshot> holdings;
    for (const auto& [asset, s] : series) {
        guard::HoldingSnapshot h;
        h.asset_id = asset;
        h.current_price = s.back().price;
        h.token_market_cap = s.back().market_cap;
        const auto pos_it = positions.find(asset);
        h.position_units = pos_it != positions.end() ? pos_it->second : 0.0;
        h.weight_pct = total_value > 0.0
                           ? 100.0 * h.position_units * h.current_price / total_value
                           : 0.0;
        const auto ref_it = reference.find(asset);
        h.reference_price =
            ref_it != reference.end() ? ref_it->second : trailing_peak(s, 30);
        h.is_stablecoin = stable.count(asset) > 0;
        h.confidence_lost = lost.count(asset) > 0;
        const auto plan_it = planned.find(asset);
        h.planned_day_volume_units = plan_it != planned.end() ? plan_it->second : 0.0;
        h.market_day_volume_units = average_recent_volume(s, gc.volume_avg_days);
        holdings.push_back(std::move(h));
    }

    const guard::GuardReport report = guard::run_guard(holdings, gc);
    if (o.format == "csv") {
        std::string out = "rule,severity,asset,measured,threshold\n";
        for (const auto& v : report.violations) {
            out += std::string(guard::rule_name(v.rule_id)) + ',' +
                   guard::severity_name(v.severity) + ',' + v.asset_id + ',' +
                   format_double(v.measured_value) + ',' +
                   format_double(v.threshold) + '\n';
        }
        std::cout << out;
    } else if (report.clean()) {
        std::cout << "no violations\n";
    } else {
        for (const auto& v : report.violations) {
            std::cout << guard::format_violation(v) << '\n';
        }
    }
    return 0;
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
    CLI::App app{"Portfolio risk analytics: returns, volatility, concentration "
                 "scores, P&L and risk limits"};
    app.require_subcommand(1);

    CliOptions o;

    CLI::App* metrics = app.add_subcommand(
        "metrics", "Return, volatility and concentration table per asset and fund");
    add_metric_options(metrics, o, /*with_risk_free=*/true);

    CLI::App* cri_cmd =
        app.add_subcommand("cri", "Concentration scores per asset and fund");
    add_metric_options(cri_cmd, o, /*with_risk_free=*/false);

    CLI::App* parity = app.add_subcommand(
        "parity", "Composite return, volatility and concentration for the fund mix");
    add_metric_options(parity, o, /*with_risk_free=*/false);
    parity->get_option("--funds")->required();

    CLI::App* pnl =
        app.add_subcommand("pnl", "Positions and realized/unrealized P&L per asset");
    pnl->add_option("--trades", o.trades, "trades CSV file")->required();
    pnl->add_option("--series", o.series,
                    "price series CSV file for final marks (default: last trade "
                    "price)");
    pnl->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"table", "csv"}))
        ->capture_default_str();

    CLI::App* guard_cmd =
        app.add_subcommand("guard", "Evaluate the risk-limit rules against holdings");
    guard_cmd->add_option("--series", o.series, "price series CSV file")->required();
    guard_cmd->add_option("--trades", o.trades, "trades CSV file for positions");
    guard_cmd->add_option("--guard-config", o.guard_config,
                          "threshold config file (defaults apply when omitted)");
    guard_cmd->add_option("--flags", o.flags,
                          "per-asset flags: stablecoin.<asset>, "
                          "confidence_lost.<asset>, planned_volume.<asset>, "
                          "reference_price.<asset>");
    guard_cmd->add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"table", "csv"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (metrics->parsed()) return run_metrics(metrics, o);
        if (cri_cmd->parsed()) return run_cri(cri_cmd, o);
        if (parity->parsed()) return run_parity(parity, o);
        if (pnl->parsed()) return run_pnl(pnl, o);
        if (guard_cmd->parsed()) return run_guard(guard_cmd, o);
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace crisk::report
