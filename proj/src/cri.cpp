#include "crisk/cri.hpp"

#include <cmath>
#include <string>

#include "crisk/errors.hpp"

namespace crisk::cri {

namespace {

constexpr double kWeightSumTol = 1e-9;

// Rounding slack for variance expressions that are exactly 0 in real
// arithmetic (e.g. a perfect two-fund hedge). Anything more negative is a
// genuinely inconsistent correlation set.
constexpr double kVarianceSlack = 1e-12;

void validate_asset(const AssetRiskInput& a, const std::string& fund_id) {
    const std::string where = "fund '" + fund_id + "', asset '" + a.asset_id + "'";
    if (a.vol < 0.0) throw DomainError(where + ": negative volatility");
    if (!(a.market_cap > 0.0)) throw DomainError(where + ": market cap must be positive");
    if (a.weight < 0.0 || a.weight > 1.0) throw DomainError(where + ": weight outside [0, 1]");
}

double checked_sqrt(double variance, double scale) {
    if (variance < 0.0) {
        if (variance < -kVarianceSlack * std::max(1.0, scale)) {
            throw InvalidCorrelationError(
                "correlations imply negative parity variance (" +
                std::to_string(variance) + ")");
        }
        return 0.0;
    }
    return std::sqrt(variance);
}

}  // namespace

void validate_fund(const FundSpec& fund) {
    if (fund.assets.empty()) {
        throw EmptyPortfolioError("fund '" + fund.fund_id + "' has no assets");
    }
    double weight_sum = 0.0;
    int horizon = 0;
    for (const auto& a : fund.assets) {
        validate_asset(a, fund.fund_id);
        weight_sum += a.weight;
        if (a.vol_horizon_days != 0) {
            if (horizon == 0) {
                horizon = a.vol_horizon_days;
            } else if (horizon != a.vol_horizon_days) {
                throw ConfigError("fund '" + fund.fund_id +
                                  "' mixes volatility horizons (" +
                                  std::to_string(horizon) + "d and " +
                                  std::to_string(a.vol_horizon_days) + "d)");
            }
        }
    }
    if (std::abs(weight_sum - 1.0) > kWeightSumTol) {
        throw DomainError("fund '" + fund.fund_id + "' weights sum to " +
                          std::to_string(weight_sum) + ", expected 1");
    }
}

void validate_parity(const ParitySpec& spec) {
    const double mix_sum = spec.mix[0] + spec.mix[1] + spec.mix[2];
    if (std::abs(mix_sum - 1.0) > kWeightSumTol) {
        throw DomainError("parity mix weights sum to " + std::to_string(mix_sum) +
                          ", expected 1");
    }
    for (double w : spec.mix) {
        if (w < 0.0 || w > 1.0) throw DomainError("parity mix weight outside [0, 1]");
    }
    for (double v : spec.fund_vols) {
        if (v < 0.0) throw DomainError("negative fund volatility in parity spec");
    }
    for (double rho : spec.correlations) {
        if (rho < -1.0 || rho > 1.0) {
            throw InvalidCorrelationError("correlation " + std::to_string(rho) +
                                          " outside [-1, 1]");
        }
    }
}

void validate_chains(const ChainAllocation& alloc, bool need_market_caps) {
    if (alloc.chains.empty()) throw DomainError("chain allocation is empty");
    double sum = 0.0;
    for (const auto& c : alloc.chains) {
        if (!(c.alloc_weight > 0.0)) {
            throw DomainError("chain '" + c.chain_id + "' has non-positive allocation weight");
        }
        if (need_market_caps && !(c.chain_market_cap > 0.0)) {
            throw DomainError("chain '" + c.chain_id + "' has non-positive market cap");
        }
        sum += c.alloc_weight;
    }
    if (std::abs(sum - 1.0) > kWeightSumTol) {
        throw DomainError("chain allocation weights sum to " + std::to_string(sum) +
                          ", expected 1");
    }
}

double market_factor(const AssetRiskInput& asset, const MarketContext& ctx) {
    if (!(ctx.total_market_cap > 0.0)) {
        throw DomainError("total market cap must be positive");
    }
    if (!(asset.market_cap > 0.0)) {
        throw DomainError("asset '" + asset.asset_id + "': market cap must be positive");
    }
    if (asset.market_cap > ctx.total_market_cap) {
        throw DomainError("asset '" + asset.asset_id +
                          "': market cap exceeds total market cap");
    }
    const double share = asset.market_cap / ctx.total_market_cap;
    return ctx.mode == MarketMode::standard ? share : 1.0 / share;
}

double cri_portfolio(const FundSpec& fund, const MarketContext& ctx) {
    validate_fund(fund);
    const double k = static_cast<double>(fund.assets.size());
    double sum = 0.0;
    for (const auto& a : fund.assets) {
        const double m = market_factor(a, ctx);
        sum += (a.vol / m) * a.weight * a.weight;
    }
    return sum / k;
}

double parity_return(const ParitySpec& spec) {
    validate_parity(spec);
    return spec.fund_returns[0] * spec.mix[0] + spec.fund_returns[1] * spec.mix[1] +
           spec.fund_returns[2] * spec.mix[2];
}

double parity_vol(const ParitySpec& spec) {
    validate_parity(spec);
    const auto& w = spec.mix;
    const auto& s = spec.fund_vols;
    const double rho_ab = spec.correlations[0];
    const double rho_ag = spec.correlations[1];
    const double rho_gb = spec.correlations[2];

    const double diag = s[0] * s[0] * w[0] * w[0] + s[1] * s[1] * w[1] * w[1] +
                        s[2] * s[2] * w[2] * w[2];
    const double cross = 2.0 * w[0] * w[1] * s[0] * s[1] * rho_ab +
                         2.0 * w[0] * w[2] * s[0] * s[2] * rho_ag +
                         2.0 * w[2] * w[1] * s[2] * s[1] * rho_gb;
    return checked_sqrt(diag + cross, diag);
}

double parity_vol_matrix(const ParitySpec& spec) {
    validate_parity(spec);
    const auto& w = spec.mix;
    const auto& s = spec.fund_vols;
    // covariance matrix X = D rho D with D = diag(fund vols)
    double x[3][3];
    const double rho[3][3] = {
        {1.0, spec.correlations[0], spec.correlations[1]},
        {spec.correlations[0], 1.0, spec.correlations[2]},
        {spec.correlations[1], spec.correlations[2], 1.0},
    };
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            x[i][j] = s[i] * s[j] * rho[i][j];
        }
    }
    double quad = 0.0;
    double diag = 0.0;
    for (int i = 0; i < 3; ++i) {
        diag += w[i] * w[i] * x[i][i];
        for (int j = 0; j < 3; ++j) {
            quad += w[i] * x[i][j] * w[j];
        }
    }
    return checked_sqrt(quad, diag);
}

double parity_cri(const std::array<FundSpec, 3>& funds, const std::array<double, 3>& mix,
                  const MarketContext& ctx) {
    const double mix_sum = mix[0] + mix[1] + mix[2];
    if (std::abs(mix_sum - 1.0) > kWeightSumTol) {
        throw DomainError("parity mix weights sum to " + std::to_string(mix_sum) +
                          ", expected 1");
    }

    std::size_t total_assets = 0;
    for (std::size_t f = 0; f < 3; ++f) {
        if (funds[f].assets.empty()) {
            if (mix[f] != 0.0) {
                throw EmptyPortfolioError("fund '" + funds[f].fund_id +
                                          "' is empty but has parity weight " +
                                          std::to_string(mix[f]));
            }
            continue;
        }
        validate_fund(funds[f]);
        total_assets += funds[f].assets.size();
    }
    if (total_assets == 0) {
        throw EmptyPortfolioError("all parity sub-funds are empty");
    }

    double sum = 0.0;
    for (std::size_t f = 0; f < 3; ++f) {
        for (const auto& a : funds[f].assets) {
            const double m = market_factor(a, ctx);
            const double wmod = a.weight * mix[f];
            sum += (a.vol / m) * wmod * wmod;
        }
    }
    return sum / static_cast<double>(total_assets);
}

double multichain_factor_equal(const ChainAllocation& alloc) {
    validate_chains(alloc, /*need_market_caps=*/false);
    const double n = static_cast<double>(alloc.count());
    double sum = 0.0;
    for (const auto& c : alloc.chains) sum += 1.0 / c.alloc_weight;
    return sum / (n * n);
}

double multichain_factor_mcap(const ChainAllocation& alloc) {
    validate_chains(alloc, /*need_market_caps=*/true);
    const double n = static_cast<double>(alloc.count());
    double total_mc = 0.0;
    for (const auto& c : alloc.chains) total_mc += c.chain_market_cap;
    double sum = 0.0;
    for (const auto& c : alloc.chains) sum += c.chain_market_cap / c.alloc_weight;
    return sum / (n * total_mc);
}

double multichain_benefit(double mcf, std::size_t n_chains) {
    if (mcf < 0.0) throw DomainError("chain factor must be non-negative");
    if (n_chains == 0) throw DomainError("chain count must be positive");
    return mcf / static_cast<double>(n_chains);
}

double cri_multichain(double fund_cri, const ChainAllocation& alloc, ChainMode mode,
                      bool apply_benefit) {
    if (fund_cri < 0.0) throw DomainError("fund CRI must be non-negative");
    const double mcf = mode == ChainMode::equal_split ? multichain_factor_equal(alloc)
                                                      : multichain_factor_mcap(alloc);
    const double scaled = fund_cri * mcf;
    return apply_benefit ? multichain_benefit(scaled, alloc.count()) : scaled;
}

}  // namespace crisk::cri
