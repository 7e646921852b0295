#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace crisk::cri {

/// Per-asset inputs to the concentration score. The volatility horizon is
/// whatever the caller supplies (daily, 30-day, ...); funds refuse to mix
/// horizons, tracked through vol_horizon_days (0 = unspecified).
struct AssetRiskInput {
    std::string asset_id;
    double vol = 0.0;         // >= 0
    double market_cap = 0.0;  // > 0
    double weight = 0.0;      // [0, 1]
    int vol_horizon_days = 0;
};

enum class MarketMode {
    standard,          // market factor = MC / TMC; bigger share, less risk
    insurance_inverse  // reciprocal share; bigger liability share, more risk
};

struct MarketContext {
    double total_market_cap = 0.0;  // > 0, >= every asset market cap in scope
    MarketMode mode = MarketMode::standard;
};

/// A fund is a weight vector over assets; weights sum to 1 (single-asset
/// fund: k = 1, w = 1). Zero-weight entries contribute nothing to the score
/// but still count toward the asset count.
struct FundSpec {
    std::string fund_id;
    std::vector<AssetRiskInput> assets;
};

/// Three sub-funds (alpha, beta, gamma) mixed into the Parity composite.
/// correlations are (rho_ab, rho_ag, rho_gb); the implied 3x3 correlation
/// matrix is symmetric with unit diagonal by construction.
struct ParitySpec {
    std::array<FundSpec, 3> funds;
    std::array<double, 3> mix{};           // sums to 1
    std::array<double, 3> fund_returns{};  // (R_alpha, R_beta, R_gamma)
    std::array<double, 3> fund_vols{};     // (sigma_alpha, sigma_beta, sigma_gamma)
    std::array<double, 3> correlations{};  // (rho_ab, rho_ag, rho_gb), each in [-1, 1]
};

/// Asset allocation across blockchain networks.
struct ChainAllocation {
    struct Chain {
        std::string chain_id;
        double alloc_weight = 0.0;     // (0, 1], weights sum to 1
        double chain_market_cap = 0.0; // > 0 for the market-cap factor mode
    };
    std::vector<Chain> chains;
    std::size_t count() const { return chains.size(); }
};

enum class ChainMode { equal_split, mcap_proportional };

/// Throws unless weights sum to 1 (1e-9), every field is in range and all
/// entries agree on the volatility horizon.
void validate_fund(const FundSpec& fund);
void validate_parity(const ParitySpec& spec);
void validate_chains(const ChainAllocation& alloc, bool need_market_caps);

/// Standard mode: MC / TMC in (0, 1]. Insurance mode: the reciprocal ratio,
/// so a category holding a larger share of market-wide liabilities ends up
/// contributing more risk once the factor lands in the score's denominator.
double market_factor(const AssetRiskInput& asset, const MarketContext& ctx);

/// Concentration risk indicator: (1/k) * sum_i (vol_i / m_i) * w_i^2.
/// Lower is better. A single-asset fund reduces to vol / m.
double cri_portfolio(const FundSpec& fund, const MarketContext& ctx);

/// Parity return: mix-weighted sum of the three fund returns.
double parity_return(const ParitySpec& spec);

/// Parity volatility, expanded three-fund form. Negative variance from
/// inconsistent correlations throws InvalidCorrelationError, never NaN.
double parity_vol(const ParitySpec& spec);

/// Same quantity through the covariance matrix: sqrt(w' X w).
double parity_vol_matrix(const ParitySpec& spec);

/// Parity CRI, built bottom-up: every asset keeps its own vol and market
/// factor, its weight is multiplied by its fund's mix weight, and the score
/// runs over all K asset slots across the three funds (duplicates of one
/// asset held in two funds are NOT merged).
double parity_cri(const std::array<FundSpec, 3>& funds, const std::array<double, 3>& mix,
                  const MarketContext& ctx);

/// Multiple-chain factor against an even split: (1/N^2) * sum_i (1/CW_i).
/// Equals 1 exactly when every chain carries 1/N; > 1 otherwise.
double multichain_factor_equal(const ChainAllocation& alloc);

/// Multiple-chain factor against market-cap-proportional allocation:
/// (1/N) * (1/sum MC) * sum_i (MC_i / CW_i). Equals 1 at proportional split.
double multichain_factor_mcap(const ChainAllocation& alloc);

/// Chain-count benefit: divides the factor by N, rewarding more chains.
double multichain_benefit(double mcf, std::size_t n_chains);

/// fund_cri * MCF(mode), with the optional extra 1/N benefit applied.
double cri_multichain(double fund_cri, const ChainAllocation& alloc, ChainMode mode,
                      bool apply_benefit);

}  // namespace crisk::cri
