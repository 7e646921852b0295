#pragma once

#include <string>
#include <vector>

#include "crisk/date.hpp"

namespace crisk::ledger {

/// One signed trade. amount > 0 buys, amount < 0 sells; the first trade for
/// an asset must be a buy (no short sales anywhere in this engine).
struct Trade {
    long seq = 0;  // 1-based per-asset index, consecutive
    Date day;
    std::string asset_id;
    double amount = 0.0;  // asset units, never 0
    double price = 0.0;   // quote currency, > 0
};

/// Per-asset accounting state under weighted-average-cost.
///
/// wavg_price is 0 until the first buy and is never reset afterwards, not
/// even on full liquidation: the next buy recomputes the basis as
/// (wavg * 0 + a * p) / a = p on its own.
struct LedgerState {
    std::string asset_id;
    double position = 0.0;      // >= 0, no shorts
    double wavg_price = 0.0;    // weighted-average buy price
    double realized_pnl = 0.0;  // cumulative, priced against wavg at sale time
    long last_seq = 0;
};

struct PnlSnapshot {
    long as_of_seq = 0;
    double mark_price = 0.0;
    double unrealized_pnl = 0.0;
    double realized_pnl = 0.0;
    double unrealized_return = 0.0;
    double realized_return = 0.0;
};

/// Applies one trade and returns the next state.
///
/// Buys move the weighted-average price to (wavg*pos + a*p) / (pos + a) and
/// leave realized P&L alone; sells leave the basis untouched and realize
/// |a| * (p - wavg). Throws OversellError when a sell exceeds the position
/// and NoCostBasisError on a sell before any buy.
LedgerState apply_trade(const LedgerState& state, const Trade& trade);

/// Buy-only weighted mean price over a trade list; sells are ignored.
/// Throws NoCostBasisError when the list contains no buy.
double batch_wavg(const std::vector<Trade>& trades);

/// position * (mark - wavg); exactly 0 on a flat position.
double unrealized_pnl(const LedgerState& state, double mark_price);

/// Builds the P&L snapshot for the transition `state_before` -> `state_after`
/// under `trade`, marking the book at `mark`.
///
/// Realized return is carried unchanged on buys (pass the previous value in
/// `prev_realized_return`; 0 for the first trade) and is re-priced on sells
/// against the pre-sale basis: realized_pnl / (wavg_before * pos_before).
PnlSnapshot pnl_returns(const LedgerState& state_before, const LedgerState& state_after,
                        const Trade& trade, double mark, double prev_realized_return);

/// Replays a single asset's trades, threading the carried realized return
/// through pnl_returns so callers do not have to.
class AssetLedger {
public:
    explicit AssetLedger(std::string asset_id) { state_.asset_id = std::move(asset_id); }

    /// Applies the trade and returns the snapshot marked at the trade price.
    PnlSnapshot apply(const Trade& trade);

    /// Snapshot of the current state at an arbitrary mark price.
    PnlSnapshot snapshot(double mark_price) const;

    const LedgerState& state() const { return state_; }
    double realized_return() const { return realized_return_; }

private:
    LedgerState state_;
    double realized_return_ = 0.0;
};

}  // namespace crisk::ledger
