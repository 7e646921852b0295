#include "crisk/ledger.hpp"

#include <cmath>
#include <string>

#include "crisk/errors.hpp"

namespace crisk::ledger {

LedgerState apply_trade(const LedgerState& state, const Trade& trade) {
    if (trade.amount == 0.0) {
        throw DomainError("trade " + std::to_string(trade.seq) + " for '" +
                          trade.asset_id + "' has zero amount");
    }
    if (!(trade.price > 0.0)) {
        throw DomainError("trade " + std::to_string(trade.seq) + " for '" +
                          trade.asset_id + "' has non-positive price");
    }
    if (trade.seq != state.last_seq + 1) {
        throw DomainError("trade sequence gap for '" + trade.asset_id + "': expected " +
                          std::to_string(state.last_seq + 1) + ", got " +
                          std::to_string(trade.seq));
    }

    LedgerState next = state;
    next.last_seq = trade.seq;
    if (trade.amount > 0.0) {
        next.wavg_price = (state.wavg_price * state.position + trade.amount * trade.price) /
                          (state.position + trade.amount);
        next.position = state.position + trade.amount;
    } else {
        if (state.wavg_price == 0.0) {
            throw NoCostBasisError("sell before any buy for '" + trade.asset_id + "'");
        }
        const double qty = -trade.amount;
        if (qty > state.position) {
            const double shortfall = qty - state.position;
            throw OversellError("oversell on '" + trade.asset_id + "': position " +
                                    std::to_string(state.position) + ", sell " +
                                    std::to_string(qty) + ", short by " +
                                    std::to_string(shortfall),
                                shortfall);
        }
        next.position = state.position - qty;
        next.realized_pnl = state.realized_pnl + qty * (trade.price - state.wavg_price);
    }
    return next;
}

double batch_wavg(const std::vector<Trade>& trades) {
    double cost = 0.0;
    double qty = 0.0;
    for (const auto& t : trades) {
        if (t.amount > 0.0) {
            cost += t.amount * t.price;
            qty += t.amount;
        }
    }
    if (qty == 0.0) {
        throw NoCostBasisError("no buy trades in batch");
    }
    return cost / qty;
}

double unrealized_pnl(const LedgerState& state, double mark_price) {
    if (state.position == 0.0) return 0.0;
    return state.position * (mark_price - state.wavg_price);
}

PnlSnapshot pnl_returns(const LedgerState& state_before, const LedgerState& state_after,
                        const Trade& trade, double mark, double prev_realized_return) {
    PnlSnapshot snap;
    snap.as_of_seq = state_after.last_seq;
    snap.mark_price = mark;
    snap.unrealized_pnl = unrealized_pnl(state_after, mark);
    snap.realized_pnl = state_after.realized_pnl;

    snap.unrealized_return =
        state_after.position > 0.0
            ? snap.unrealized_pnl / (state_after.wavg_price * state_after.position)
            : 0.0;

    if (trade.seq == 1) {
        snap.realized_return = 0.0;  // first trade is a buy; nothing realized yet
    } else if (trade.amount > 0.0) {
        snap.realized_return = prev_realized_return;
    } else {
        snap.realized_return =
            state_after.realized_pnl / (state_before.wavg_price * state_before.position);
    }
    return snap;
}

PnlSnapshot AssetLedger::apply(const Trade& trade) {
    const LedgerState before = state_;
    state_ = apply_trade(state_, trade);
    const PnlSnapshot snap = pnl_returns(before, state_, trade, trade.price, realized_return_);
    realized_return_ = snap.realized_return;
    return snap;
}

PnlSnapshot AssetLedger::snapshot(double mark_price) const {
    PnlSnapshot snap;
    snap.as_of_seq = state_.last_seq;
    snap.mark_price = mark_price;
    snap.unrealized_pnl = unrealized_pnl(state_, mark_price);
    snap.realized_pnl = state_.realized_pnl;
    snap.unrealized_return =
        state_.position > 0.0
            ? snap.unrealized_pnl / (state_.wavg_price * state_.position)
            : 0.0;
    snap.realized_return = realized_return_;
    return snap;
}

}  // namespace crisk::ledger
