#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "crisk/errors.hpp"
#include "crisk/ledger.hpp"

using namespace crisk;
using namespace crisk::ledger;

namespace {

Trade make_trade(long seq, double amount, double price) {
    Trade t;
    t.seq = seq;
    t.day = Date::parse("2024-01-01").plus_days(static_cast<int>(seq) - 1);
    t.asset_id = "X";
    t.amount = amount;
    t.price = price;
    return t;
}

}  // namespace

TEST_CASE("first buy establishes position and basis") {
    LedgerState s;
    s.asset_id = "X";
    s = apply_trade(s, make_trade(1, 10.0, 100.0));
    CHECK(s.position == 10.0);
    CHECK(s.wavg_price == 100.0);
    CHECK(s.realized_pnl == 0.0);
    CHECK(s.last_seq == 1);
}

TEST_CASE("a second buy moves the weighted average price") {
    LedgerState s;
    s.asset_id = "X";
    s = apply_trade(s, make_trade(1, 10.0, 100.0));
    s = apply_trade(s, make_trade(2, 10.0, 200.0));
    CHECK(s.position == 20.0);
    CHECK(s.wavg_price == 150.0);  // (100*10 + 200*10) / 20
    CHECK(s.realized_pnl == 0.0);
}

TEST_CASE("a sell realizes against the basis and keeps it") {
    LedgerState s;
    s.asset_id = "X";
    s = apply_trade(s, make_trade(1, 10.0, 100.0));
    s = apply_trade(s, make_trade(2, 10.0, 200.0));
    s = apply_trade(s, make_trade(3, -5.0, 180.0));
    CHECK(s.position == 15.0);
    CHECK(s.wavg_price == 150.0);
    CHECK(s.realized_pnl == 150.0);  // 5 * (180 - 150)
}

TEST_CASE("oversell is rejected with the shortfall, never clamped") {
    LedgerState s;
    s.asset_id = "X";
    s = apply_trade(s, make_trade(1, 10.0, 100.0));
    try {
        apply_trade(s, make_trade(2, -12.0, 110.0));
        FAIL("expected an oversell rejection");
    } catch (const OversellError& e) {
        CHECK(e.shortfall() == doctest::Approx(2.0));
    }
    CHECK(s.position == 10.0);
}

TEST_CASE("selling before any buy has no cost basis") {
    LedgerState s;
    s.asset_id = "X";
    CHECK_THROWS_AS(apply_trade(s, make_trade(1, -5.0, 100.0)), NoCostBasisError);
}

TEST_CASE("trades must arrive in sequence") {
    LedgerState s;
    s.asset_id = "X";
    s = apply_trade(s, make_trade(1, 10.0, 100.0));
    CHECK_THROWS_AS(apply_trade(s, make_trade(3, 1.0, 100.0)), DomainError);
    CHECK_THROWS_AS(apply_trade(s, make_trade(1, 1.0, 100.0)), DomainError);
}

TEST_CASE("zero amounts and non-positive prices are rejected") {
    LedgerState s;
    s.asset_id = "X";
    CHECK_THROWS_AS(apply_trade(s, make_trade(1, 0.0, 100.0)), DomainError);
    CHECK_THROWS_AS(apply_trade(s, make_trade(1, 1.0, 0.0)), DomainError);
    CHECK_THROWS_AS(apply_trade(s, make_trade(1, 1.0, -5.0)), DomainError);
}

TEST_CASE("batch weighted average price uses buys only") {
    CHECK(batch_wavg({make_trade(1, 10.0, 100.0)}) == 100.0);
    CHECK(batch_wavg({make_trade(1, 10.0, 100.0), make_trade(2, -3.0, 500.0),
                      make_trade(3, 10.0, 200.0)}) == 150.0);
    CHECK(batch_wavg({make_trade(1, 1.0, 100.0), make_trade(2, 3.0, 200.0)}) == 175.0);
    CHECK_THROWS_AS(batch_wavg({}), NoCostBasisError);
    CHECK_THROWS_AS(batch_wavg({make_trade(1, -1.0, 100.0)}), NoCostBasisError);
}

TEST_CASE("unrealized pnl marks the open position against the basis") {
    LedgerState s;
    s.asset_id = "X";
    CHECK(unrealized_pnl(s, 123.0) == 0.0);
    s.position = 10.0;
    s.wavg_price = 100.0;
    CHECK(unrealized_pnl(s, 100.0) == 0.0);
    s.position = 15.0;
    s.wavg_price = 150.0;
    CHECK(unrealized_pnl(s, 140.0) == -150.0);
}

TEST_CASE("returns follow the buy/sell case split") {
    AssetLedger led("X");

    // first trade: nothing realized yet
    PnlSnapshot snap = led.apply(make_trade(1, 10.0, 100.0));
    CHECK(snap.realized_return == 0.0);
    CHECK(snap.unrealized_return == 0.0);

    // marking 10% above the basis
    snap = led.snapshot(110.0);
    CHECK(snap.unrealized_return == doctest::Approx(0.10).epsilon(1e-14));
    CHECK(snap.unrealized_pnl == doctest::Approx(100.0));

    // build up to pos 20 @ wavg 150, then sell 5 @ 180
    led.apply(make_trade(2, 10.0, 200.0));
    snap = led.apply(make_trade(3, -5.0, 180.0));
    CHECK(snap.realized_pnl == doctest::Approx(150.0));
    CHECK(snap.realized_return == doctest::Approx(150.0 / (150.0 * 20.0)).epsilon(1e-14));

    // a following buy carries the realized return forward
    snap = led.apply(make_trade(4, 1.0, 100.0));
    CHECK(snap.realized_return == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("unrealized return is zero on a flat book") {
    AssetLedger led("X");
    led.apply(make_trade(1, 10.0, 100.0));
    const PnlSnapshot snap = led.apply(make_trade(2, -10.0, 120.0));
    CHECK(snap.unrealized_pnl == 0.0);
    CHECK(snap.unrealized_return == 0.0);
}

TEST_CASE("full liquidation keeps the basis and the next buy resets it") {
    LedgerState s;
    s.asset_id = "X";
    s = apply_trade(s, make_trade(1, 10.0, 100.0));
    s = apply_trade(s, make_trade(2, -10.0, 120.0));
    CHECK(s.position == 0.0);
    CHECK(s.wavg_price == 100.0);
    s = apply_trade(s, make_trade(3, 4.0, 77.0));
    CHECK(s.wavg_price == 77.0);  // (100*0 + 77*4) / 4
    CHECK(s.position == 4.0);
}

TEST_CASE("replaying the same trades yields identical states") {
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> price(1.0, 200.0);
    std::uniform_real_distribution<double> qty(0.1, 5.0);
    std::vector<Trade> trades;
    double pos = 0.0;
    for (int i = 0; i < 60; ++i) {
        const bool buy = pos <= 0.0 || (rng() % 2 == 0);
        double amount = buy ? qty(rng) : -std::min(pos, qty(rng));
        trades.push_back(make_trade(i + 1, amount, price(rng)));
        pos += amount;
    }
    LedgerState a, b;
    a.asset_id = b.asset_id = "X";
    for (const auto& t : trades) a = apply_trade(a, t);
    for (const auto& t : trades) b = apply_trade(b, t);
    CHECK(a.position == b.position);
    CHECK(a.wavg_price == b.wavg_price);
    CHECK(a.realized_pnl == b.realized_pnl);
}

TEST_CASE("rolling basis equals the batch formula after every buy prefix") {
    std::mt19937_64 rng(8080);
    std::uniform_real_distribution<double> price(0.5, 900.0);
    std::uniform_real_distribution<double> qty(0.01, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
        LedgerState s;
        s.asset_id = "X";
        std::vector<Trade> prefix;
        for (int i = 0; i < 40; ++i) {
            prefix.push_back(make_trade(i + 1, qty(rng), price(rng)));
            s = apply_trade(s, prefix.back());
            const double batch = batch_wavg(prefix);
            CHECK(std::abs(s.wavg_price - batch) <= 1e-12 * batch);
        }
    }
}

TEST_CASE("sells leave the weighted average price bit-identical") {
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> price(0.5, 900.0);
    std::uniform_real_distribution<double> qty(0.01, 20.0);
    LedgerState s;
    s.asset_id = "X";
    long seq = 0;
    s = apply_trade(s, make_trade(++seq, 100.0, price(rng)));
    for (int i = 0; i < 200; ++i) {
        if (rng() % 2 == 0) {
            s = apply_trade(s, make_trade(++seq, qty(rng), price(rng)));
        } else {
            const double before = s.wavg_price;
            const double sell = std::min(s.position * 0.25, qty(rng));
            if (sell <= 0.0) continue;
            s = apply_trade(s, make_trade(++seq, -sell, price(rng)));
            CHECK(s.wavg_price == before);  // exact, not approximate
        }
    }
}

TEST_CASE("realized plus unrealized equals value minus net cash spent") {
    std::mt19937_64 rng(60601);
    std::uniform_real_distribution<double> price(1.0, 150.0);
    std::uniform_real_distribution<double> qty(0.1, 4.0);
    for (int trial = 0; trial < 300; ++trial) {
        LedgerState s;
        s.asset_id = "X";
        double cash_spent = 0.0;
        const int n = 1 + static_cast<int>(rng() % 80);
        double mark = 100.0;
        for (int i = 0; i < n; ++i) {
            const bool buy = s.position <= 0.0 || (rng() % 2 == 0);
            const double amount =
                buy ? qty(rng) : -std::min(s.position, qty(rng));
            if (amount == 0.0) continue;
            const Trade t = make_trade(s.last_seq + 1, amount, price(rng));
            s = apply_trade(s, t);
            cash_spent += t.amount * t.price;
            mark = t.price;
        }
        const double total = s.realized_pnl + unrealized_pnl(s, mark);
        const double oracle = s.position * mark - cash_spent;
        CHECK(std::abs(total - oracle) <= 1e-9);
    }
}
