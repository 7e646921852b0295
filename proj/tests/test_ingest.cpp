#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crisk/date.hpp"
#include "crisk/errors.hpp"
#include "crisk/ingest.hpp"

using namespace crisk;
using namespace crisk::ingest;

namespace {

std::filesystem::path write_file(const char* name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << text;
    return path;
}

constexpr const char* kSeriesHeader = "date,asset_id,price,market_cap,volume\n";
constexpr const char* kTradesHeader = "seq,date,asset_id,amount,price\n";

}  // namespace

TEST_CASE("a header-only file yields an empty result") {
    CHECK(load_series(write_file("crisk_s_empty.csv", kSeriesHeader)).empty());
    CHECK(load_trades(write_file("crisk_t_empty.csv", kTradesHeader)).empty());
}

TEST_CASE("missing or wrong headers are rejected on line one") {
    try {
        load_series(write_file("crisk_s_hdr.csv", "day,asset,px\n"));
        FAIL("expected a header rejection");
    } catch (const ParseError& e) {
        CHECK(e.line() == 1);
    }
    CHECK_THROWS_AS(load_series(write_file("crisk_s_empty2.csv", "")), ParseError);
    CHECK_THROWS_AS(load_trades(write_file("crisk_t_hdr.csv", kSeriesHeader)),
                    ParseError);
    // extra whitespace around header fields is tolerated
    CHECK_NOTHROW(load_series(write_file("crisk_s_hdr_ws.csv",
                                         " date , asset_id , price , market_cap , volume \n")));
}

TEST_CASE("an unreadable path is a configuration problem, not a parse problem") {
    CHECK_THROWS_AS(load_series("/nonexistent/nowhere.csv"), ConfigError);
    CHECK_THROWS_AS(load_trades("/nonexistent/nowhere.csv"), ConfigError);
}

TEST_CASE("rows group by asset and sort by date regardless of file order") {
    const auto path = write_file("crisk_s_order.csv",
                                 std::string(kSeriesHeader) +
                                     "2024-01-03,ETH,2510,300,5\n"
                                     "2024-01-01,BTC,42000,820,7\n"
                                     "2024-01-02,ETH,2505,299,4\n"
                                     "2024-01-01,ETH,2500,298,3\n"
                                     "\n"
                                     "2024-01-02,BTC,42100,821,8\n");
    const auto series = load_series(path);
    REQUIRE(series.size() == 2);
    const auto& eth = series.at("ETH");
    REQUIRE(eth.observations().size() == 3);
    CHECK(eth.observations()[0].day.to_string() == "2024-01-01");
    CHECK(eth.observations()[0].price == 2500.0);
    CHECK(eth.observations()[2].day.to_string() == "2024-01-03");
    CHECK(eth.observations()[2].volume == 5.0);
    const auto& btc = series.at("BTC");
    REQUIRE(btc.observations().size() == 2);
    CHECK(btc.observations()[1].market_cap == 821.0);
}

TEST_CASE("duplicate observations name the asset, date and offending line") {
    const auto path = write_file("crisk_s_dup.csv",
                                 std::string(kSeriesHeader) +
                                     "2024-01-01,BTC,100,1000,10\n"
                                     "2024-01-02,BTC,101,1000,10\n"
                                     "2024-01-01,BTC,99,1000,10\n");
    try {
        load_series(path);
        FAIL("expected a duplicate-day rejection");
    } catch (const ParseError& e) {
        CHECK(e.line() == 4);  // the later of the two clashing rows
        CHECK(std::string(e.what()).find("BTC") != std::string::npos);
        CHECK(std::string(e.what()).find("2024-01-01") != std::string::npos);
    }
}

TEST_CASE("malformed series rows fail with the right line number") {
    const auto check_line = [](const char* name, const std::string& row,
                               std::size_t want_line) {
        const auto path = write_file(name, std::string(kSeriesHeader) +
                                               "2024-01-01,BTC,100,1000,10\n" + row);
        try {
            load_series(path);
            FAIL_CHECK("expected a parse rejection for: " << row);
        } catch (const ParseError& e) {
            CHECK(e.line() == want_line);
        }
    };
    check_line("crisk_s_m1.csv", "2024-01-02,BTC,100,1000\n", 3);       // 4 fields
    check_line("crisk_s_m2.csv", "2024-01-02,BTC,abc,1000,10\n", 3);    // bad number
    check_line("crisk_s_m3.csv", "2024-13-02,BTC,100,1000,10\n", 3);    // bad date
    check_line("crisk_s_m4.csv", "2024-01-02,BTC,0,1000,10\n", 3);      // price <= 0
    check_line("crisk_s_m5.csv", "2024-01-02,BTC,100,-1,10\n", 3);      // negative cap
    check_line("crisk_s_m6.csv", "2024-01-02,BTC,100,1000,-2\n", 3);    // negative volume
    check_line("crisk_s_m7.csv", "2024-01-02,,100,1000,10\n", 3);       // empty asset
}

TEST_CASE("series survive a save/load round trip bit for bit") {
    std::mt19937_64 rng(1234);
    std::uniform_real_distribution<double> px(0.001, 90000.0);
    std::map<std::string, timeseries::PriceSeries> original;
    const char* assets[] = {"BTC", "ETH", "SOL"};
    for (const char* a : assets) {
        std::vector<timeseries::PriceObservation> obs;
        Date d = Date::parse("2023-10-01");
        for (int i = 0; i < 90; ++i) {
            timeseries::PriceObservation o;
            o.day = d;
            o.price = px(rng);
            o.market_cap = px(rng) * 1e6;
            o.volume = px(rng) / 3.0;  // deliberately awkward decimals
            obs.push_back(o);
            d = d.plus_days(1);
        }
        original.emplace(a, timeseries::PriceSeries(a, std::move(obs)));
    }

    const auto path = std::filesystem::temp_directory_path() / "crisk_s_rt.csv";
    {
        std::ofstream out(path);
        save_series(original, out);
    }
    const auto back = load_series(path);
    REQUIRE(back.size() == original.size());
    for (const auto& [asset_id, s] : original) {
        const auto& r = back.at(asset_id).observations();
        const auto& o = s.observations();
        REQUIRE(r.size() == o.size());
        for (std::size_t i = 0; i < o.size(); ++i) {
            CHECK(r[i].day == o[i].day);
            CHECK(r[i].price == o[i].price);          // exact, not approximate
            CHECK(r[i].market_cap == o[i].market_cap);
            CHECK(r[i].volume == o[i].volume);
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("trades partition per asset and keep their own sequence runs") {
    const auto path = write_file("crisk_t_multi.csv",
                                 std::string(kTradesHeader) +
                                     "1,2024-01-01,BTC,1.5,42000\n"
                                     "1,2024-01-01,ETH,10,2500\n"
                                     "2,2024-01-02,BTC,-0.5,43000\n"
                                     "2,2024-01-03,ETH,5,2600\n"
                                     "3,2024-01-04,BTC,2,41000\n");
    const auto trades = load_trades(path);
    REQUIRE(trades.size() == 2);
    REQUIRE(trades.at("BTC").size() == 3);
    REQUIRE(trades.at("ETH").size() == 2);
    CHECK(trades.at("BTC")[1].amount == -0.5);
    CHECK(trades.at("BTC")[2].seq == 3);
    CHECK(trades.at("ETH")[1].price == 2600.0);
}

TEST_CASE("trade files demand consecutive sequence numbers per asset") {
    const auto path = write_file("crisk_t_gap.csv", std::string(kTradesHeader) +
                                                        "1,2024-01-01,BTC,1,100\n"
                                                        "3,2024-01-02,BTC,1,100\n");
    try {
        load_trades(path);
        FAIL("expected a sequence-gap rejection");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("expected seq 2, got 3") != std::string::npos);
    }
}

TEST_CASE("an opening sell is rejected at load time") {
    const auto path = write_file("crisk_t_sell.csv", std::string(kTradesHeader) +
                                                         "1,2024-01-01,BTC,-1,100\n");
    CHECK_THROWS_AS(load_trades(path), NoCostBasisError);
}

TEST_CASE("malformed trade rows fail with the right line number") {
    const auto check_line = [](const char* name, const std::string& row) {
        const auto path = write_file(name, std::string(kTradesHeader) + row);
        try {
            load_trades(path);
            FAIL_CHECK("expected a parse rejection for: " << row);
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
    };
    check_line("crisk_t_m1.csv", "1,2024-01-01,BTC,0,100\n");     // zero amount
    check_line("crisk_t_m2.csv", "1,2024-01-01,BTC,1,0\n");       // free tokens
    check_line("crisk_t_m3.csv", "1,2024-01-01,BTC,1\n");         // 4 fields
    check_line("crisk_t_m4.csv", "one,2024-01-01,BTC,1,100\n");   // bad seq
    check_line("crisk_t_m5.csv", "1,yesterday,BTC,1,100\n");      // bad date
    check_line("crisk_t_m6.csv", "1,2024-01-01,,1,100\n");        // empty asset
}

TEST_CASE("trades survive a save/load round trip bit for bit") {
    std::mt19937_64 rng(5678);
    std::uniform_real_distribution<double> px(0.01, 50000.0);
    std::uniform_real_distribution<double> qty(0.001, 8.0);
    std::map<std::string, std::vector<ledger::Trade>> original;
    for (const char* a : {"BTC", "ETH"}) {
        std::vector<ledger::Trade> list;
        double pos = 0.0;
        Date d = Date::parse("2024-02-01");
        for (int i = 0; i < 40; ++i) {
            ledger::Trade t;
            t.seq = i + 1;
            t.day = d;
            t.asset_id = a;
            const bool buy = pos <= 0.0 || (rng() % 2 == 0);
            t.amount = buy ? qty(rng) : -std::min(pos, qty(rng) / 7.0);
            t.price = px(rng);
            pos += t.amount;
            list.push_back(t);
            d = d.plus_days(1);
        }
        original.emplace(a, std::move(list));
    }

    const auto path = std::filesystem::temp_directory_path() / "crisk_t_rt.csv";
    {
        std::ofstream out(path);
        save_trades(original, out);
    }
    const auto back = load_trades(path);
    REQUIRE(back.size() == original.size());
    for (const auto& [asset_id, list] : original) {
        const auto& r = back.at(asset_id);
        REQUIRE(r.size() == list.size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            CHECK(r[i].seq == list[i].seq);
            CHECK(r[i].day == list[i].day);
            CHECK(r[i].amount == list[i].amount);
            CHECK(r[i].price == list[i].price);
        }
    }
    std::filesystem::remove(path);
}

TEST_CASE("the file-backed source is a thin wrapper over load_series") {
    const auto path = write_file("crisk_s_src.csv",
                                 std::string(kSeriesHeader) +
                                     "2024-01-01,BTC,42000,820,7\n");
    FileSeriesSource source(path);
    const auto series = source.load();
    REQUIRE(series.size() == 1);
    CHECK(series.at("BTC").observations().size() == 1);
}
