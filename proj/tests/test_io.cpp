#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "buyback/audit.hpp"
#include "buyback/benchmarks.hpp"
#include "buyback/errors.hpp"
#include "buyback/scenario_io.hpp"

using namespace buyback;

namespace {

market::ScenarioConfig sample_config() {
    market::ScenarioConfig cfg;
    cfg.initial_price = 83.25;
    cfg.sigma_annual = 0.41;
    cfg.drift_annual = -0.07;
    cfg.trading_days_per_year = 252;
    cfg.horizon_days = 60;
    cfg.adv_shares = 3.7e6;
    cfg.volume_sigma = 0.55;
    cfg.intraday_noise_sigma = 0.002;
    cfg.master_seed = 424242;
    return cfg;
}

std::string render_scenario(const market::ScenarioConfig& cfg) {
    std::ostringstream os;
    os << "# simulated programme\n";
    os << "initial_price = " << io::format_double(cfg.initial_price) << "\n";
    os << "sigma_annual = " << io::format_double(cfg.sigma_annual) << "\n";
    os << "drift_annual = " << io::format_double(cfg.drift_annual) << "\n";
    os << "trading_days_per_year = " << cfg.trading_days_per_year << "\n";
    os << "horizon_days = " << cfg.horizon_days << "\n";
    os << "adv_shares = " << io::format_double(cfg.adv_shares) << "\n";
    os << "volume_sigma = " << io::format_double(cfg.volume_sigma) << "\n";
    os << "intraday_noise_sigma = " << io::format_double(cfg.intraday_noise_sigma) << "\n";
    os << "master_seed = " << cfg.master_seed << "  # fixed for replay\n";
    return os.str();
}

market::ScenarioConfig reparse(const std::string& text) {
    std::istringstream in(text);
    return io::parse_scenario(in, "inline");
}

} // namespace

TEST_CASE("formatted doubles survive the round trip unchanged") {
    for (double v : {0.1, 1.0 / 3.0, 83.25, 6.02e23, 5e-324, 0.0, 1234567.891011})
        CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
}

TEST_CASE("a scenario file reloads to the identical configuration") {
    const auto cfg = sample_config();
    const auto back = reparse(render_scenario(cfg));
    CHECK(back.initial_price == cfg.initial_price);
    CHECK(back.sigma_annual == cfg.sigma_annual);
    CHECK(back.drift_annual == cfg.drift_annual);
    CHECK(back.trading_days_per_year == cfg.trading_days_per_year);
    CHECK(back.horizon_days == cfg.horizon_days);
    CHECK(back.adv_shares == cfg.adv_shares);
    CHECK(back.volume_sigma == cfg.volume_sigma);
    CHECK(back.intraday_noise_sigma == cfg.intraday_noise_sigma);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(market::config_digest(back) == market::config_digest(cfg));
}

TEST_CASE("scenario errors carry the origin and line") {
    CHECK_THROWS_WITH_AS(reparse("initial_price = 100\nbogus_key = 3\n"),
                         doctest::Contains("inline:2"), ConfigError);
    CHECK_THROWS_WITH_AS(reparse("sigma_annual = 0.2\nsigma_annual = 0.3\n"),
                         doctest::Contains("duplicate key"), ConfigError);
    CHECK_THROWS_WITH_AS(reparse("initial_price 100\n"),
                         doctest::Contains("key = value"), ConfigError);
    CHECK_THROWS_WITH_AS(reparse("initial_price = banana\n"),
                         doctest::Contains("initial_price"), ConfigError);
    // structurally fine, semantically impossible
    CHECK_THROWS_AS(reparse("initial_price = -5\n"), ConfigError);
    CHECK_THROWS_AS(io::load_scenario("/nonexistent/base.scenario"), IoError);
}

TEST_CASE("path csv lists every simulated day") {
    auto cfg = sample_config();
    cfg.horizon_days = 7;
    const auto path = market::generate_path(cfg, 0);
    std::ostringstream os;
    io::write_path_csv(os, path);

    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "day_index,close,vwap,volume");
    int rows = 0;
    while (std::getline(in, line)) {
        CHECK(line.find(',') != std::string::npos);
        ++rows;
    }
    CHECK(rows == 7);
}

TEST_CASE("blotter csv pads gated days with zero rows") {
    auto cfg = sample_config();
    cfg.horizon_days = 12;
    cfg.sigma_annual = 0.0;
    cfg.drift_annual = 2.0; // steep rise through any ceiling
    cfg.intraday_noise_sigma = 0.0;
    const auto path = market::generate_path(cfg, 0);

    strat::StrategyParams params;
    params.kind = strat::StrategyKind::Twap;
    params.target_value = 1e6;
    strat::RegulatoryLimits limits;
    limits.max_days = 12;
    const auto gated = strat::run_valuation_gated(path, params, limits, cfg.initial_price * 1.02);
    REQUIRE_FALSE(gated.completed);
    REQUIRE(gated.fills.size() < 12);

    std::ostringstream os;
    io::write_blotter_csv(os, gated, params.target_value, limits.max_days);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "day_index,shares,value,fill_price,cumulative_pct_value,pct_time_elapsed");
    int rows = 0, zero_rows = 0;
    while (std::getline(in, line)) {
        if (line.find(",0,0,", 1) != std::string::npos) ++zero_rows;
        ++rows;
    }
    CHECK(rows == 12);
    CHECK(zero_rows == 12 - static_cast<int>(gated.fills.size()));
}

TEST_CASE("completed blotter csv ends on the completion day at one hundred percent") {
    auto cfg = sample_config();
    cfg.horizon_days = 30;
    const auto path = market::generate_path(cfg, 1);
    strat::StrategyParams params;
    params.kind = strat::StrategyKind::Twap;
    params.target_value = 2e6;
    strat::RegulatoryLimits limits;
    limits.max_days = 30;
    const auto b = strat::run_twap(path, params, limits);

    std::ostringstream os;
    io::write_blotter_csv(os, b, params.target_value, limits.max_days);
    std::istringstream in(os.str());
    std::string line, last;
    std::getline(in, line);
    int rows = 0;
    while (std::getline(in, line)) {
        last = line;
        ++rows;
    }
    CHECK(rows == 30);
    // last two columns: cumulative pct of value (up to summation dust) and of time
    const auto second_comma = last.rfind(',', last.rfind(',') - 1);
    double cum_pct = 0.0, time_pct = 0.0;
    CHECK(std::sscanf(last.c_str() + second_comma, ",%lf,%lf", &cum_pct, &time_pct) == 2);
    CHECK(cum_pct == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(time_pct == 1.0);
}

TEST_CASE("benchmark csv mirrors the running series") {
    auto cfg = sample_config();
    cfg.horizon_days = 5;
    const auto path = market::generate_path(cfg, 2);
    const auto series = bench::running_benchmarks(path);
    std::ostringstream os;
    io::write_benchmark_csv(os, series);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "day_index,bogus,institutional,twap");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 5);
}

TEST_CASE("a written tape reads back into the audit module verbatim") {
    auto cfg = sample_config();
    cfg.horizon_days = 40;
    const auto path = market::generate_path(cfg, 9);
    strat::StrategyParams params;
    params.kind = strat::StrategyKind::AdaptiveBroker;
    params.target_value = 3e7;
    strat::RegulatoryLimits limits;
    limits.max_days = 40;
    const auto b = strat::run_adaptive_broker(path, params, limits);
    REQUIRE(b.completed);

    std::ostringstream os;
    io::write_tape_csv(os, b, path);
    std::istringstream in(os.str());
    const auto tape = audit::parse_tape(in);
    REQUIRE(tape.size() == b.fills.size());

    double gross = 0.0, shares = 0.0;
    for (std::size_t i = 0; i < tape.size(); ++i) {
        CHECK(tape[i].shares == b.fills[i].shares);
        CHECK(tape[i].avg_price == b.fills[i].fill_price);
        CHECK(tape[i].value == b.fills[i].value);
        gross += tape[i].value;
        shares += tape[i].shares;
    }
    CHECK(gross == doctest::Approx(b.gross_value()).epsilon(1e-12));

    // snapshot over the whole tape agrees with the strategy-side stats
    const auto snap = audit::snapshot_at(tape, tape.size(), limits.max_days, params.target_value);
    std::vector<double> vwaps;
    for (int t = 0; t <= b.completion_day; ++t)
        vwaps.push_back(path.days[static_cast<std::size_t>(t)].vwap);
    const auto stats = bench::purchase_stats(b, bench::bogus_benchmark(vwaps));
    CHECK(snap.avg_price == doctest::Approx(stats.avg_price).epsilon(1e-12));
    CHECK(snap.outperformance == doctest::Approx(stats.outperformance).epsilon(1e-12));
    CHECK(snap.pct_value_executed == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("tape dates skip weekends") {
    auto cfg = sample_config();
    cfg.horizon_days = 10;
    const auto path = market::generate_path(cfg, 0);
    strat::StrategyParams params;
    params.kind = strat::StrategyKind::Twap;
    params.target_value = 1e6;
    strat::RegulatoryLimits limits;
    limits.max_days = 10;
    const auto b = strat::run_twap(path, params, limits);

    std::ostringstream os;
    io::write_tape_csv(os, b, path);
    const auto text = os.str();
    // ten consecutive trading days span exactly two calendar weeks
    CHECK(text.find("2025-01-06") != std::string::npos);
    CHECK(text.find("2025-01-10") != std::string::npos);
    CHECK(text.find("2025-01-11") == std::string::npos); // Saturday
    CHECK(text.find("2025-01-12") == std::string::npos); // Sunday
    CHECK(text.find("2025-01-13") != std::string::npos);
    CHECK(text.find("2025-01-17") != std::string::npos);
}

TEST_CASE("manifests render identically on every run") {
    io::RunManifest m;
    m.subcommand = "simulate";
    m.config_path = "base.scenario";
    m.seed = 7;
    m.output_dir = "out";
    m.files.push_back(io::ManifestFile{"series.csv", "csv", 126});
    m.files.push_back(io::ManifestFile{"manifest.json", "json", 0});

    std::ostringstream a, b;
    io::write_manifest(a, m);
    io::write_manifest(b, m);
    CHECK(a.str() == b.str());
    CHECK(a.str().find("timestamp") == std::string::npos);
    CHECK(a.str().find("\"seed\": 7") != std::string::npos);
    CHECK(a.str().find("series.csv") != std::string::npos);
}
