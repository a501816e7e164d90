#pragma once

#include <cstdint>
#include <vector>

namespace buyback::market {

/// One simulated market scenario: a lognormal daily close process plus a
/// simple intraday summary (daily VWAP and traded volume).
///
/// Daily closes follow
///   close_t = close_{t-1} * exp((drift - sigma^2/2) * dt + sigma * sqrt(dt) * eps_t)
/// with dt = 1 / trading_days_per_year. The daily VWAP is the geometric mean of
/// the bracketing closes, optionally perturbed by lognormal intraday noise, and
/// volume is i.i.d. lognormal with median adv_shares.
struct ScenarioConfig {
    double initial_price = 100.0;
    double sigma_annual = 0.35;
    double drift_annual = 0.0;
    int trading_days_per_year = 250;  // 250 or 252
    int horizon_days = 125;
    double adv_shares = 5e6;          // median daily volume, shares
    double volume_sigma = 0.0;        // log-dispersion of daily volume
    double intraday_noise_sigma = 0.0; // log-dispersion of vwap around geometric mean
    std::uint64_t master_seed = 1;
};

// Throws ConfigError naming the offending field.
void validate(const ScenarioConfig& cfg);

// Stable identifier for a config's economic content; equal configs hash equal.
std::uint64_t config_digest(const ScenarioConfig& cfg);

struct MarketDay {
    int day_index = 0;
    double close = 0.0;
    double vwap = 0.0;
    double volume = 0.0;
};

struct PricePath {
    std::uint64_t config_digest = 0;
    double initial_price = 0.0;
    std::vector<MarketDay> days;

    // Close of the previous trading day; the initial price for day 0.
    double prev_close(int day_index) const {
        return day_index == 0 ? initial_price : days[static_cast<std::size_t>(day_index) - 1].close;
    }
};

/// Simulates one path. Deterministic in (cfg.master_seed, path_index): the
/// same key always yields the same path, byte for byte, on any thread layout.
PricePath generate_path(const ScenarioConfig& cfg, std::int64_t path_index);

} // namespace buyback::market
