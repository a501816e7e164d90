#include "buyback/market_model.hpp"

#include <cmath>
#include <string>

#include "buyback/errors.hpp"
#include "buyback/rng.hpp"

namespace buyback::market {

namespace {

// Per-day noise streams.
constexpr std::uint64_t kReturnStream = 0;
constexpr std::uint64_t kVwapStream = 1;
constexpr std::uint64_t kVolumeStream = 2;

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ConfigError("scenario config: " + field + " " + what);
}

} // namespace

void validate(const ScenarioConfig& cfg) {
    require(cfg.initial_price > 0.0, "initial_price", "must be positive");
    require(cfg.sigma_annual >= 0.0, "sigma_annual", "must be non-negative");
    require(std::isfinite(cfg.drift_annual), "drift_annual", "must be finite");
    require(cfg.trading_days_per_year == 250 || cfg.trading_days_per_year == 252,
            "trading_days_per_year", "must be 250 or 252");
    require(cfg.horizon_days > 0, "horizon_days", "must be positive");
    require(cfg.adv_shares > 0.0, "adv_shares", "must be positive");
    require(cfg.volume_sigma >= 0.0, "volume_sigma", "must be non-negative");
    require(cfg.intraday_noise_sigma >= 0.0, "intraday_noise_sigma", "must be non-negative");
}

std::uint64_t config_digest(const ScenarioConfig& cfg) {
    auto word = [](double v) {
        std::uint64_t bits;
        static_assert(sizeof bits == sizeof v);
        __builtin_memcpy(&bits, &v, sizeof bits);
        return bits;
    };
    std::uint64_t h = 0x6275796261636b31ull; // arbitrary non-zero start
    for (std::uint64_t w : {word(cfg.initial_price), word(cfg.sigma_annual),
                            word(cfg.drift_annual),
                            static_cast<std::uint64_t>(cfg.trading_days_per_year),
                            static_cast<std::uint64_t>(cfg.horizon_days),
                            word(cfg.adv_shares), word(cfg.volume_sigma),
                            word(cfg.intraday_noise_sigma), cfg.master_seed}) {
        h = rng::mix64(h ^ rng::mix64(w));
    }
    return h;
}

PricePath generate_path(const ScenarioConfig& cfg, std::int64_t path_index) {
    validate(cfg);

    const double dt = 1.0 / cfg.trading_days_per_year;
    const double drift_term = (cfg.drift_annual - 0.5 * cfg.sigma_annual * cfg.sigma_annual) * dt;
    const double vol_term = cfg.sigma_annual * std::sqrt(dt);
    const auto path = static_cast<std::uint64_t>(path_index);

    PricePath out;
    out.config_digest = config_digest(cfg);
    out.initial_price = cfg.initial_price;
    out.days.resize(static_cast<std::size_t>(cfg.horizon_days));

    double prev = cfg.initial_price;
    for (int t = 0; t < cfg.horizon_days; ++t) {
        const auto day = static_cast<std::uint64_t>(t);
        const double eps = rng::normal(cfg.master_seed, path, day, kReturnStream);
        const double close = prev * std::exp(drift_term + vol_term * eps);

        double vwap = std::sqrt(prev * close);
        if (cfg.intraday_noise_sigma > 0.0) {
            const double eta = rng::normal(cfg.master_seed, path, day, kVwapStream);
            vwap *= std::exp(cfg.intraday_noise_sigma * eta);
        }

        double volume = cfg.adv_shares;
        if (cfg.volume_sigma > 0.0) {
            const double zeta = rng::normal(cfg.master_seed, path, day, kVolumeStream);
            volume *= std::exp(cfg.volume_sigma * zeta);
        }

        out.days[static_cast<std::size_t>(t)] = MarketDay{t, close, vwap, volume};
        prev = close;
    }
    return out;
}

} // namespace buyback::market
