#pragma once

#include <string>
#include <vector>

#include "buyback/market_model.hpp"

namespace buyback::strat {

enum class StrategyKind {
    Twap,            // equal value every day of the allowed window
    Pov,             // fixed percentage of daily volume until the target is filled
    AdaptiveBroker,  // trades fast below the running benchmark, trickles above it
    ValuationGated   // wraps a base strategy; no purchases above a price ceiling
};

struct RegulatoryLimits {
    double max_participation = 0.10; // max fraction of a day's volume
    int min_days = 1;                // earliest allowed completion, in trading days
    int max_days = 125;              // allowed execution window, in trading days
};

struct StrategyParams {
    StrategyKind kind = StrategyKind::Twap;
    double target_value = 0.0;  // currency amount to execute
    double pov_rate = 0.10;     // Pov: fraction of daily volume taken

    // AdaptiveBroker pacing, as multiples of target_value / max_days.
    double fast_mult = 4.0;     // below the running benchmark
    double trickle_mult = 0.15; // at or above it

    // Linear market impact: fills print at vwap * (1 + impact_kappa * participation).
    double impact_kappa = 0.0;

    // ValuationGated only: base strategy to wrap and the price ceiling.
    StrategyKind gated_base = StrategyKind::Twap;
    double valuation_ceiling = 0.0;
};

struct Fill {
    int day_index = 0;
    double shares = 0.0;
    double value = 0.0;      // shares * fill_price
    double fill_price = 0.0;
};

struct TradeBlotter {
    std::vector<Fill> fills;  // traded days only, in day order
    bool completed = false;
    int completion_day = -1;  // last traded day
    std::string note;         // diagnostic when incomplete

    double gross_value() const;
    double total_shares() const;
};

// Equal value per day across the full window. Throws InfeasibleError (reporting
// the maximum feasible target) if the schedule cannot fit under the
// participation cap.
TradeBlotter run_twap(const market::PricePath& path, const StrategyParams& params,
                      const RegulatoryLimits& limits);

// Buys pov_rate of each day's volume until the target value is reached; the
// final fill is truncated to land exactly on the target.
TradeBlotter run_pov(const market::PricePath& path, const StrategyParams& params,
                     const RegulatoryLimits& limits);

// Compares the previous close to the running mean of daily vwaps: below means
// buy fast_mult times the baseline pace, at-or-above means trickle. A daily
// floor of remaining/remaining_days guarantees completion by max_days whenever
// the participation cap admits it, and pace is capped so the run cannot finish
// before min_days. Stops once the target value is filled.
TradeBlotter run_adaptive_broker(const market::PricePath& path, const StrategyParams& params,
                                 const RegulatoryLimits& limits);

// Runs params.kind (which must not itself be ValuationGated) but buys nothing
// on days whose previous close exceeds the ceiling. May finish incomplete.
TradeBlotter run_valuation_gated(const market::PricePath& path, const StrategyParams& params,
                                 const RegulatoryLimits& limits, double valuation_ceiling);

// Dispatch on params.kind.
TradeBlotter run_strategy(const market::PricePath& path, const StrategyParams& params,
                          const RegulatoryLimits& limits);

} // namespace buyback::strat
