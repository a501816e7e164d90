#pragma once

#include <cstdint>
#include <vector>

#include "buyback/market_model.hpp"

namespace buyback::risk {

struct VarQuery {
    double value = 0.0;        // exposure, currency
    double z = 1.0;            // confidence multiplier
    double sigma_annual = 0.0;
    int horizon_days = 1;
    int days_per_year = 250;   // 250 or 252
};

// Parametric value-at-risk: value * z * sigma * sqrt(horizon in years).
double closed_form_var(const VarQuery& q);

// Closed-form VaR applied to the affected slice of an aggregate market value.
double market_aggregate_var(double total_value, double affected_share, double z,
                            double sigma_annual, int horizon_days, int days_per_year);

/// Monte Carlo VaR over driftless lognormal paths (cfg.drift_annual is
/// ignored). The loss on a path is value * |1 - S_T/S_0|, an adverse move in
/// either direction, and the estimate is the (1 - percentile) order statistic
/// of the losses: percentile 0.05 corresponds to the z = 1.96 confidence band,
/// 0.32 to z = 1. Deterministic in cfg.master_seed; the result is identical
/// for any thread count. percentile must lie in (0, 0.5], n_paths >= 1000.
double mc_var(const market::ScenarioConfig& cfg, double value, double percentile,
              std::int64_t n_paths, int threads = 0);

// Single-threaded reference implementation; must match mc_var exactly.
double mc_var_serial(const market::ScenarioConfig& cfg, double value, double percentile,
                     std::int64_t n_paths);

struct ResidualPoint {
    int day = 0;
    double residual_var = 0.0;
};

/// Risk remaining on each day of an even unwind of `value` over unwind_days:
///   rv(d) = z * sigma_daily * value * sqrt(sum_{k=d+1..N} ((N-k+1)/N)^2)
/// The day-0 entry is the risk of the whole programme, the day-N entry zero.
std::vector<ResidualPoint> residual_var_profile(const market::ScenarioConfig& cfg,
                                                double value, int unwind_days, double z);

struct FanPoint {
    int day = 0;
    double var_1pct = 0.0;
    double var_5pct = 0.0;
};

struct FanChart {
    std::vector<FanPoint> curve;         // per-day 1% and 5% loss quantiles
    std::vector<double> terminal_values; // value * S_T/S_0 per path
};

// Horizon profile of Monte Carlo VaR plus the terminal value cloud.
FanChart mc_fan_chart(const market::ScenarioConfig& cfg, double value,
                      std::int64_t n_paths, int threads = 0);

struct VarReport {
    double closed_form = 0.0;
    double mc_estimate = 0.0;
    std::int64_t mc_paths = 0;
    double percentile = 0.0;
    std::vector<ResidualPoint> residual_profile;
};

} // namespace buyback::risk
