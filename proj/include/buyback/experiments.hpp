#pragma once

#include <cstdint>

#include "buyback/market_model.hpp"
#include "buyback/strategies.hpp"

namespace buyback::game {

// The fixed-odds analogue of discretionary completion timing: flip a fair coin
// repeatedly; heads is a day the programme beats its benchmark. A player
// forced to score at exactly n_min flips wins just under half the time, while
// one who may stop anywhere in [n_min, n_max] when ahead wins more often than
// not, without any edge per flip.

enum class CoinPolicy {
    FixedHorizon,  // score at exactly n_min flips; ties lose
    StopWhenAhead, // stop at the first t in [n_min, n_max] with a positive lead
    StopOptimal    // value-maximising stopping rule over [n_min, n_max]
};

struct CoinGameSpec {
    CoinPolicy policy = CoinPolicy::FixedHorizon;
    int n_min = 100;
    int n_max = 150;
};

struct CoinGameResult {
    double win_probability = 0.0;
    double tie_probability = 0.0;  // final lead exactly zero under the policy
    double max_mass_error = 0.0;   // worst |1 - total probability| across DP layers
};

// Exact win probability by dynamic programming over the lead distribution
// (forward absorption for the stopping rules, backward induction for
// StopOptimal). No sampling error.
CoinGameResult coin_game_exact(const CoinGameSpec& spec);

// Monte Carlo estimate of the same probability; deterministic in seed and
// thread-count independent.
double coin_game_mc(const CoinGameSpec& spec, std::int64_t trials, std::uint64_t seed,
                    int threads = 0);
double coin_game_mc_serial(const CoinGameSpec& spec, std::int64_t trials, std::uint64_t seed);

struct OutcomeSummary {
    std::int64_t n_paths = 0;
    double underperformance_rate = 0.0; // fraction of paths with outperformance < 0
    double mean = 0.0;                  // moments and percentiles of outperformance
    double stddev = 0.0;
    double p01 = 0.0, p05 = 0.0, p25 = 0.0, p50 = 0.0, p75 = 0.0, p95 = 0.0, p99 = 0.0;
};

/// Runs the strategy on n_paths simulated scenarios and scores each run
/// against the mean-of-vwaps benchmark over its own realised window (day 0
/// through completion). Deterministic in cfg.master_seed regardless of
/// threads.
OutcomeSummary benchmark_beat_study(const market::ScenarioConfig& cfg,
                                    const strat::StrategyParams& params,
                                    const strat::RegulatoryLimits& limits,
                                    std::int64_t n_paths, int threads = 0);
OutcomeSummary benchmark_beat_study_serial(const market::ScenarioConfig& cfg,
                                           const strat::StrategyParams& params,
                                           const strat::RegulatoryLimits& limits,
                                           std::int64_t n_paths);

// Path whose daily volatility halves every day from collapse_day on; before
// that it matches cfg. The stress case where the signal the adaptive rule
// feeds on disappears mid-programme.
market::PricePath generate_collapse_path(const market::ScenarioConfig& cfg,
                                         std::int64_t path_index, int collapse_day);

// benchmark_beat_study over collapse paths.
OutcomeSummary volatility_collapse_study(const market::ScenarioConfig& cfg,
                                         const strat::StrategyParams& params,
                                         const strat::RegulatoryLimits& limits,
                                         std::int64_t n_paths, int collapse_day,
                                         int threads = 0);

} // namespace buyback::game
