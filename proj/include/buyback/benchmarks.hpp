#pragma once

#include <span>
#include <vector>

#include "buyback/market_model.hpp"
#include "buyback/strategies.hpp"

namespace buyback::bench {

// Arithmetic mean of daily vwaps: every day counts equally no matter how much
// traded. The popular buy-back benchmark, and the reason outperforming it is
// cheap. Throws ValidationError on an empty sequence.
double bogus_benchmark(std::span<const double> daily_vwaps);

// Volume-weighted mean of daily vwaps: sum(vwap * volume) / sum(volume).
// Throws ValidationError on empty or mismatched inputs or non-positive volume.
double institutional_vwap(std::span<const double> daily_vwaps,
                          std::span<const double> daily_volumes);

struct BenchmarkPoint {
    int day_index = 0;
    double bogus = 0.0;         // running mean of vwaps up to this day
    double institutional = 0.0; // running volume-weighted vwap
    double twap = 0.0;          // running mean of closes
};

// Prefix benchmarks over a simulated path, one point per day.
std::vector<BenchmarkPoint> running_benchmarks(const market::PricePath& path);

struct PurchaseStats {
    double gross_value = 0.0;
    double shares = 0.0;
    double avg_price = 0.0;      // gross_value / shares
    double outperformance = 0.0; // (benchmark - avg_price) / benchmark
};

// Execution quality of a blotter against a given benchmark price.
PurchaseStats purchase_stats(const strat::TradeBlotter& blotter, double benchmark);

} // namespace buyback::bench
