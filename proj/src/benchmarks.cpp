#include "buyback/benchmarks.hpp"

#include "buyback/errors.hpp"

namespace buyback::bench {

double bogus_benchmark(std::span<const double> daily_vwaps) {
    if (daily_vwaps.empty()) throw ValidationError("bogus benchmark: empty vwap sequence");
    double sum = 0.0;
    for (double v : daily_vwaps) sum += v;
    return sum / static_cast<double>(daily_vwaps.size());
}

double institutional_vwap(std::span<const double> daily_vwaps,
                          std::span<const double> daily_volumes) {
    if (daily_vwaps.empty()) throw ValidationError("institutional vwap: empty vwap sequence");
    if (daily_vwaps.size() != daily_volumes.size())
        throw ValidationError("institutional vwap: vwap and volume lengths differ");
    double value = 0.0;
    double volume = 0.0;
    for (std::size_t i = 0; i < daily_vwaps.size(); ++i) {
        if (!(daily_volumes[i] > 0.0))
            throw ValidationError("institutional vwap: non-positive volume at index " +
                                  std::to_string(i));
        value += daily_vwaps[i] * daily_volumes[i];
        volume += daily_volumes[i];
    }
    return value / volume;
}

std::vector<BenchmarkPoint> running_benchmarks(const market::PricePath& path) {
    if (path.days.empty()) throw ValidationError("running benchmarks: path has no days");
    std::vector<BenchmarkPoint> out;
    out.reserve(path.days.size());
    double vwap_sum = 0.0;
    double close_sum = 0.0;
    double value_sum = 0.0;
    double volume_sum = 0.0;
    for (const auto& d : path.days) {
        vwap_sum += d.vwap;
        close_sum += d.close;
        value_sum += d.vwap * d.volume;
        volume_sum += d.volume;
        const double n = d.day_index + 1;
        out.push_back(BenchmarkPoint{d.day_index, vwap_sum / n, value_sum / volume_sum,
                                     close_sum / n});
    }
    return out;
}

PurchaseStats purchase_stats(const strat::TradeBlotter& blotter, double benchmark) {
    if (blotter.fills.empty()) throw ValidationError("purchase stats: empty blotter");
    if (!(benchmark > 0.0)) throw ValidationError("purchase stats: benchmark must be positive");
    PurchaseStats s;
    s.gross_value = blotter.gross_value();
    s.shares = blotter.total_shares();
    if (!(s.shares > 0.0)) throw ValidationError("purchase stats: blotter has no shares");
    s.avg_price = s.gross_value / s.shares;
    s.outperformance = (benchmark - s.avg_price) / benchmark;
    return s;
}

} // namespace buyback::bench
