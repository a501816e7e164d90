// Times the parallel kernels against their single-threaded reference
// implementations and confirms both produce identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "buyback/experiments.hpp"
#include "buyback/market_model.hpp"
#include "buyback/risk.hpp"
#include "buyback/strategies.hpp"

using namespace buyback;

namespace {

double time_ms(const std::function<void()>& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(t1 - t0).count();
}

void row(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-24s %10.1f %12.1f %9.2fx %10s\n", name, serial_ms, parallel_ms,
                serial_ms / parallel_ms, identical ? "identical" : "DIFFER");
}

} // namespace

int main(int argc, char** argv) {
    const std::int64_t paths = argc > 1 ? std::atoll(argv[1]) : 200000;

    market::ScenarioConfig cfg;
    cfg.initial_price = 100.0;
    cfg.sigma_annual = 0.35;
    cfg.horizon_days = 125;
    cfg.adv_shares = 5e6;
    cfg.master_seed = 42;

#ifdef _OPENMP
    std::printf("threads: %d, paths: %lld\n\n", omp_get_max_threads(),
                static_cast<long long>(paths));
#else
    std::printf("built without OpenMP; parallel column runs serially\n\n");
#endif
    std::printf("%-24s %10s %12s %9s %10s\n", "kernel", "serial ms", "parallel ms", "speedup",
                "results");

    {
        double a = 0.0, b = 0.0;
        const double ts = time_ms([&] { a = risk::mc_var_serial(cfg, 1e9, 0.05, paths); });
        const double tp = time_ms([&] { b = risk::mc_var(cfg, 1e9, 0.05, paths); });
        row("mc_var", ts, tp, a == b);
    }
    {
        game::CoinGameSpec spec;
        spec.policy = game::CoinPolicy::StopWhenAhead;
        double a = 0.0, b = 0.0;
        const double ts = time_ms([&] { a = game::coin_game_mc_serial(spec, paths * 5, 7); });
        const double tp = time_ms([&] { b = game::coin_game_mc(spec, paths * 5, 7); });
        row("coin_game_mc", ts, tp, a == b);
    }
    {
        strat::StrategyParams params;
        params.kind = strat::StrategyKind::AdaptiveBroker;
        params.target_value = 1e8;
        strat::RegulatoryLimits limits;
        limits.max_days = cfg.horizon_days;
        const std::int64_t n = paths / 20;
        game::OutcomeSummary a, b;
        const double ts =
            time_ms([&] { a = game::benchmark_beat_study_serial(cfg, params, limits, n); });
        const double tp =
            time_ms([&] { b = game::benchmark_beat_study(cfg, params, limits, n); });
        row("benchmark_beat_study", ts, tp,
            a.mean == b.mean && a.stddev == b.stddev && a.p01 == b.p01 && a.p99 == b.p99);
    }
    return 0;
}
