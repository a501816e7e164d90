#include "buyback/risk.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "buyback/errors.hpp"
#include "buyback/rng.hpp"

namespace buyback::risk {

namespace {

void check_query(const VarQuery& q) {
    if (!(q.value >= 0.0)) throw ValidationError("var query: value must be non-negative");
    if (!(q.z > 0.0)) throw ValidationError("var query: z must be positive");
    if (!(q.sigma_annual >= 0.0)) throw ValidationError("var query: sigma must be non-negative");
    if (q.horizon_days < 1) throw ValidationError("var query: horizon_days must be positive");
    if (q.days_per_year != 250 && q.days_per_year != 252)
        throw ValidationError("var query: days_per_year must be 250 or 252");
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

// Driftless daily lognormal walk; pure function of (seed, path, day), so any
// thread may compute any path.
double terminal_log_return(const market::ScenarioConfig& cfg, std::int64_t path_index) {
    const double dt = 1.0 / cfg.trading_days_per_year;
    const double drift = -0.5 * cfg.sigma_annual * cfg.sigma_annual * dt;
    const double vol = cfg.sigma_annual * std::sqrt(dt);
    const auto path = static_cast<std::uint64_t>(path_index);
    double lr = 0.0;
    for (int t = 0; t < cfg.horizon_days; ++t)
        lr += drift + vol * rng::normal(cfg.master_seed, path, static_cast<std::uint64_t>(t), 0);
    return lr;
}

// Order statistic at the (1 - percentile) rank of an ascending sample.
double upper_quantile(std::vector<double>& sorted, double percentile) {
    auto k = static_cast<std::size_t>(static_cast<double>(sorted.size()) * (1.0 - percentile));
    if (k >= sorted.size()) k = sorted.size() - 1;
    return sorted[k];
}

void check_mc_args(const market::ScenarioConfig& cfg, double value, double percentile,
                   std::int64_t n_paths) {
    market::validate(cfg);
    if (!(value >= 0.0)) throw ValidationError("mc var: value must be non-negative");
    if (!(percentile > 0.0 && percentile <= 0.5))
        throw ValidationError("mc var: percentile must be in (0, 0.5]");
    if (n_paths < 1000) throw ValidationError("mc var: need at least 1000 paths");
}

} // namespace

double closed_form_var(const VarQuery& q) {
    check_query(q);
    const double years = static_cast<double>(q.horizon_days) / q.days_per_year;
    return q.value * q.z * q.sigma_annual * std::sqrt(years);
}

double market_aggregate_var(double total_value, double affected_share, double z,
                            double sigma_annual, int horizon_days, int days_per_year) {
    if (!(total_value >= 0.0))
        throw ValidationError("aggregate var: total_value must be non-negative");
    if (!(affected_share >= 0.0 && affected_share <= 1.0))
        throw ValidationError("aggregate var: affected_share must be in [0, 1]");
    return closed_form_var(
        VarQuery{total_value * affected_share, z, sigma_annual, horizon_days, days_per_year});
}

double mc_var(const market::ScenarioConfig& cfg, double value, double percentile,
              std::int64_t n_paths, int threads) {
    check_mc_args(cfg, value, percentile, n_paths);
    std::vector<double> losses(static_cast<std::size_t>(n_paths));
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (std::int64_t i = 0; i < n_paths; ++i)
        losses[static_cast<std::size_t>(i)] =
            value * std::fabs(1.0 - std::exp(terminal_log_return(cfg, i)));
    (void)nt;
    std::sort(losses.begin(), losses.end());
    return upper_quantile(losses, percentile);
}

double mc_var_serial(const market::ScenarioConfig& cfg, double value, double percentile,
                     std::int64_t n_paths) {
    check_mc_args(cfg, value, percentile, n_paths);
    std::vector<double> losses(static_cast<std::size_t>(n_paths));
    for (std::int64_t i = 0; i < n_paths; ++i)
        losses[static_cast<std::size_t>(i)] =
            value * std::fabs(1.0 - std::exp(terminal_log_return(cfg, i)));
    std::sort(losses.begin(), losses.end());
    return upper_quantile(losses, percentile);
}

std::vector<ResidualPoint> residual_var_profile(const market::ScenarioConfig& cfg,
                                                double value, int unwind_days, double z) {
    market::validate(cfg);
    if (!(value >= 0.0)) throw ValidationError("residual var: value must be non-negative");
    if (unwind_days < 1) throw ValidationError("residual var: unwind_days must be positive");
    if (!(z > 0.0)) throw ValidationError("residual var: z must be positive");

    const double sigma_daily = cfg.sigma_annual / std::sqrt(cfg.trading_days_per_year);
    const int n = unwind_days;
    std::vector<ResidualPoint> out(static_cast<std::size_t>(n) + 1);
    double sumsq = 0.0;
    out[static_cast<std::size_t>(n)] = ResidualPoint{n, 0.0};
    for (int d = n - 1; d >= 0; --d) {
        const double open_fraction = static_cast<double>(n - d) / n; // exposure during day d+1
        sumsq += open_fraction * open_fraction;
        out[static_cast<std::size_t>(d)] = ResidualPoint{d, z * sigma_daily * value * std::sqrt(sumsq)};
    }
    return out;
}

FanChart mc_fan_chart(const market::ScenarioConfig& cfg, double value, std::int64_t n_paths,
                      int threads) {
    check_mc_args(cfg, value, 0.05, n_paths);
    const int horizon = cfg.horizon_days;
    const auto n = static_cast<std::size_t>(n_paths);
    const double dt = 1.0 / cfg.trading_days_per_year;
    const double drift = -0.5 * cfg.sigma_annual * cfg.sigma_annual * dt;
    const double vol = cfg.sigma_annual * std::sqrt(dt);

    // Day-major loss matrix so each day's quantile is one contiguous sort.
    std::vector<std::vector<double>> losses(static_cast<std::size_t>(horizon),
                                            std::vector<double>(n));
    FanChart chart;
    chart.terminal_values.resize(n);

    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (std::int64_t i = 0; i < n_paths; ++i) {
        double lr = 0.0;
        for (int t = 0; t < horizon; ++t) {
            lr += drift + vol * rng::normal(cfg.master_seed, static_cast<std::uint64_t>(i),
                                            static_cast<std::uint64_t>(t), 0);
            losses[static_cast<std::size_t>(t)][static_cast<std::size_t>(i)] =
                value * std::fabs(1.0 - std::exp(lr));
        }
        chart.terminal_values[static_cast<std::size_t>(i)] = value * std::exp(lr);
    }
    (void)nt;

    chart.curve.resize(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
        auto& day_losses = losses[static_cast<std::size_t>(t)];
        std::sort(day_losses.begin(), day_losses.end());
        chart.curve[static_cast<std::size_t>(t)] =
            FanPoint{t, upper_quantile(day_losses, 0.01), upper_quantile(day_losses, 0.05)};
    }
    return chart;
}

} // namespace buyback::risk
