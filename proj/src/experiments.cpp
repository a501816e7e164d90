#include "buyback/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "buyback/benchmarks.hpp"
#include "buyback/errors.hpp"
#include "buyback/rng.hpp"

namespace buyback::game {

namespace {

constexpr std::uint64_t kCoinStream = 11;

void check_spec(const CoinGameSpec& spec) {
    if (spec.n_min < 1 || spec.n_max < spec.n_min)
        throw ValidationError("coin game: need 1 <= n_min <= n_max");
    if (spec.n_max > 100000) throw ValidationError("coin game: n_max too large");
}

int resolve_threads(int threads) {
#ifdef _OPENMP
    return threads > 0 ? threads : omp_get_max_threads();
#else
    (void)threads;
    return 1;
#endif
}

// Lead distribution holder: index offset + lead.
struct LeadDist {
    std::vector<double> p;
    int offset;

    explicit LeadDist(int max_lead) : p(2 * static_cast<std::size_t>(max_lead) + 1, 0.0),
                                      offset(max_lead) {
        p[static_cast<std::size_t>(offset)] = 1.0;
    }

    void step() {
        std::vector<double> next(p.size(), 0.0);
        for (std::size_t i = 0; i < p.size(); ++i) {
            if (p[i] == 0.0) continue;
            next[i - 1] += 0.5 * p[i];
            next[i + 1] += 0.5 * p[i];
        }
        p.swap(next);
    }

    double mass() const {
        double m = 0.0;
        for (double v : p) m += v;
        return m;
    }

    double positive_mass() const {
        double m = 0.0;
        for (std::size_t i = static_cast<std::size_t>(offset) + 1; i < p.size(); ++i) m += p[i];
        return m;
    }

    void absorb_positive() {
        for (std::size_t i = static_cast<std::size_t>(offset) + 1; i < p.size(); ++i) p[i] = 0.0;
    }

    double at_zero() const { return p[static_cast<std::size_t>(offset)]; }
};

// Forward absorption pass shared by the stopping policies (the optimal rule
// coincides with stop-when-ahead: a positive lead is a certain win, so it is
// never worth continuing past one).
CoinGameResult stopping_forward(const CoinGameSpec& spec) {
    LeadDist dist(spec.n_max + 1);
    CoinGameResult r;
    double win = 0.0;
    for (int t = 1; t <= spec.n_max; ++t) {
        dist.step();
        if (t >= spec.n_min) {
            win += dist.positive_mass();
            dist.absorb_positive();
        }
        r.max_mass_error = std::max(r.max_mass_error, std::fabs(win + dist.mass() - 1.0));
    }
    r.win_probability = win;
    r.tie_probability = dist.at_zero();
    return r;
}

// Backward induction value of the optimal stopping rule; independent route to
// the same number as the forward pass.
double optimal_value(const CoinGameSpec& spec) {
    const int n = spec.n_max;
    const std::size_t width = 2 * static_cast<std::size_t>(n) + 1;
    const int offset = n;
    std::vector<double> v(width, 0.0);
    for (int lead = 1; lead <= n; ++lead) v[static_cast<std::size_t>(offset + lead)] = 1.0;
    std::vector<double> prev(width, 0.0);
    for (int t = n - 1; t >= 0; --t) {
        prev.swap(v);
        for (int lead = -t; lead <= t; ++lead) {
            const auto i = static_cast<std::size_t>(offset + lead);
            double val = 0.5 * (prev[i + 1] + prev[i - 1]);
            if (t >= spec.n_min && lead > 0) val = 1.0; // stopping locks in the win
            v[i] = val;
        }
    }
    return v[static_cast<std::size_t>(offset)];
}

bool trial_wins(const CoinGameSpec& spec, std::uint64_t seed, std::int64_t trial) {
    const int flips = spec.policy == CoinPolicy::FixedHorizon ? spec.n_min : spec.n_max;
    int lead = 0;
    std::uint64_t word = 0;
    for (int j = 0; j < flips; ++j) {
        if (j % 64 == 0)
            word = rng::draw_u64(seed, static_cast<std::uint64_t>(trial),
                                 static_cast<std::uint64_t>(j / 64), kCoinStream);
        lead += (word >> (j % 64)) & 1u ? 1 : -1;
        if (spec.policy != CoinPolicy::FixedHorizon && j + 1 >= spec.n_min && lead > 0)
            return true;
    }
    return spec.policy == CoinPolicy::FixedHorizon && lead > 0;
}

struct StudyOptions {
    int collapse_day = -1; // < 0 means the plain scenario
};

OutcomeSummary summarize(std::vector<double>& outperformance) {
    OutcomeSummary s;
    s.n_paths = static_cast<std::int64_t>(outperformance.size());
    std::int64_t under = 0;
    double sum = 0.0;
    for (double o : outperformance) {
        if (o < 0.0) ++under;
        sum += o;
    }
    s.underperformance_rate = static_cast<double>(under) / static_cast<double>(s.n_paths);
    s.mean = sum / static_cast<double>(s.n_paths);
    double ss = 0.0;
    for (double o : outperformance) ss += (o - s.mean) * (o - s.mean);
    s.stddev = s.n_paths > 1 ? std::sqrt(ss / static_cast<double>(s.n_paths - 1)) : 0.0;

    std::sort(outperformance.begin(), outperformance.end());
    auto pick = [&](double q) {
        auto k = static_cast<std::size_t>(q * static_cast<double>(outperformance.size()));
        if (k >= outperformance.size()) k = outperformance.size() - 1;
        return outperformance[k];
    };
    s.p01 = pick(0.01);
    s.p05 = pick(0.05);
    s.p25 = pick(0.25);
    s.p50 = pick(0.50);
    s.p75 = pick(0.75);
    s.p95 = pick(0.95);
    s.p99 = pick(0.99);
    return s;
}

double score_path(const market::PricePath& path, const strat::StrategyParams& params,
                  const strat::RegulatoryLimits& limits) {
    const auto blotter = strat::run_strategy(path, params, limits);
    const int window_end = blotter.completion_day; // realised window: day 0..completion
    if (window_end < 0) throw ValidationError("study: strategy produced an empty blotter");
    double vwap_sum = 0.0;
    for (int t = 0; t <= window_end; ++t) vwap_sum += path.days[static_cast<std::size_t>(t)].vwap;
    const double benchmark = vwap_sum / (window_end + 1);
    return bench::purchase_stats(blotter, benchmark).outperformance;
}

OutcomeSummary study_core(const market::ScenarioConfig& cfg, const strat::StrategyParams& params,
                          const strat::RegulatoryLimits& limits, std::int64_t n_paths,
                          int threads, const StudyOptions& opt) {
    market::validate(cfg);
    if (n_paths < 1) throw ValidationError("study: need at least one path");

    std::vector<double> outperformance(static_cast<std::size_t>(n_paths));
    std::atomic<bool> failed{false};
    std::string error;

    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt)
#endif
    for (std::int64_t i = 0; i < n_paths; ++i) {
        if (failed.load(std::memory_order_relaxed)) continue;
        try {
            const auto path = opt.collapse_day < 0
                                  ? market::generate_path(cfg, i)
                                  : generate_collapse_path(cfg, i, opt.collapse_day);
            outperformance[static_cast<std::size_t>(i)] = score_path(path, params, limits);
        } catch (const std::exception& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
            {
                if (!failed.exchange(true))
                    error = "study: path " + std::to_string(i) + ": " + e.what();
            }
        }
    }
    (void)nt;
    if (failed) throw ValidationError(error);
    return summarize(outperformance);
}

} // namespace

CoinGameResult coin_game_exact(const CoinGameSpec& spec) {
    check_spec(spec);
    switch (spec.policy) {
        case CoinPolicy::FixedHorizon: {
            LeadDist dist(spec.n_min);
            CoinGameResult r;
            for (int t = 1; t <= spec.n_min; ++t) {
                dist.step();
                r.max_mass_error = std::max(r.max_mass_error, std::fabs(dist.mass() - 1.0));
            }
            r.win_probability = dist.positive_mass();
            r.tie_probability = dist.at_zero();
            return r;
        }
        case CoinPolicy::StopWhenAhead:
            return stopping_forward(spec);
        case CoinPolicy::StopOptimal: {
            CoinGameResult r = stopping_forward(spec); // tie mass and conservation diagnostics
            r.win_probability = optimal_value(spec);
            return r;
        }
    }
    throw ValidationError("coin game: unknown policy");
}

double coin_game_mc(const CoinGameSpec& spec, std::int64_t trials, std::uint64_t seed,
                    int threads) {
    check_spec(spec);
    if (trials < 1) throw ValidationError("coin game: need at least one trial");
    std::int64_t wins = 0;
    const int nt = resolve_threads(threads);
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(nt) reduction(+ : wins)
#endif
    for (std::int64_t i = 0; i < trials; ++i) wins += trial_wins(spec, seed, i) ? 1 : 0;
    (void)nt;
    return static_cast<double>(wins) / static_cast<double>(trials);
}

double coin_game_mc_serial(const CoinGameSpec& spec, std::int64_t trials, std::uint64_t seed) {
    check_spec(spec);
    if (trials < 1) throw ValidationError("coin game: need at least one trial");
    std::int64_t wins = 0;
    for (std::int64_t i = 0; i < trials; ++i) wins += trial_wins(spec, seed, i) ? 1 : 0;
    return static_cast<double>(wins) / static_cast<double>(trials);
}

OutcomeSummary benchmark_beat_study(const market::ScenarioConfig& cfg,
                                    const strat::StrategyParams& params,
                                    const strat::RegulatoryLimits& limits,
                                    std::int64_t n_paths, int threads) {
    return study_core(cfg, params, limits, n_paths, threads, StudyOptions{});
}

OutcomeSummary benchmark_beat_study_serial(const market::ScenarioConfig& cfg,
                                           const strat::StrategyParams& params,
                                           const strat::RegulatoryLimits& limits,
                                           std::int64_t n_paths) {
    OutcomeSummary s;
    market::validate(cfg);
    if (n_paths < 1) throw ValidationError("study: need at least one path");
    std::vector<double> outperformance(static_cast<std::size_t>(n_paths));
    for (std::int64_t i = 0; i < n_paths; ++i)
        outperformance[static_cast<std::size_t>(i)] =
            score_path(market::generate_path(cfg, i), params, limits);
    return summarize(outperformance);
}

market::PricePath generate_collapse_path(const market::ScenarioConfig& cfg,
                                         std::int64_t path_index, int collapse_day) {
    market::validate(cfg);
    if (collapse_day < 0) throw ValidationError("collapse path: collapse_day must be non-negative");

    // Mirrors the standard generator but halves sigma every day once the
    // collapse starts. Streams are local to this generator.
    const double dt = 1.0 / cfg.trading_days_per_year;
    const auto path_key = static_cast<std::uint64_t>(path_index);

    market::PricePath out;
    out.config_digest = market::config_digest(cfg) ^ 0xc0a11a5e00000000ull;
    out.initial_price = cfg.initial_price;
    out.days.resize(static_cast<std::size_t>(cfg.horizon_days));

    double prev = cfg.initial_price;
    for (int t = 0; t < cfg.horizon_days; ++t) {
        const double decay = t < collapse_day ? 1.0 : std::pow(0.5, t - collapse_day + 1);
        const double sigma = cfg.sigma_annual * decay;
        const auto day = static_cast<std::uint64_t>(t);
        const double eps = rng::normal(cfg.master_seed, path_key, day, 0);
        const double close =
            prev * std::exp((cfg.drift_annual - 0.5 * sigma * sigma) * dt + sigma * std::sqrt(dt) * eps);
        double vwap = std::sqrt(prev * close);
        if (cfg.intraday_noise_sigma > 0.0)
            vwap *= std::exp(cfg.intraday_noise_sigma * rng::normal(cfg.master_seed, path_key, day, 1));
        double volume = cfg.adv_shares;
        if (cfg.volume_sigma > 0.0)
            volume *= std::exp(cfg.volume_sigma * rng::normal(cfg.master_seed, path_key, day, 2));
        out.days[static_cast<std::size_t>(t)] = market::MarketDay{t, close, vwap, volume};
        prev = close;
    }
    return out;
}

OutcomeSummary volatility_collapse_study(const market::ScenarioConfig& cfg,
                                         const strat::StrategyParams& params,
                                         const strat::RegulatoryLimits& limits,
                                         std::int64_t n_paths, int collapse_day, int threads) {
    StudyOptions opt;
    opt.collapse_day = collapse_day;
    if (collapse_day < 0) throw ValidationError("collapse study: collapse_day must be non-negative");
    return study_core(cfg, params, limits, n_paths, threads, opt);
}

} // namespace buyback::game
