#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>

#include "buyback/errors.hpp"
#include "buyback/experiments.hpp"

using namespace buyback;

namespace {

// Exact central binomial mass C(n, n/2) / 2^n, computed in 128-bit integers.
double central_binomial_mass(int n) {
    unsigned __int128 c = 1;
    const int k = n / 2;
    for (int i = 1; i <= k; ++i) {
        c *= static_cast<unsigned>(n - k + i);
        c /= static_cast<unsigned>(i);
    }
    return std::ldexp(static_cast<double>(c), -n);
}

game::CoinGameSpec spec_of(game::CoinPolicy policy, int n_min = 100, int n_max = 150) {
    game::CoinGameSpec s;
    s.policy = policy;
    s.n_min = n_min;
    s.n_max = n_max;
    return s;
}

market::ScenarioConfig study_config(double sigma, std::uint64_t seed) {
    market::ScenarioConfig cfg;
    cfg.initial_price = 100.0;
    cfg.sigma_annual = sigma;
    cfg.horizon_days = 125;
    cfg.adv_shares = 5e6;
    cfg.master_seed = seed;
    return cfg;
}

strat::StrategyParams params_of(strat::StrategyKind kind, double target) {
    strat::StrategyParams p;
    p.kind = kind;
    p.target_value = target;
    return p;
}

} // namespace

TEST_CASE("forced scoring at one hundred flips loses slightly more than it wins") {
    const auto r = game::coin_game_exact(spec_of(game::CoinPolicy::FixedHorizon));
    // Ties eat C(100,50)/2^100 of the mass and count as losses; the rest splits evenly.
    const double tie = central_binomial_mass(100);
    CHECK(r.tie_probability == doctest::Approx(tie).epsilon(1e-12));
    CHECK(r.win_probability == doctest::Approx(0.5 * (1.0 - tie)).epsilon(1e-12));
    CHECK(r.win_probability == doctest::Approx(0.4602054).epsilon(1e-6));
    CHECK(r.max_mass_error <= 1e-12);
}

TEST_CASE("freedom over when to stop beats the forced horizon") {
    const auto fixed = game::coin_game_exact(spec_of(game::CoinPolicy::FixedHorizon));
    const auto ahead = game::coin_game_exact(spec_of(game::CoinPolicy::StopWhenAhead));
    const auto optimal = game::coin_game_exact(spec_of(game::CoinPolicy::StopOptimal));

    CHECK(ahead.win_probability > fixed.win_probability);
    CHECK(ahead.win_probability > 0.5); // better than a fair coin, with no edge per flip
    CHECK(ahead.win_probability < 0.7);

    // Stopping on any positive lead locks in a certain win, so the
    // value-maximising rule can do no better and no worse.
    CHECK(optimal.win_probability == doctest::Approx(ahead.win_probability).epsilon(1e-12));
    CHECK(optimal.win_probability >= ahead.win_probability - 1e-12);

    CHECK(fixed.max_mass_error <= 1e-12);
    CHECK(ahead.max_mass_error <= 1e-12);
    CHECK(optimal.max_mass_error <= 1e-12);
}

TEST_CASE("a longer stopping window can only help") {
    double last = 0.0;
    for (int n_max : {100, 110, 150, 200}) {
        const auto r = game::coin_game_exact(spec_of(game::CoinPolicy::StopWhenAhead, 100, n_max));
        CHECK(r.win_probability >= last - 1e-15);
        last = r.win_probability;
    }
    // A window of zero extra flips collapses to the forced game.
    const auto pinned = game::coin_game_exact(spec_of(game::CoinPolicy::StopWhenAhead, 100, 100));
    const auto fixed = game::coin_game_exact(spec_of(game::CoinPolicy::FixedHorizon, 100, 100));
    CHECK(pinned.win_probability == doctest::Approx(fixed.win_probability).epsilon(1e-14));
}

TEST_CASE("tiny games match pencil and paper") {
    const auto one = game::coin_game_exact(spec_of(game::CoinPolicy::FixedHorizon, 1, 1));
    CHECK(one.win_probability == 0.5);
    CHECK(one.tie_probability == 0.0);

    const auto two = game::coin_game_exact(spec_of(game::CoinPolicy::FixedHorizon, 2, 2));
    CHECK(two.win_probability == 0.25);
    CHECK(two.tie_probability == 0.5);

    // stop-when-ahead over [1,2]: win on the first head (1/2), or on TH... never,
    // a tail puts the lead at -1 and one more flip cannot make it positive.
    const auto w12 = game::coin_game_exact(spec_of(game::CoinPolicy::StopWhenAhead, 1, 2));
    CHECK(w12.win_probability == 0.5);

    // over [1,3]: T then HH recovers, adding 1/8
    const auto w13 = game::coin_game_exact(spec_of(game::CoinPolicy::StopWhenAhead, 1, 3));
    CHECK(w13.win_probability == 0.625);

    CHECK_THROWS_AS(game::coin_game_exact(spec_of(game::CoinPolicy::FixedHorizon, 0, 5)),
                    ValidationError);
    CHECK_THROWS_AS(game::coin_game_exact(spec_of(game::CoinPolicy::StopWhenAhead, 10, 5)),
                    ValidationError);
}

TEST_CASE("monte carlo coin games agree with the exact chances") {
    const auto fixed = game::coin_game_exact(spec_of(game::CoinPolicy::FixedHorizon));
    const auto ahead = game::coin_game_exact(spec_of(game::CoinPolicy::StopWhenAhead));

    const double mc_fixed = game::coin_game_mc(spec_of(game::CoinPolicy::FixedHorizon), 1000000, 17);
    CHECK(std::fabs(mc_fixed - fixed.win_probability) < 0.005);

    const double mc_ahead =
        game::coin_game_mc(spec_of(game::CoinPolicy::StopWhenAhead), 1000000, 17);
    CHECK(std::fabs(mc_ahead - ahead.win_probability) < 0.005);
}

TEST_CASE("monte carlo coin games are thread-count independent") {
    const auto spec = spec_of(game::CoinPolicy::StopWhenAhead);
    const double one = game::coin_game_mc(spec, 200000, 23, 1);
    const double four = game::coin_game_mc(spec, 200000, 23, 4);
    const double eight = game::coin_game_mc(spec, 200000, 23, 8);
    const double serial = game::coin_game_mc_serial(spec, 200000, 23);
    CHECK(one == four);
    CHECK(four == eight);
    CHECK(eight == serial);
    CHECK(game::coin_game_mc(spec, 200000, 24) != one); // seed actually matters
}

TEST_CASE("an even schedule never loses to the mean-of-vwaps yardstick") {
    // Value-weighted average price of an equal-value schedule is the harmonic
    // mean of its prints, which cannot exceed the arithmetic benchmark.
    const auto cfg = study_config(0.35, 41);
    strat::RegulatoryLimits limits;
    limits.max_days = 125;
    const auto s = game::benchmark_beat_study(cfg, params_of(strat::StrategyKind::Twap, 5e7),
                                              limits, 2000);
    CHECK(s.n_paths == 2000);
    CHECK(s.underperformance_rate == 0.0);
    CHECK(s.mean > 0.0);
    CHECK(s.p01 >= 0.0);
}

TEST_CASE("flat markets leave nothing to win or lose") {
    const auto cfg = study_config(0.0, 1);
    strat::RegulatoryLimits limits;
    limits.max_days = 125;
    const auto s = game::benchmark_beat_study(cfg, params_of(strat::StrategyKind::Twap, 5e7),
                                              limits, 1000);
    CHECK(s.underperformance_rate == 0.0);
    CHECK(s.mean == 0.0);
    CHECK(s.stddev == 0.0);
    CHECK(s.p01 == 0.0);
    CHECK(s.p99 == 0.0);
}

TEST_CASE("the adaptive broker very rarely loses to its own benchmark") {
    const auto cfg = study_config(0.35, 29);
    strat::RegulatoryLimits limits;
    limits.max_days = 125;
    const auto s = game::benchmark_beat_study(
        cfg, params_of(strat::StrategyKind::AdaptiveBroker, 1e8), limits, 3000);
    CHECK(s.underperformance_rate < 0.01);
    CHECK(s.mean > 0.0);
    CHECK(s.p05 <= s.p25);
    CHECK(s.p25 <= s.p50);
    CHECK(s.p50 <= s.p75);
    CHECK(s.p75 <= s.p95);
}

TEST_CASE("study results are identical in serial and parallel") {
    const auto cfg = study_config(0.35, 5);
    strat::RegulatoryLimits limits;
    limits.max_days = 125;
    const auto params = params_of(strat::StrategyKind::AdaptiveBroker, 1e8);
    const auto par = game::benchmark_beat_study(cfg, params, limits, 500, 4);
    const auto ser = game::benchmark_beat_study_serial(cfg, params, limits, 500);
    CHECK(par.underperformance_rate == ser.underperformance_rate);
    CHECK(par.mean == ser.mean);
    CHECK(par.stddev == ser.stddev);
    CHECK(par.p01 == ser.p01);
    CHECK(par.p50 == ser.p50);
    CHECK(par.p99 == ser.p99);
}

TEST_CASE("infeasible studies surface the path error instead of hanging") {
    auto cfg = study_config(0.35, 5);
    cfg.adv_shares = 10.0;
    strat::RegulatoryLimits limits;
    limits.max_days = 125;
    CHECK_THROWS_AS(game::benchmark_beat_study(cfg, params_of(strat::StrategyKind::Twap, 1e9),
                                               limits, 100),
                    ValidationError);
}

TEST_CASE("volatility collapse freezes the tape mid-programme") {
    const auto cfg = study_config(0.35, 77);
    const auto normal = market::generate_path(cfg, 3);
    const auto collapsed = game::generate_collapse_path(cfg, 3, 60);

    REQUIRE(collapsed.days.size() == normal.days.size());
    for (int t = 0; t < 60; ++t)
        CHECK(collapsed.days[static_cast<std::size_t>(t)].close ==
              normal.days[static_cast<std::size_t>(t)].close);
    CHECK(collapsed.days[60].close != normal.days[60].close);
    CHECK(collapsed.config_digest != normal.config_digest);

    // After dozens of halvings the price is pinned in place.
    const double late = collapsed.days[115].close;
    for (std::size_t t = 116; t < collapsed.days.size(); ++t)
        CHECK(collapsed.days[t].close == doctest::Approx(late).epsilon(1e-9));

    // The adaptive rule still completes and still mostly wins when its signal dies.
    strat::RegulatoryLimits limits;
    limits.max_days = 125;
    const auto s = game::volatility_collapse_study(
        cfg, params_of(strat::StrategyKind::AdaptiveBroker, 1e8), limits, 1000, 60);
    CHECK(s.n_paths == 1000);
    CHECK(s.underperformance_rate < 0.05);
}
