#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "buyback/errors.hpp"
#include "buyback/risk.hpp"

using namespace buyback;

namespace {

market::ScenarioConfig mc_config(int days_per_year, std::uint64_t seed) {
    market::ScenarioConfig cfg;
    cfg.initial_price = 100.0;
    cfg.sigma_annual = 0.35;
    cfg.trading_days_per_year = days_per_year;
    cfg.horizon_days = 125;
    cfg.adv_shares = 5e6;
    cfg.master_seed = seed;
    return cfg;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// P(|1 - e^X| > q) for the martingale log-return X ~ N(-s^2/2, s^2):
// mass above ln(1+q) plus mass below ln(1-q).
double two_sided_tail(double q, double s) {
    const double m = -0.5 * s * s;
    double tail = 1.0 - normal_cdf((std::log1p(q) - m) / s);
    if (q < 1.0) tail += normal_cdf((std::log1p(-q) - m) / s);
    return tail;
}

// Exact loss quantile of the driftless lognormal, found by bisection.
double exact_lognormal_quantile(double p, double s) {
    double lo = 1e-12, hi = 0.999999999;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (two_sided_tail(mid, s) > p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST_CASE("closed form var reproduces the published headline figures") {
    using risk::closed_form_var;
    using risk::VarQuery;

    // 870m over half a trading year at 35% vol
    CHECK(closed_form_var(VarQuery{870e6, 1.0, 0.35, 125, 250}) ==
          doctest::Approx(215e6).epsilon(0.01));

    // 2022 aggregate, 99% and 95% confidence
    CHECK(closed_form_var(VarQuery{280e9, 2.33, 0.35, 125, 252}) ==
          doctest::Approx(161e9).epsilon(0.01));
    CHECK(closed_form_var(VarQuery{280e9, 1.96, 0.35, 125, 252}) ==
          doctest::Approx(135e9).epsilon(0.01));

    // five-year aggregate
    CHECK(closed_form_var(VarQuery{1.12e12, 2.33, 0.35, 125, 252}) ==
          doctest::Approx(643e9).epsilon(0.01));
    CHECK(closed_form_var(VarQuery{1.12e12, 1.96, 0.35, 125, 252}) ==
          doctest::Approx(541e9).epsilon(0.01));
}

TEST_CASE("aggregate var scales the affected slice of the market") {
    // 1.4tn of programmes, a fifth in the window at once. The quoted headline
    // rounds 69.3bn up to 70bn, so the formula is pinned tight and the rounded
    // figure loose.
    const double one_sd =
        risk::market_aggregate_var(1.4e12, 0.20, 1.0, 0.35, 125, 250);
    CHECK(one_sd == doctest::Approx(1.4e12 * 0.20 * 0.35 * std::sqrt(0.5)).epsilon(1e-12));
    CHECK(one_sd == doctest::Approx(70e9).epsilon(0.011));

    const double two_sd =
        risk::market_aggregate_var(1.4e12, 0.20, 2.0, 0.35, 125, 250);
    CHECK(two_sd == doctest::Approx(2.0 * one_sd).epsilon(1e-12));
    CHECK(two_sd == doctest::Approx(140e9).epsilon(0.011));

    CHECK(risk::market_aggregate_var(1.4e12, 0.0, 1.0, 0.35, 125, 250) == 0.0);
    CHECK_THROWS_AS(risk::market_aggregate_var(1.4e12, 1.2, 1.0, 0.35, 125, 250),
                    ValidationError);
}

TEST_CASE("closed form var is linear in exposure and square-root in time") {
    using risk::closed_form_var;
    using risk::VarQuery;

    CHECK(closed_form_var(VarQuery{1e9, 1.0, 0.0, 125, 250}) == 0.0);
    CHECK(closed_form_var(VarQuery{2e9, 1.5, 0.35, 125, 250}) ==
          doctest::Approx(3.0 * closed_form_var(VarQuery{1e9, 1.0, 0.35, 125, 250}))
              .epsilon(1e-14));
    // Quadrupling the horizon exactly doubles the risk.
    CHECK(closed_form_var(VarQuery{1e9, 1.0, 0.35, 500, 250}) ==
          2.0 * closed_form_var(VarQuery{1e9, 1.0, 0.35, 125, 250}));

    CHECK_THROWS_AS(closed_form_var(VarQuery{1e9, 0.0, 0.35, 125, 250}), ValidationError);
    CHECK_THROWS_AS(closed_form_var(VarQuery{1e9, 1.0, 0.35, 0, 250}), ValidationError);
    CHECK_THROWS_AS(closed_form_var(VarQuery{1e9, 1.0, 0.35, 125, 260}), ValidationError);
}

TEST_CASE("monte carlo var sits on the exact lognormal quantile") {
    const auto cfg = mc_config(252, 7);
    const double value = 1e9;
    const double s = 0.35 * std::sqrt(125.0 / 252.0);

    const double mc5 = risk::mc_var(cfg, value, 0.05, 100000);
    const double exact5 = value * exact_lognormal_quantile(0.05, s);
    CHECK(mc5 == doctest::Approx(exact5).epsilon(0.02));

    // and within the coarser normal approximation the closed form uses
    const double closed5 = risk::closed_form_var(risk::VarQuery{value, 1.96, 0.35, 125, 252});
    CHECK(mc5 == doctest::Approx(closed5).epsilon(0.10));

    const double mc32 = risk::mc_var(cfg, value, 0.32, 100000);
    const double closed32 = risk::closed_form_var(risk::VarQuery{value, 1.0, 0.35, 125, 252});
    CHECK(mc32 == doctest::Approx(closed32).epsilon(0.10));
    CHECK(mc32 == doctest::Approx(value * exact_lognormal_quantile(0.32, s)).epsilon(0.02));

    CHECK(mc5 > mc32);
}

TEST_CASE("monte carlo var is deterministic for any thread count") {
    const auto cfg = mc_config(252, 99);
    const double value = 5e8;
    const double one = risk::mc_var(cfg, value, 0.05, 100000, 1);
    const double four = risk::mc_var(cfg, value, 0.05, 100000, 4);
    const double eight = risk::mc_var(cfg, value, 0.05, 100000, 8);
    const double serial = risk::mc_var_serial(cfg, value, 0.05, 100000);
    CHECK(one == four);
    CHECK(four == eight);
    CHECK(eight == serial);

    // a different seed moves the estimate, so the equalities above are not vacuous
    auto other = cfg;
    other.master_seed = 100;
    CHECK(risk::mc_var(other, value, 0.05, 100000) != one);
}

TEST_CASE("monte carlo var converges as paths double") {
    const auto cfg = mc_config(252, 13);
    const double a = risk::mc_var(cfg, 1e9, 0.05, 100000);
    const double b = risk::mc_var(cfg, 1e9, 0.05, 200000);
    CHECK(a == doctest::Approx(b).epsilon(0.02));
}

TEST_CASE("zero volatility carries zero risk") {
    auto cfg = mc_config(252, 7);
    cfg.sigma_annual = 0.0;
    CHECK(risk::mc_var(cfg, 1e9, 0.05, 2000) == 0.0);
    CHECK(risk::mc_var(cfg, 1e9, 0.5, 2000) == 0.0);
}

TEST_CASE("monte carlo var rejects bad arguments") {
    const auto cfg = mc_config(252, 7);
    CHECK_THROWS_AS(risk::mc_var(cfg, 1e9, 0.05, 999), ValidationError);
    CHECK_THROWS_AS(risk::mc_var(cfg, 1e9, 0.0, 10000), ValidationError);
    CHECK_THROWS_AS(risk::mc_var(cfg, 1e9, 0.6, 10000), ValidationError);
    CHECK_THROWS_AS(risk::mc_var(cfg, -1.0, 0.05, 10000), ValidationError);
}

TEST_CASE("residual risk drains to zero as the unwind completes") {
    const auto cfg = mc_config(250, 1);
    const double value = 870e6, z = 1.0;
    const int n = 125;
    const auto profile = risk::residual_var_profile(cfg, value, n, z);
    REQUIRE(profile.size() == static_cast<std::size_t>(n) + 1);

    const double sigma_daily = 0.35 / std::sqrt(250.0);
    const double whole = z * sigma_daily * value *
                         std::sqrt((n + 1.0) * (2.0 * n + 1.0) / (6.0 * n));
    CHECK(profile.front().residual_var == doctest::Approx(whole).epsilon(1e-12));
    CHECK(profile.back().residual_var == 0.0);
    CHECK(profile.back().day == n);

    for (std::size_t i = 1; i < profile.size(); ++i) {
        CHECK(profile[i].residual_var < profile[i - 1].residual_var);
        CHECK(profile[i].day == static_cast<int>(i));
    }
}

TEST_CASE("a four-month unwind roughly doubles the risk of a six-week one") {
    const auto cfg = mc_config(250, 1);
    const auto slow = risk::residual_var_profile(cfg, 1e9, 120, 1.0);
    const auto fast = risk::residual_var_profile(cfg, 1e9, 30, 1.0);
    const double ratio = slow.front().residual_var / fast.front().residual_var;
    CHECK(ratio > 1.9);
    CHECK(ratio < 2.2);
    CHECK(ratio == doctest::Approx(std::sqrt((121.0 * 241.0 / 720.0) /
                                             (31.0 * 61.0 / 180.0))).epsilon(1e-12));
}

TEST_CASE("one-day unwind carries exactly one day of risk") {
    const auto cfg = mc_config(250, 1);
    const auto profile = risk::residual_var_profile(cfg, 2e8, 1, 1.96);
    REQUIRE(profile.size() == 2);
    CHECK(profile[0].residual_var ==
          doctest::Approx(1.96 * 0.35 / std::sqrt(250.0) * 2e8).epsilon(1e-12));
    CHECK(profile[1].residual_var == 0.0);
}

TEST_CASE("fan chart widens with the horizon and matches the terminal var") {
    auto cfg = mc_config(252, 31);
    cfg.horizon_days = 40;
    const double value = 1e9;
    const auto chart = risk::mc_fan_chart(cfg, value, 4000);

    REQUIRE(chart.curve.size() == 40);
    REQUIRE(chart.terminal_values.size() == 4000);
    for (std::size_t t = 0; t < chart.curve.size(); ++t) {
        CHECK(chart.curve[t].day == static_cast<int>(t));
        CHECK(chart.curve[t].var_1pct >= chart.curve[t].var_5pct);
        CHECK(chart.curve[t].var_5pct >= 0.0);
    }
    CHECK(chart.curve.back().var_5pct > 2.0 * chart.curve.front().var_5pct);

    // Last-day quantile is the terminal var computed from the same draws.
    CHECK(chart.curve.back().var_5pct == risk::mc_var(cfg, value, 0.05, 4000));

    // Driftless paths keep the expected value at par.
    double sum = 0.0;
    for (double v : chart.terminal_values) sum += v;
    CHECK(sum / 4000.0 == doctest::Approx(value).epsilon(0.02));

    // Identical across thread counts.
    const auto two = risk::mc_fan_chart(cfg, value, 4000, 2);
    bool same = two.curve.size() == chart.curve.size();
    for (std::size_t t = 0; same && t < chart.curve.size(); ++t)
        same = two.curve[t].var_1pct == chart.curve[t].var_1pct &&
               two.curve[t].var_5pct == chart.curve[t].var_5pct;
    CHECK(same);
}
