#include "buyback/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "buyback/errors.hpp"

namespace buyback::strat {

namespace {

// Shares that cost exactly `value` once linear impact moves the print:
// solve (kappa * vwap / volume) s^2 + vwap * s - value = 0 for s >= 0.
double solve_shares(double value, double vwap, double volume, double kappa) {
    if (kappa == 0.0) return value / vwap;
    const double k = 4.0 * kappa * value / (vwap * volume);
    return 2.0 * value / (vwap * (1.0 + std::sqrt(1.0 + k)));
}

double fill_price(double vwap, double shares, double volume, double kappa) {
    return vwap * (1.0 + kappa * shares / volume);
}

void check_common(const market::PricePath& path, const StrategyParams& params,
                  const RegulatoryLimits& limits) {
    if (path.days.empty()) throw ValidationError("strategy: path has no days");
    if (!(params.target_value > 0.0)) throw ValidationError("strategy: target_value must be positive");
    if (!(params.impact_kappa >= 0.0)) throw ValidationError("strategy: impact_kappa must be non-negative");
    if (!(limits.max_participation > 0.0 && limits.max_participation <= 1.0))
        throw ValidationError("strategy: max_participation must be in (0, 1]");
    if (limits.min_days < 1 || limits.max_days < limits.min_days)
        throw ValidationError("strategy: need 1 <= min_days <= max_days");
}

bool gated_off(const market::PricePath& path, int t, const double* ceiling) {
    return ceiling != nullptr && path.prev_close(t) > *ceiling;
}

std::string money(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

TradeBlotter twap_impl(const market::PricePath& path, const StrategyParams& params,
                       const RegulatoryLimits& limits, const double* ceiling) {
    check_common(path, params, limits);
    const int n_days = limits.max_days;
    if (static_cast<int>(path.days.size()) < n_days)
        throw ValidationError("twap: path shorter than the execution window");

    const double per_day = params.target_value / n_days;
    const double kappa = params.impact_kappa;

    // An equal-value schedule either fits under the cap on every tradable day
    // or the target is infeasible outright.
    double min_capacity = std::numeric_limits<double>::infinity();
    for (int t = 0; t < n_days; ++t) {
        if (gated_off(path, t, ceiling)) continue;
        const auto& d = path.days[static_cast<std::size_t>(t)];
        const double cap_shares = limits.max_participation * d.volume;
        min_capacity = std::min(min_capacity,
                                cap_shares * fill_price(d.vwap, cap_shares, d.volume, kappa));
    }
    if (std::isfinite(min_capacity) && per_day > min_capacity)
        throw InfeasibleError("twap: target value infeasible under the participation cap; "
                              "maximum feasible target is about " + money(min_capacity * n_days));

    TradeBlotter out;
    int traded = 0;
    for (int t = 0; t < n_days; ++t) {
        if (gated_off(path, t, ceiling)) continue;
        const auto& d = path.days[static_cast<std::size_t>(t)];
        const double shares = solve_shares(per_day, d.vwap, d.volume, kappa);
        const double price = fill_price(d.vwap, shares, d.volume, kappa);
        out.fills.push_back(Fill{t, shares, shares * price, price});
        ++traded;
    }
    out.completed = traded == n_days;
    out.completion_day = out.fills.empty() ? -1 : out.fills.back().day_index;
    if (!out.completed)
        out.note = "skipped " + std::to_string(n_days - traded) + " day(s) above the price ceiling";
    return out;
}

TradeBlotter pov_impl(const market::PricePath& path, const StrategyParams& params,
                      const RegulatoryLimits& limits, const double* ceiling) {
    check_common(path, params, limits);
    if (!(params.pov_rate > 0.0) || params.pov_rate > limits.max_participation)
        throw ValidationError("pov: pov_rate must be in (0, max_participation]");

    const double kappa = params.impact_kappa;
    const int n_days = std::min<int>(limits.max_days, static_cast<int>(path.days.size()));

    TradeBlotter out;
    double remaining = params.target_value;
    for (int t = 0; t < n_days; ++t) {
        if (gated_off(path, t, ceiling)) continue;
        const auto& d = path.days[static_cast<std::size_t>(t)];
        double shares = params.pov_rate * d.volume;
        double price = fill_price(d.vwap, shares, d.volume, kappa);
        if (shares * price >= remaining) {
            shares = solve_shares(remaining, d.vwap, d.volume, kappa);
            price = fill_price(d.vwap, shares, d.volume, kappa);
            out.fills.push_back(Fill{t, shares, shares * price, price});
            out.completed = true;
            out.completion_day = t;
            return out;
        }
        out.fills.push_back(Fill{t, shares, shares * price, price});
        remaining -= shares * price;
    }
    out.completion_day = out.fills.empty() ? -1 : out.fills.back().day_index;
    out.note = "target value not reached within the window; remaining " + money(remaining);
    return out;
}

TradeBlotter adaptive_impl(const market::PricePath& path, const StrategyParams& params,
                           const RegulatoryLimits& limits, const double* ceiling) {
    check_common(path, params, limits);
    if (!(params.fast_mult > 0.0) || !(params.trickle_mult >= 0.0) ||
        params.trickle_mult > params.fast_mult)
        throw ValidationError("adaptive: need fast_mult > 0 and 0 <= trickle_mult <= fast_mult");

    const double kappa = params.impact_kappa;
    const int n_days = std::min<int>(limits.max_days, static_cast<int>(path.days.size()));
    const double baseline = params.target_value / limits.max_days;
    const double done_tol = params.target_value * 1e-12;

    TradeBlotter out;
    double remaining = params.target_value;
    double vwap_sum = 0.0; // running sum of daily vwaps, the rolling benchmark source
    for (int t = 0; t < n_days; ++t) {
        const auto& d = path.days[static_cast<std::size_t>(t)];

        double desired;
        if (t == 0) {
            desired = baseline; // no benchmark to compare against yet
        } else {
            const double rolling = vwap_sum / t;
            desired = (path.prev_close(t) < rolling ? params.fast_mult : params.trickle_mult)
                      * baseline;
        }
        // Never fall behind the pace that still completes by max_days, and
        // never run so hot that the target fills before min_days.
        desired = std::max(desired, remaining / (limits.max_days - t));
        if (t < limits.min_days - 1)
            desired = std::min(desired, remaining / (limits.min_days - t));
        desired = std::min(desired, remaining);

        if (desired > 0.0 && !gated_off(path, t, ceiling)) {
            const double cap_shares = limits.max_participation * d.volume;
            double shares = solve_shares(desired, d.vwap, d.volume, kappa);
            shares = std::min(shares, cap_shares);
            const double price = fill_price(d.vwap, shares, d.volume, kappa);
            const double value = shares * price;
            out.fills.push_back(Fill{t, shares, value, price});
            remaining -= value;
        }

        vwap_sum += d.vwap;
        if (remaining <= done_tol) {
            out.completed = true;
            out.completion_day = t;
            return out;
        }
    }
    out.completion_day = out.fills.empty() ? -1 : out.fills.back().day_index;
    out.note = "target value not reached by day " + std::to_string(n_days) +
               "; remaining " + money(remaining);
    return out;
}

} // namespace

double TradeBlotter::gross_value() const {
    double v = 0.0;
    for (const auto& f : fills) v += f.value;
    return v;
}

double TradeBlotter::total_shares() const {
    double s = 0.0;
    for (const auto& f : fills) s += f.shares;
    return s;
}

TradeBlotter run_twap(const market::PricePath& path, const StrategyParams& params,
                      const RegulatoryLimits& limits) {
    return twap_impl(path, params, limits, nullptr);
}

TradeBlotter run_pov(const market::PricePath& path, const StrategyParams& params,
                     const RegulatoryLimits& limits) {
    return pov_impl(path, params, limits, nullptr);
}

TradeBlotter run_adaptive_broker(const market::PricePath& path, const StrategyParams& params,
                                 const RegulatoryLimits& limits) {
    return adaptive_impl(path, params, limits, nullptr);
}

TradeBlotter run_valuation_gated(const market::PricePath& path, const StrategyParams& params,
                                 const RegulatoryLimits& limits, double valuation_ceiling) {
    if (!(valuation_ceiling > 0.0))
        throw ValidationError("valuation gate: ceiling must be positive");
    switch (params.kind) {
        case StrategyKind::Twap: return twap_impl(path, params, limits, &valuation_ceiling);
        case StrategyKind::Pov: return pov_impl(path, params, limits, &valuation_ceiling);
        case StrategyKind::AdaptiveBroker:
            return adaptive_impl(path, params, limits, &valuation_ceiling);
        case StrategyKind::ValuationGated: break;
    }
    throw ValidationError("valuation gate: base strategy must not itself be gated");
}

TradeBlotter run_strategy(const market::PricePath& path, const StrategyParams& params,
                          const RegulatoryLimits& limits) {
    switch (params.kind) {
        case StrategyKind::Twap: return run_twap(path, params, limits);
        case StrategyKind::Pov: return run_pov(path, params, limits);
        case StrategyKind::AdaptiveBroker: return run_adaptive_broker(path, params, limits);
        case StrategyKind::ValuationGated: {
            StrategyParams base = params;
            base.kind = params.gated_base;
            return run_valuation_gated(path, base, limits, params.valuation_ceiling);
        }
    }
    throw ValidationError("strategy: unknown kind");
}

} // namespace buyback::strat
