#include "buyback/valuation.hpp"

#include "buyback/errors.hpp"

namespace buyback::nav {

namespace {

void check_state(const TrustState& s) {
    if (!(s.asset_value > 0.0)) throw ValidationError("trust state: asset_value must be positive");
    if (!(s.shares_outstanding > 0.0))
        throw ValidationError("trust state: shares_outstanding must be positive");
    if (!(s.share_price > 0.0)) throw ValidationError("trust state: share_price must be positive");
}

} // namespace

double nav_per_share(const TrustState& s) {
    check_state(s);
    return s.asset_value / s.shares_outstanding;
}

double discount(const TrustState& s) {
    return 1.0 - s.share_price / nav_per_share(s);
}

BuybackOutcome buyback_outcome(const TrustState& s, double spend, double exec_price) {
    check_state(s);
    if (!(spend > 0.0) || spend > s.asset_value)
        throw ValidationError("buyback: spend must be in (0, asset_value]");
    if (!(exec_price > 0.0)) throw ValidationError("buyback: exec_price must be positive");

    BuybackOutcome o;
    o.shares_bought = spend / exec_price;
    if (o.shares_bought >= s.shares_outstanding)
        throw ValidationError("buyback: purchase would retire all outstanding shares");
    o.pct_of_outstanding = o.shares_bought / s.shares_outstanding;
    o.new_nav_per_share = (s.asset_value - spend) / (s.shares_outstanding - o.shares_bought);
    return o;
}

} // namespace buyback::nav
