#pragma once

namespace buyback::nav {

// Closed-end fund style accounting: net asset value per share, the discount
// the market price stands at, and the accretion from buying shares back below
// asset value.

struct TrustState {
    double asset_value = 0.0;        // total assets, currency
    double shares_outstanding = 0.0;
    double share_price = 0.0;        // market price per share
};

double nav_per_share(const TrustState& s);

// 1 - price / nav; positive when the shares trade below asset value.
double discount(const TrustState& s);

struct BuybackOutcome {
    double shares_bought = 0.0;
    double pct_of_outstanding = 0.0;
    double new_nav_per_share = 0.0;
};

// Spends `spend` buying back shares at exec_price. Requires spend in
// (0, asset_value] and that the purchase leaves shares outstanding.
// Buying below nav raises nav per share; at nav it is unchanged.
BuybackOutcome buyback_outcome(const TrustState& s, double spend, double exec_price);

} // namespace buyback::nav
