#include "buyback/fees.hpp"

#include <cmath>

#include "buyback/errors.hpp"

namespace buyback::fees {

namespace {

void check_terms(const FeeTerms& t) {
    if (!std::isfinite(t.guarantee_bps))
        throw ValidationError("fee terms: guarantee_bps must be finite");
    if (!(t.share_pct >= 0.0 && t.share_pct <= 1.0))
        throw ValidationError("fee terms: share_pct must be in [0, 1]");
    if (!(t.agency_bps >= 0.0))
        throw ValidationError("fee terms: agency_bps must be non-negative");
}

} // namespace

double compute_fee_bps(double outperformance_bps, const FeeTerms& terms) {
    check_terms(terms);
    double fee = 0.0;
    switch (terms.kind) {
        case FeeKind::VwapGuarantee:
            fee = outperformance_bps - terms.guarantee_bps;
            break;
        case FeeKind::VwapMinus:
            fee = (outperformance_bps - terms.guarantee_bps) * terms.share_pct;
            break;
        case FeeKind::FlatAgency:
            return terms.agency_bps;
    }
    if (!terms.allow_negative_fee && fee < 0.0) fee = 0.0;
    return fee;
}

CostBreakdown cost_breakdown(double gross_value, double outperformance_bps,
                             const FeeTerms& terms, const TaxTerms& taxes) {
    if (!(gross_value > 0.0)) throw ValidationError("cost breakdown: gross_value must be positive");
    if (!(taxes.stamp_bps >= 0.0) || !(taxes.excise_bps >= 0.0))
        throw ValidationError("cost breakdown: tax rates must be non-negative");
    CostBreakdown b;
    b.gross_value = gross_value;
    b.fee_bps_of_gross = compute_fee_bps(outperformance_bps, terms);
    b.fee = gross_value * b.fee_bps_of_gross / 1e4;
    b.stamp = gross_value * taxes.stamp_bps / 1e4;
    b.excise = gross_value * taxes.excise_bps / 1e4;
    b.total = gross_value + b.fee + b.stamp + b.excise;
    return b;
}

} // namespace buyback::fees
