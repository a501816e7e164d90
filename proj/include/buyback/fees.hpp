#pragma once

namespace buyback::fees {

enum class FeeKind {
    VwapGuarantee, // broker keeps outperformance beyond a guaranteed level
    VwapMinus,     // client and broker split outperformance beyond the guarantee
    FlatAgency     // fixed bps of gross, no performance component
};

struct FeeTerms {
    FeeKind kind = FeeKind::FlatAgency;
    double guarantee_bps = 0.0;     // g: guaranteed outperformance passed to the client
    double share_pct = 1.0;         // VwapMinus: broker's share of the excess, in [0,1]
    double agency_bps = 0.0;        // FlatAgency commission
    bool allow_negative_fee = true; // false floors performance fees at zero
};

struct TaxTerms {
    double stamp_bps = 0.0;  // UK stamp duty on purchases
    double excise_bps = 0.0; // US buyback excise
};

// Broker fee in bps of gross value for a realised outperformance (also in bps).
//   VwapGuarantee: out - g
//   VwapMinus:     (out - g) * share_pct
//   FlatAgency:    agency_bps
double compute_fee_bps(double outperformance_bps, const FeeTerms& terms);

struct CostBreakdown {
    double gross_value = 0.0;
    double fee = 0.0;
    double stamp = 0.0;
    double excise = 0.0;
    double total = 0.0;             // gross + fee + stamp + excise
    double fee_bps_of_gross = 0.0;
};

CostBreakdown cost_breakdown(double gross_value, double outperformance_bps,
                             const FeeTerms& terms, const TaxTerms& taxes);

} // namespace buyback::fees
