#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace buyback::audit {

// Forensic reconstruction of a buy-back programme from its public disclosure
// tape: daily RNS-style rows of shares bought and price paid, optionally with
// the market's vwap and volume for the same day.

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    friend auto operator<=>(const Date&, const Date&) = default;
};

struct DisclosureRecord {
    Date date;
    double shares = 0.0;
    double avg_price = 0.0; // currency per share
    double value = 0.0;     // shares * avg_price
    std::optional<double> market_vwap;
    std::optional<double> market_volume;
};

// Parses the documented tape CSV (header
// date,shares,avg_price,value,market_vwap,market_volume; one of avg_price and
// value may be blank per row and is derived from the other). Throws
// ValidationError with the offending line number on malformed rows,
// non-increasing dates, or non-positive shares/prices.
std::vector<DisclosureRecord> parse_tape(std::istream& in);
std::vector<DisclosureRecord> parse_tape_file(const std::string& path);

struct ImpliedFee {
    double fee = 0.0;     // total_returned - gross * (1 + stamp_bps/1e4)
    double fee_pct = 0.0; // fee / gross
    bool negative = false;
};

// Backs the undisclosed broker fee out of the total cash returned.
// Requires total_returned >= gross_value.
ImpliedFee implied_fee(double total_returned, double gross_value, double stamp_bps);

// Point-in-time view of a running programme, either reconstructed from a tape
// or built from published aggregates.
struct AuditSnapshot {
    double pct_value_executed = 0.0; // f, fraction of the target already bought
    double pct_time_expired = 0.0;   // fraction of the allowed window elapsed
    int elapsed_days = 0;            // d, trading days contributing to the benchmark
    int total_allowed_days = 0;      // N, analyst's estimate of the allowed window
    double avg_price = 0.0;          // A
    double benchmark = 0.0;          // B, mean of daily vwaps so far
    double outperformance = 0.0;     // O = (B - A) / B
    double last_price = 0.0;         // p, latest market price
};

// Builds a snapshot from the four numbers a programme typically publishes,
// normalising the benchmark to 1. elapsed_days = round(pct_time * N).
AuditSnapshot snapshot_from_published(double pct_value_executed, double pct_time_expired,
                                      double outperformance, double price_over_benchmark,
                                      int total_allowed_days);

// Reconstructs the snapshot from the first `upto_rows` rows of a tape. Every
// row in range must carry market_vwap (the benchmark source).
AuditSnapshot snapshot_at(const std::vector<DisclosureRecord>& tape, std::size_t upto_rows,
                          int total_allowed_days, double total_target_value);

// Relative benchmark move from one more day printing at the last price,
// reported with the audit table's sign convention: positive when the last
// price sits below the benchmark, i.e. (B - p) / ((d + 1) * B).
double benchmark_day_sensitivity(const AuditSnapshot& s);

// True when the pending day would pull the benchmark down (last price below it).
bool benchmark_move_favors_broker(const AuditSnapshot& s);

// Relative improvement of the average price from buying delta_pct_value more
// (as a fraction of the target) at the last price: (A - A') / A with
// A' = (f + delta) / (f/A + delta/p).
double avg_price_sensitivity(const AuditSnapshot& s, double delta_pct_value);

// Relative change of measured outperformance from the same extra purchase:
// (O' - O) / O with O' = 1 - A'/B. Requires O != 0.
double performance_sensitivity(const AuditSnapshot& s, double delta_pct_value);

struct ProfilePoint {
    double pct_time = 0.0;  // trading days elapsed / allowed window
    double pct_value = 0.0; // cumulative value / tape total
};

// Cumulative completion curve of a tape, one point per row.
std::vector<ProfilePoint> completion_profile(const std::vector<DisclosureRecord>& tape,
                                             int total_allowed_days);

} // namespace buyback::audit
