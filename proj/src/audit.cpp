#include "buyback/audit.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "buyback/errors.hpp"

namespace buyback::audit {

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& what) {
    throw ValidationError("tape line " + std::to_string(line_no) + ": " + what);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_number(const std::string& s, std::size_t line_no, const char* field) {
    const char* begin = s.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0' || !std::isfinite(v))
        fail_line(line_no, std::string("cannot parse ") + field + " '" + s + "'");
    return v;
}

Date parse_date(const std::string& s, std::size_t line_no) {
    Date d;
    char dash1 = 0, dash2 = 0;
    std::istringstream is(s);
    is >> d.year >> dash1 >> d.month >> dash2 >> d.day;
    if (is.fail() || !is.eof() || dash1 != '-' || dash2 != '-' || d.year < 1900 ||
        d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31)
        fail_line(line_no, "cannot parse date '" + s + "' (expected YYYY-MM-DD)");
    return d;
}

constexpr const char* kHeader = "date,shares,avg_price,value,market_vwap,market_volume";

void check_snapshot(const AuditSnapshot& s) {
    if (!(s.benchmark > 0.0)) throw ValidationError("audit snapshot: benchmark must be positive");
    if (!(s.avg_price > 0.0)) throw ValidationError("audit snapshot: avg_price must be positive");
    if (!(s.last_price > 0.0)) throw ValidationError("audit snapshot: last_price must be positive");
    if (s.elapsed_days < 1) throw ValidationError("audit snapshot: elapsed_days must be positive");
    if (!(s.pct_value_executed > 0.0))
        throw ValidationError("audit snapshot: pct_value_executed must be positive");
}

void check_delta(double delta) {
    if (!(delta > 0.0)) throw ValidationError("audit sensitivity: delta must be positive");
}

// Average price after buying delta (of target value) more at the last price.
double shifted_avg_price(const AuditSnapshot& s, double delta) {
    const double f = s.pct_value_executed;
    return (f + delta) / (f / s.avg_price + delta / s.last_price);
}

} // namespace

std::vector<DisclosureRecord> parse_tape(std::istream& in) {
    std::vector<DisclosureRecord> out;
    std::string line;
    std::size_t line_no = 0;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!seen_header) {
            if (line != kHeader)
                fail_line(line_no, std::string("expected header '") + kHeader + "'");
            seen_header = true;
            continue;
        }
        auto cells = split_csv(line);
        if (cells.size() != 6) fail_line(line_no, "expected 6 columns, got " +
                                         std::to_string(cells.size()));
        DisclosureRecord r;
        r.date = parse_date(cells[0], line_no);
        r.shares = parse_number(cells[1], line_no, "shares");
        if (!(r.shares > 0.0)) fail_line(line_no, "shares must be positive");

        const bool has_price = !cells[2].empty();
        const bool has_value = !cells[3].empty();
        if (!has_price && !has_value) fail_line(line_no, "need avg_price or value");
        if (has_price) {
            r.avg_price = parse_number(cells[2], line_no, "avg_price");
            if (!(r.avg_price > 0.0)) fail_line(line_no, "avg_price must be positive");
        }
        if (has_value) {
            r.value = parse_number(cells[3], line_no, "value");
            if (!(r.value > 0.0)) fail_line(line_no, "value must be positive");
        }
        if (has_price && has_value) {
            if (std::fabs(r.value - r.shares * r.avg_price) > 1e-6 * r.value)
                fail_line(line_no, "value disagrees with shares * avg_price");
        } else if (has_price) {
            r.value = r.shares * r.avg_price;
        } else {
            r.avg_price = r.value / r.shares;
        }

        if (!cells[4].empty()) {
            const double v = parse_number(cells[4], line_no, "market_vwap");
            if (!(v > 0.0)) fail_line(line_no, "market_vwap must be positive");
            r.market_vwap = v;
        }
        if (!cells[5].empty()) {
            const double v = parse_number(cells[5], line_no, "market_volume");
            if (!(v > 0.0)) fail_line(line_no, "market_volume must be positive");
            r.market_volume = v;
        }
        if (!out.empty() && !(out.back().date < r.date))
            fail_line(line_no, "dates must be strictly increasing");
        out.push_back(r);
    }
    if (!seen_header) throw ValidationError("tape: missing header row");
    return out;
}

std::vector<DisclosureRecord> parse_tape_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tape file: " + path);
    return parse_tape(in);
}

ImpliedFee implied_fee(double total_returned, double gross_value, double stamp_bps) {
    if (!(gross_value > 0.0)) throw ValidationError("implied fee: gross_value must be positive");
    if (!(stamp_bps >= 0.0)) throw ValidationError("implied fee: stamp_bps must be non-negative");
    if (total_returned < gross_value)
        throw ValidationError("implied fee: total_returned below gross purchase value");
    ImpliedFee f;
    f.fee = total_returned - gross_value * (1.0 + stamp_bps / 1e4);
    f.fee_pct = f.fee / gross_value;
    f.negative = f.fee < 0.0;
    return f;
}

AuditSnapshot snapshot_from_published(double pct_value_executed, double pct_time_expired,
                                      double outperformance, double price_over_benchmark,
                                      int total_allowed_days) {
    if (total_allowed_days < 1)
        throw ValidationError("audit snapshot: total_allowed_days must be positive");
    AuditSnapshot s;
    s.pct_value_executed = pct_value_executed;
    s.pct_time_expired = pct_time_expired;
    s.total_allowed_days = total_allowed_days;
    s.elapsed_days = static_cast<int>(std::lround(pct_time_expired * total_allowed_days));
    s.benchmark = 1.0;
    s.avg_price = 1.0 - outperformance;
    s.outperformance = outperformance;
    s.last_price = price_over_benchmark;
    check_snapshot(s);
    return s;
}

AuditSnapshot snapshot_at(const std::vector<DisclosureRecord>& tape, std::size_t upto_rows,
                          int total_allowed_days, double total_target_value) {
    if (upto_rows < 1 || upto_rows > tape.size())
        throw ValidationError("audit snapshot: upto_rows out of range");
    if (total_allowed_days < static_cast<int>(upto_rows))
        throw ValidationError("audit snapshot: allowed window shorter than the tape");
    if (!(total_target_value > 0.0))
        throw ValidationError("audit snapshot: total_target_value must be positive");

    double value = 0.0;
    double shares = 0.0;
    double vwap_sum = 0.0;
    for (std::size_t i = 0; i < upto_rows; ++i) {
        const auto& r = tape[i];
        if (!r.market_vwap)
            throw ValidationError("audit snapshot: row " + std::to_string(i + 1) +
                                  " lacks market_vwap (benchmark source)");
        value += r.value;
        shares += r.shares;
        vwap_sum += *r.market_vwap;
    }
    AuditSnapshot s;
    s.pct_value_executed = value / total_target_value;
    s.elapsed_days = static_cast<int>(upto_rows);
    s.total_allowed_days = total_allowed_days;
    s.pct_time_expired = static_cast<double>(upto_rows) / total_allowed_days;
    s.avg_price = value / shares;
    s.benchmark = vwap_sum / static_cast<double>(upto_rows);
    s.outperformance = (s.benchmark - s.avg_price) / s.benchmark;
    const auto& last = tape[upto_rows - 1];
    s.last_price = last.market_vwap ? *last.market_vwap : last.avg_price;
    check_snapshot(s);
    return s;
}

double benchmark_day_sensitivity(const AuditSnapshot& s) {
    check_snapshot(s);
    return (s.benchmark - s.last_price) / ((s.elapsed_days + 1) * s.benchmark);
}

bool benchmark_move_favors_broker(const AuditSnapshot& s) {
    check_snapshot(s);
    return s.last_price < s.benchmark;
}

double avg_price_sensitivity(const AuditSnapshot& s, double delta_pct_value) {
    check_snapshot(s);
    check_delta(delta_pct_value);
    return (s.avg_price - shifted_avg_price(s, delta_pct_value)) / s.avg_price;
}

double performance_sensitivity(const AuditSnapshot& s, double delta_pct_value) {
    check_snapshot(s);
    check_delta(delta_pct_value);
    if (s.outperformance == 0.0)
        throw ValidationError("audit sensitivity: outperformance is zero");
    const double shifted = 1.0 - shifted_avg_price(s, delta_pct_value) / s.benchmark;
    return (shifted - s.outperformance) / s.outperformance;
}

std::vector<ProfilePoint> completion_profile(const std::vector<DisclosureRecord>& tape,
                                             int total_allowed_days) {
    if (tape.empty()) throw ValidationError("completion profile: empty tape");
    if (total_allowed_days < static_cast<int>(tape.size()))
        throw ValidationError("completion profile: tape longer than the allowed window");
    double total = 0.0;
    for (const auto& r : tape) total += r.value;
    std::vector<ProfilePoint> out;
    out.reserve(tape.size());
    double cum = 0.0;
    for (std::size_t i = 0; i < tape.size(); ++i) {
        cum += tape[i].value;
        out.push_back(ProfilePoint{static_cast<double>(i + 1) / total_allowed_days, cum / total});
    }
    return out;
}

} // namespace buyback::audit
