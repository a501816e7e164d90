#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "buyback/benchmarks.hpp"
#include "buyback/market_model.hpp"
#include "buyback/risk.hpp"
#include "buyback/strategies.hpp"

namespace buyback::io {

// Loads a scenario from a flat `key = value` file with `#` comments. Unknown
// keys, duplicate keys, unparsable values and invariant violations throw
// ConfigError naming the key and line.
market::ScenarioConfig load_scenario(const std::string& path);
market::ScenarioConfig parse_scenario(std::istream& in, const std::string& origin);

// Full-precision decimal rendering (round-trips doubles exactly).
std::string format_double(double v);

// day_index,close,vwap,volume
void write_path_csv(std::ostream& os, const market::PricePath& path);

// day_index,shares,value,fill_price,cumulative_pct_value,pct_time_elapsed
// One row per day of the window up to completion, zero rows for untraded days.
void write_blotter_csv(std::ostream& os, const strat::TradeBlotter& blotter,
                       double target_value, int max_days);

// day_index,bogus,institutional,twap
void write_benchmark_csv(std::ostream& os, const std::vector<bench::BenchmarkPoint>& series);

// day,residual_var
void write_residual_csv(std::ostream& os, const std::vector<risk::ResidualPoint>& profile);

// Writes a disclosure tape row set compatible with audit::parse_tape. Day
// indices map onto sequential weekdays, formatted YYYY-MM-DD.
void write_tape_csv(std::ostream& os, const strat::TradeBlotter& blotter,
                    const market::PricePath& path);

struct ManifestFile {
    std::string name;
    std::string format; // "csv" or "json"
    std::int64_t rows = 0;
};

struct RunManifest {
    std::string subcommand;
    std::string config_path;
    std::uint64_t seed = 0;
    std::string output_dir;
    std::vector<ManifestFile> files;
};

// JSON, stable key order, no timestamps: reruns produce identical bytes.
void write_manifest(std::ostream& os, const RunManifest& m);

} // namespace buyback::io
