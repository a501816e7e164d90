#include "buyback/scenario_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "buyback/errors.hpp"

namespace buyback::io {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& v, const std::string& key, const std::string& origin,
                 std::size_t line_no) {
    const char* begin = v.c_str();
    char* end = nullptr;
    const double d = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": cannot parse value for '" +
                          key + "'");
    return d;
}

// Civil date arithmetic (days since 1970-01-01), used to lay disclosure rows
// on consecutive weekdays.
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365u + yoe / 4u - yoe / 100u + doy;
    return era * 146097L + static_cast<long>(doe) - 719468L;
}

void civil_from_days(long z, int& y, int& m, int& d) {
    z += 719468L;
    const long era = (z >= 0 ? z : z - 146096L) / 146097L;
    const unsigned doe = static_cast<unsigned>(z - era * 146097L);
    const unsigned yoe = (doe - doe / 1460u + doe / 36524u - doe / 146096u) / 365u;
    const long yy = static_cast<long>(yoe) + era * 400L;
    const unsigned doy = doe - (365u * yoe + yoe / 4u - yoe / 100u);
    const unsigned mp = (5u * doy + 2u) / 153u;
    d = static_cast<int>(doy - (153u * mp + 2u) / 5u + 1u);
    m = static_cast<int>(mp + (mp < 10u ? 3u : -9u));
    y = static_cast<int>(yy + (m <= 2));
}

// Trading day k mapped onto weekdays: five rows per week starting on a Monday.
std::string trading_date(int day_index) {
    static const long base = days_from_civil(2025, 1, 6); // a Monday
    const long serial = base + (day_index / 5) * 7 + day_index % 5;
    int y = 0, m = 0, d = 0;
    civil_from_days(serial, y, m, d);
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", y, m, d);
    return buf;
}

} // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

market::ScenarioConfig parse_scenario(std::istream& in, const std::string& origin) {
    market::ScenarioConfig cfg;
    std::map<std::string, bool> seen;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected 'key = value'");
        if (seen[key])
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": duplicate key '" + key +
                              "'");
        seen[key] = true;

        const double d = to_double(value, key, origin, line_no);
        if (key == "initial_price") cfg.initial_price = d;
        else if (key == "sigma_annual") cfg.sigma_annual = d;
        else if (key == "drift_annual") cfg.drift_annual = d;
        else if (key == "trading_days_per_year") cfg.trading_days_per_year = static_cast<int>(d);
        else if (key == "horizon_days") cfg.horizon_days = static_cast<int>(d);
        else if (key == "adv_shares") cfg.adv_shares = d;
        else if (key == "volume_sigma") cfg.volume_sigma = d;
        else if (key == "intraday_noise_sigma") cfg.intraday_noise_sigma = d;
        else if (key == "master_seed") cfg.master_seed = static_cast<std::uint64_t>(d);
        else throw ConfigError(origin + ":" + std::to_string(line_no) + ": unknown key '" + key +
                               "'");
    }
    try {
        market::validate(cfg);
    } catch (const ValidationError& e) {
        throw ConfigError(origin + ": " + e.what());
    }
    return cfg;
}

market::ScenarioConfig load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario file: " + path);
    return parse_scenario(in, path);
}

void write_path_csv(std::ostream& os, const market::PricePath& path) {
    os << "day_index,close,vwap,volume\n";
    for (const auto& d : path.days)
        os << d.day_index << ',' << format_double(d.close) << ',' << format_double(d.vwap) << ','
           << format_double(d.volume) << '\n';
}

void write_blotter_csv(std::ostream& os, const strat::TradeBlotter& blotter,
                       double target_value, int max_days) {
    if (!(target_value > 0.0))
        throw ValidationError("blotter csv: target_value must be positive");
    os << "day_index,shares,value,fill_price,cumulative_pct_value,pct_time_elapsed\n";
    const int last_day = blotter.completed ? blotter.completion_day : max_days - 1;
    double cum = 0.0;
    std::size_t next_fill = 0;
    for (int t = 0; t <= last_day; ++t) {
        double shares = 0.0, value = 0.0, price = 0.0;
        if (next_fill < blotter.fills.size() && blotter.fills[next_fill].day_index == t) {
            const auto& f = blotter.fills[next_fill++];
            shares = f.shares;
            value = f.value;
            price = f.fill_price;
        }
        cum += value;
        os << t << ',' << format_double(shares) << ',' << format_double(value) << ','
           << format_double(price) << ',' << format_double(cum / target_value) << ','
           << format_double(static_cast<double>(t + 1) / max_days) << '\n';
    }
}

void write_benchmark_csv(std::ostream& os, const std::vector<bench::BenchmarkPoint>& series) {
    os << "day_index,bogus,institutional,twap\n";
    for (const auto& p : series)
        os << p.day_index << ',' << format_double(p.bogus) << ','
           << format_double(p.institutional) << ',' << format_double(p.twap) << '\n';
}

void write_residual_csv(std::ostream& os, const std::vector<risk::ResidualPoint>& profile) {
    os << "day,residual_var\n";
    for (const auto& p : profile) os << p.day << ',' << format_double(p.residual_var) << '\n';
}

void write_tape_csv(std::ostream& os, const strat::TradeBlotter& blotter,
                    const market::PricePath& path) {
    os << "# tape v1\n";
    os << "date,shares,avg_price,value,market_vwap,market_volume\n";
    for (const auto& f : blotter.fills) {
        const auto& d = path.days.at(static_cast<std::size_t>(f.day_index));
        os << trading_date(f.day_index) << ',' << format_double(f.shares) << ','
           << format_double(f.fill_price) << ',' << format_double(f.value) << ','
           << format_double(d.vwap) << ',' << format_double(d.volume) << '\n';
    }
}

void write_manifest(std::ostream& os, const RunManifest& m) {
    nlohmann::json j;
    j["subcommand"] = m.subcommand;
    j["config_path"] = m.config_path;
    j["seed"] = m.seed;
    j["output_dir"] = m.output_dir;
    j["files"] = nlohmann::json::array();
    for (const auto& f : m.files)
        j["files"].push_back({{"name", f.name}, {"format", f.format}, {"rows", f.rows}});
    os << j.dump(2) << '\n';
}

} // namespace buyback::io
