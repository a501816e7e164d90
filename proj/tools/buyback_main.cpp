// Command-line front end: simulate programmes, price their risk, audit
// disclosure tapes, run the coin-game and benchmark-beat studies, and print
// the investment-trust worked example. Every run that writes files also
// writes a manifest.json, last, so a rerun can be checked byte for byte.
//
// Exit codes: 0 success, 1 infeasible request, 2 usage or I/O trouble,
// 3 invalid configuration or inputs.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "buyback/audit.hpp"
#include "buyback/benchmarks.hpp"
#include "buyback/errors.hpp"
#include "buyback/experiments.hpp"
#include "buyback/fees.hpp"
#include "buyback/market_model.hpp"
#include "buyback/risk.hpp"
#include "buyback/scenario_io.hpp"
#include "buyback/strategies.hpp"
#include "buyback/valuation.hpp"

using namespace buyback;
using nlohmann::json;

namespace {

struct Output {
    std::string dir;
    io::RunManifest manifest;

    explicit Output(std::string out_dir, std::string subcommand, std::string config_path,
                    std::uint64_t seed) {
        dir = out_dir.empty() ? "." : std::move(out_dir);
        std::filesystem::create_directories(dir);
        manifest.subcommand = std::move(subcommand);
        manifest.config_path = std::move(config_path);
        manifest.seed = seed;
        manifest.output_dir = dir;
    }

    std::ofstream open(const std::string& name) {
        std::ofstream os(dir + "/" + name);
        if (!os) throw IoError("cannot write " + dir + "/" + name);
        return os;
    }

    void note(const std::string& name, const std::string& format, std::int64_t rows) {
        manifest.files.push_back(io::ManifestFile{name, format, rows});
    }

    void write_json(const std::string& name, const json& j) {
        auto os = open(name);
        os << j.dump(2) << '\n';
        note(name, "json", 0);
    }

    // Must be called last; the manifest lists everything written before it.
    void finish() {
        manifest.files.push_back(io::ManifestFile{"manifest.json", "json", 0});
        auto os = open("manifest.json");
        io::write_manifest(os, manifest);
    }
};

std::string default_out_dir() {
    const char* env = std::getenv("BUYBACK_OUT_DIR");
    return env ? env : ".";
}

struct StrategyFlags {
    std::string strategy = "adaptive";
    double target = 1e8;
    double pov_rate = 0.10;
    double fast_mult = 4.0;
    double trickle_mult = 0.15;
    double impact_kappa = 0.0;
    double gate_ceiling = 0.0; // 0 disables the valuation gate
    strat::RegulatoryLimits limits;
};

void add_strategy_flags(CLI::App* cmd, StrategyFlags& f) {
    cmd->add_option("--strategy", f.strategy, "twap, pov or adaptive")
        ->check(CLI::IsMember({"twap", "pov", "adaptive"}))
        ->capture_default_str();
    cmd->add_option("--target", f.target, "value of shares to buy back")->capture_default_str();
    cmd->add_option("--pov-rate", f.pov_rate, "participation rate for pov")
        ->capture_default_str();
    cmd->add_option("--fast-mult", f.fast_mult, "adaptive sprint multiple of baseline pace")
        ->capture_default_str();
    cmd->add_option("--trickle-mult", f.trickle_mult, "adaptive slow multiple of baseline pace")
        ->capture_default_str();
    cmd->add_option("--impact-kappa", f.impact_kappa, "linear price impact coefficient")
        ->capture_default_str();
    cmd->add_option("--gate-ceiling", f.gate_ceiling,
                    "skip days whose reference price exceeds this (0 = no gate)");
    cmd->add_option("--max-participation", f.limits.max_participation,
                    "daily volume cap as a fraction")
        ->capture_default_str();
    cmd->add_option("--min-days", f.limits.min_days, "earliest completion day count");
    cmd->add_option("--max-days", f.limits.max_days,
                    "allowed window in trading days (default: scenario horizon)");
}

strat::StrategyParams to_params(const StrategyFlags& f) {
    strat::StrategyParams p;
    if (f.strategy == "twap") p.kind = strat::StrategyKind::Twap;
    else if (f.strategy == "pov") p.kind = strat::StrategyKind::Pov;
    else p.kind = strat::StrategyKind::AdaptiveBroker;
    if (f.gate_ceiling > 0.0) {
        p.gated_base = p.kind;
        p.kind = strat::StrategyKind::ValuationGated;
        p.valuation_ceiling = f.gate_ceiling;
    }
    p.target_value = f.target;
    p.pov_rate = f.pov_rate;
    p.fast_mult = f.fast_mult;
    p.trickle_mult = f.trickle_mult;
    p.impact_kappa = f.impact_kappa;
    return p;
}

market::ScenarioConfig load_config(const std::string& path, std::uint64_t seed_override,
                                   bool seed_given) {
    auto cfg = io::load_scenario(path);
    if (seed_given) cfg.master_seed = seed_override;
    return cfg;
}

// Mean of daily vwaps over the window the strategy actually used.
double realised_benchmark(const market::PricePath& path, const strat::TradeBlotter& blotter,
                          int max_days) {
    const int last = blotter.completed ? blotter.completion_day : max_days - 1;
    std::vector<double> vwaps;
    vwaps.reserve(static_cast<std::size_t>(last) + 1);
    for (int t = 0; t <= last; ++t)
        vwaps.push_back(path.days[static_cast<std::size_t>(t)].vwap);
    return bench::bogus_benchmark(vwaps);
}

json stats_json(const bench::PurchaseStats& stats, const strat::TradeBlotter& blotter) {
    return json{{"gross_value", stats.gross_value},
                {"shares", stats.shares},
                {"avg_price", stats.avg_price},
                {"benchmark_outperformance", stats.outperformance},
                {"completed", blotter.completed},
                {"completion_day", blotter.completion_day},
                {"note", blotter.note}};
}

int write_series_csv(std::ostream& os, const market::PricePath& path,
                     const strat::TradeBlotter& blotter, double target, int max_days) {
    std::map<int, double> traded;
    for (const auto& f : blotter.fills) traded[f.day_index] = f.value;
    const auto series = bench::running_benchmarks(path);

    os << "day_index,close,vwap,volume,bogus,institutional,twap,"
          "traded_value,cumulative_pct_value,pct_time_elapsed\n";
    double cum = 0.0;
    int rows = 0;
    for (int t = 0; t < max_days; ++t) {
        const auto& d = path.days[static_cast<std::size_t>(t)];
        const auto& b = series[static_cast<std::size_t>(t)];
        const auto it = traded.find(t);
        const double v = it == traded.end() ? 0.0 : it->second;
        cum += v;
        os << t << ',' << io::format_double(d.close) << ',' << io::format_double(d.vwap) << ','
           << io::format_double(d.volume) << ',' << io::format_double(b.bogus) << ','
           << io::format_double(b.institutional) << ',' << io::format_double(b.twap) << ','
           << io::format_double(v) << ',' << io::format_double(cum / target) << ','
           << io::format_double(static_cast<double>(t + 1) / max_days) << '\n';
        ++rows;
    }
    return rows;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
    std::string config_path;
    std::string out_dir = default_out_dir();
    StrategyFlags flags;
    std::int64_t path_index = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int cmd_simulate(const SimulateArgs& a) {
    auto cfg = load_config(a.config_path, a.seed, a.seed_given);
    auto flags = a.flags;
    if (flags.limits.max_days <= 0 || flags.limits.max_days > cfg.horizon_days)
        flags.limits.max_days = cfg.horizon_days;

    const auto path = market::generate_path(cfg, a.path_index);
    const auto params = to_params(flags);
    const auto blotter = strat::run_strategy(path, params, flags.limits);

    const double benchmark = realised_benchmark(path, blotter, flags.limits.max_days);
    const auto stats = bench::purchase_stats(blotter, benchmark);

    Output out(a.out_dir, "simulate", a.config_path, cfg.master_seed);
    {
        auto os = out.open("series.csv");
        const int rows =
            write_series_csv(os, path, blotter, params.target_value, flags.limits.max_days);
        out.note("series.csv", "csv", rows);
    }
    {
        auto os = out.open("blotter.csv");
        io::write_blotter_csv(os, blotter, params.target_value, flags.limits.max_days);
        const int rows = blotter.completed ? blotter.completion_day + 1 : flags.limits.max_days;
        out.note("blotter.csv", "csv", rows);
    }
    {
        auto os = out.open("tape.csv");
        io::write_tape_csv(os, blotter, path);
        out.note("tape.csv", "csv", static_cast<std::int64_t>(blotter.fills.size()));
    }
    json summary = stats_json(stats, blotter);
    summary["benchmark"] = benchmark;
    summary["target_value"] = params.target_value;
    summary["strategy"] = flags.strategy;
    out.write_json("summary.json", summary);
    out.finish();

    std::cout << (blotter.completed
                      ? "completed on day " + std::to_string(blotter.completion_day)
                      : "incomplete: " + blotter.note)
              << ": " << stats.shares << " shares at " << stats.avg_price << " avg, benchmark "
              << benchmark << ", outperformance " << stats.outperformance * 1e4 << " bps\n"
              << "wrote " << out.dir << "/series.csv, blotter.csv, tape.csv, summary.json\n";
    return 0;
}

// -------------------------------------------------------------------- risk

struct RiskArgs {
    double value = 870e6;
    double z = 1.0;
    double sigma = 0.35;
    int horizon_days = 125;
    int days_per_year = 250;
    std::string config_path;
    double percentile = 0.05;
    std::int64_t paths = 100000;
    int unwind_days = 0;
    int threads = 0;
    std::string out_dir = default_out_dir();
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int cmd_risk(const RiskArgs& a) {
    const risk::VarQuery q{a.value, a.z, a.sigma, a.horizon_days, a.days_per_year};
    const double closed = risk::closed_form_var(q);

    json report{{"closed_form_var", closed},
                {"value", a.value},
                {"z", a.z},
                {"sigma_annual", a.sigma},
                {"horizon_days", a.horizon_days},
                {"days_per_year", a.days_per_year}};
    std::cout << "closed-form var: " << closed << " (z=" << a.z << ", sigma=" << a.sigma
              << ", " << a.horizon_days << "/" << a.days_per_year << " days)\n";

    Output out(a.out_dir, "risk", a.config_path, a.seed_given ? a.seed : 0);

    if (!a.config_path.empty()) {
        const auto cfg = load_config(a.config_path, a.seed, a.seed_given);
        out.manifest.seed = cfg.master_seed;
        const double mc = risk::mc_var(cfg, a.value, a.percentile, a.paths, a.threads);
        report["mc_var"] = mc;
        report["mc_paths"] = a.paths;
        report["percentile"] = a.percentile;
        std::cout << "monte carlo var: " << mc << " (percentile " << a.percentile << ", "
                  << a.paths << " paths)\n";
    }

    if (a.unwind_days > 0) {
        market::ScenarioConfig cfg;
        cfg.sigma_annual = a.sigma;
        cfg.trading_days_per_year = a.days_per_year;
        cfg.horizon_days = std::max(a.unwind_days, 1);
        const auto profile = risk::residual_var_profile(cfg, a.value, a.unwind_days, a.z);
        auto os = out.open("residual.csv");
        io::write_residual_csv(os, profile);
        out.note("residual.csv", "csv", static_cast<std::int64_t>(profile.size()));
        report["residual_initial"] = profile.front().residual_var;
        report["unwind_days"] = a.unwind_days;
    }

    out.write_json("risk.json", report);
    out.finish();
    std::cout << "wrote " << out.dir << "/risk.json\n";
    return 0;
}

// ------------------------------------------------------------------- audit

struct AuditArgs {
    std::string tape_path;
    double total_returned = 0.0;
    double stamp_bps = 0.0;
    int allowed_days = 0;
    double target_value = 0.0;
    double sensitivity_delta = 0.01;
    std::string out_dir = default_out_dir();
};

int cmd_audit(const AuditArgs& a) {
    const auto tape = audit::parse_tape_file(a.tape_path);
    double gross = 0.0, shares = 0.0;
    bool have_vwaps = true;
    for (const auto& r : tape) {
        gross += r.value;
        shares += r.shares;
        have_vwaps = have_vwaps && r.market_vwap.has_value();
    }
    const int allowed = a.allowed_days > 0 ? a.allowed_days : static_cast<int>(tape.size());
    const double target = a.target_value > 0.0 ? a.target_value : gross;

    json report{{"tape", a.tape_path},
                {"rows", tape.size()},
                {"gross_value", gross},
                {"shares", shares},
                {"avg_price", gross / shares},
                {"allowed_days", allowed}};
    std::cout << "tape: " << tape.size() << " rows, gross " << gross << ", avg price "
              << gross / shares << "\n";

    if (a.total_returned > 0.0) {
        const auto fee = audit::implied_fee(a.total_returned, gross, a.stamp_bps);
        report["implied_fee"] = {
            {"total_returned", a.total_returned},
            {"stamp_bps", a.stamp_bps},
            {"fee", fee.fee},
            {"fee_pct", fee.fee_pct},
            {"negative", fee.negative},
        };
        std::cout << "implied fee: " << fee.fee << " (" << fee.fee_pct * 100 << "% of gross)\n";
    }

    if (have_vwaps) {
        const auto snap = audit::snapshot_at(tape, tape.size(), allowed, target);
        report["snapshot"] = {
            {"pct_value_executed", snap.pct_value_executed},
            {"pct_time_expired", snap.pct_time_expired},
            {"benchmark", snap.benchmark},
            {"outperformance", snap.outperformance},
            {"last_price", snap.last_price},
            {"benchmark_day_sensitivity", audit::benchmark_day_sensitivity(snap)},
            {"benchmark_move_favors_broker", audit::benchmark_move_favors_broker(snap)},
            {"avg_price_sensitivity", audit::avg_price_sensitivity(snap, a.sensitivity_delta)},
            {"sensitivity_delta", a.sensitivity_delta},
        };
        if (snap.outperformance != 0.0)
            report["snapshot"]["performance_sensitivity"] =
                audit::performance_sensitivity(snap, a.sensitivity_delta);
        std::cout << "outperformance vs mean-of-vwaps: " << snap.outperformance * 1e4
                  << " bps\n";
    }

    Output out(a.out_dir, "audit", a.tape_path, 0);
    {
        const auto profile = audit::completion_profile(tape, allowed);
        auto os = out.open("profile.csv");
        os << "pct_time,pct_value\n";
        for (const auto& p : profile)
            os << io::format_double(p.pct_time) << ',' << io::format_double(p.pct_value) << '\n';
        out.note("profile.csv", "csv", static_cast<std::int64_t>(profile.size()));
    }
    out.write_json("audit.json", report);
    out.finish();
    std::cout << "wrote " << out.dir << "/audit.json\n";
    return 0;
}

// -------------------------------------------------------------- experiment

struct ExperimentArgs {
    std::string mode = "coin";
    int n_min = 100;
    int n_max = 150;
    std::int64_t trials = 1000000;
    std::uint64_t seed = 1;
    std::string config_path;
    StrategyFlags flags;
    std::int64_t paths = 10000;
    int collapse_day = 60;
    int threads = 0;
    std::string out_dir = default_out_dir();
    bool seed_given = false;
};

json summary_json(const game::OutcomeSummary& s) {
    return json{{"n_paths", s.n_paths},
                {"underperformance_rate", s.underperformance_rate},
                {"mean", s.mean},
                {"stddev", s.stddev},
                {"p01", s.p01},
                {"p05", s.p05},
                {"p25", s.p25},
                {"p50", s.p50},
                {"p75", s.p75},
                {"p95", s.p95},
                {"p99", s.p99}};
}

int cmd_experiment(const ExperimentArgs& a) {
    Output out(a.out_dir, "experiment", a.config_path, a.seed);
    json report{{"mode", a.mode}};

    if (a.mode == "coin") {
        game::CoinGameSpec spec;
        spec.n_min = a.n_min;
        spec.n_max = a.n_max;
        std::cout << "policy            win      tie      mc(" << a.trials << ")\n";
        for (auto [policy, name] :
             {std::pair{game::CoinPolicy::FixedHorizon, "fixed_horizon"},
              std::pair{game::CoinPolicy::StopWhenAhead, "stop_when_ahead"},
              std::pair{game::CoinPolicy::StopOptimal, "stop_optimal"}}) {
            spec.policy = policy;
            const auto exact = game::coin_game_exact(spec);
            const double mc = a.trials > 0
                                  ? game::coin_game_mc(spec, a.trials, a.seed, a.threads)
                                  : 0.0;
            report[name] = {{"win_probability", exact.win_probability},
                            {"tie_probability", exact.tie_probability},
                            {"max_mass_error", exact.max_mass_error}};
            if (a.trials > 0) report[name]["mc_win_probability"] = mc;
            std::printf("%-17s %.6f %.6f %.6f\n", name, exact.win_probability,
                        exact.tie_probability, mc);
        }
        report["n_min"] = a.n_min;
        report["n_max"] = a.n_max;
    } else {
        auto cfg = load_config(a.config_path, a.seed, a.seed_given);
        out.manifest.seed = cfg.master_seed;
        auto flags = a.flags;
        if (flags.limits.max_days <= 0 || flags.limits.max_days > cfg.horizon_days)
            flags.limits.max_days = cfg.horizon_days;
        const auto params = to_params(flags);
        const auto s =
            a.mode == "beat"
                ? game::benchmark_beat_study(cfg, params, flags.limits, a.paths, a.threads)
                : game::volatility_collapse_study(cfg, params, flags.limits, a.paths,
                                                  a.collapse_day, a.threads);
        report["study"] = summary_json(s);
        report["strategy"] = flags.strategy;
        if (a.mode == "collapse") report["collapse_day"] = a.collapse_day;
        std::cout << a.mode << " study over " << s.n_paths
                  << " paths: underperformance rate " << s.underperformance_rate << ", mean "
                  << s.mean * 1e4 << " bps, p05 " << s.p05 * 1e4 << " bps\n";
    }

    out.write_json("experiment.json", report);
    out.finish();
    std::cout << "wrote " << out.dir << "/experiment.json\n";
    return 0;
}

// --------------------------------------------------------------------- nav

struct NavArgs {
    double assets = 100e6;
    double shares = 10e6;
    double price = 7.0;
    double spend = 10e6;
    double alt_price = 11.0;
    std::string out_dir; // empty: print only
};

int cmd_nav(const NavArgs& a) {
    const nav::TrustState state{a.assets, a.shares, a.price};
    const double nav_ps = nav::nav_per_share(state);
    const double disc = nav::discount(state);

    std::printf("trust: assets %.6g, shares %.6g, price %.6g\n", a.assets, a.shares, a.price);
    std::printf("nav per share   %12.4f\n", nav_ps);
    std::printf("discount        %11.2f%%\n", disc * 100.0);

    json report{{"assets", a.assets}, {"shares_outstanding", a.shares},
                {"share_price", a.price}, {"nav_per_share", nav_ps},
                {"discount", disc}, {"spend", a.spend}};

    std::printf("%-14s %14s %14s %14s\n", "buyback at", "shares bought", "pct of float",
                "new nav/share");
    for (double px : {a.price, a.alt_price}) {
        const auto o = nav::buyback_outcome(state, a.spend, px);
        std::printf("%-14.4f %14.0f %13.2f%% %14.4f\n", px, o.shares_bought,
                    o.pct_of_outstanding * 100.0, o.new_nav_per_share);
        const std::string key = px == a.price ? "at_market_price" : "at_alt_price";
        report[key] = {{"exec_price", px},
                       {"shares_bought", o.shares_bought},
                       {"pct_of_outstanding", o.pct_of_outstanding},
                       {"new_nav_per_share", o.new_nav_per_share}};
        if (px == a.alt_price) break;
    }

    if (!a.out_dir.empty()) {
        Output out(a.out_dir, "nav", "", 0);
        out.write_json("nav.json", report);
        out.finish();
        std::cout << "wrote " << out.dir << "/nav.json\n";
    }
    return 0;
}

// ------------------------------------------------------------------ report

struct ReportArgs {
    std::string config_path;
    std::string out_dir = default_out_dir();
    StrategyFlags flags;
    std::int64_t path_index = 0;
    double z = 1.96;
    std::uint64_t seed = 0;
    bool seed_given = false;
};

int cmd_report(const ReportArgs& a) {
    auto cfg = load_config(a.config_path, a.seed, a.seed_given);
    auto flags = a.flags;
    if (flags.limits.max_days <= 0 || flags.limits.max_days > cfg.horizon_days)
        flags.limits.max_days = cfg.horizon_days;

    const auto path = market::generate_path(cfg, a.path_index);
    const auto params = to_params(flags);
    const auto blotter = strat::run_strategy(path, params, flags.limits);
    const double benchmark = realised_benchmark(path, blotter, flags.limits.max_days);
    const auto stats = bench::purchase_stats(blotter, benchmark);

    Output out(a.out_dir, "report", a.config_path, cfg.master_seed);
    {
        auto os = out.open("series.csv");
        const int rows =
            write_series_csv(os, path, blotter, params.target_value, flags.limits.max_days);
        out.note("series.csv", "csv", rows);
    }
    {
        auto os = out.open("tape.csv");
        io::write_tape_csv(os, blotter, path);
        out.note("tape.csv", "csv", static_cast<std::int64_t>(blotter.fills.size()));
    }
    {
        const auto profile =
            risk::residual_var_profile(cfg, params.target_value, flags.limits.max_days, a.z);
        auto os = out.open("residual.csv");
        io::write_residual_csv(os, profile);
        out.note("residual.csv", "csv", static_cast<std::int64_t>(profile.size()));
    }

    // close the loop: read our own tape back through the audit module
    std::ifstream tape_in(out.dir + "/tape.csv");
    const auto tape = audit::parse_tape(tape_in);
    const auto snap =
        audit::snapshot_at(tape, tape.size(), flags.limits.max_days, params.target_value);

    json report = stats_json(stats, blotter);
    report["benchmark"] = benchmark;
    report["risk"] = {
        {"closed_form_var",
         risk::closed_form_var(risk::VarQuery{params.target_value, a.z, cfg.sigma_annual,
                                              flags.limits.max_days,
                                              cfg.trading_days_per_year})},
        {"z", a.z},
    };
    report["audit_round_trip"] = {
        {"rows", tape.size()},
        {"outperformance", snap.outperformance},
        {"avg_price", snap.avg_price},
    };
    out.write_json("report.json", report);
    out.finish();

    std::cout << "report in " << out.dir << ": outperformance " << stats.outperformance * 1e4
              << " bps, audit round trip " << snap.outperformance * 1e4 << " bps\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"share buy-back execution toolkit"};
    app.require_subcommand(1);

    SimulateArgs sim;
    auto* c_sim = app.add_subcommand("simulate", "run one strategy over one simulated path");
    c_sim->add_option("--config", sim.config_path, "scenario file")->required();
    c_sim->add_option("--out", sim.out_dir, "output directory")->capture_default_str();
    c_sim->add_option("--path-index", sim.path_index, "which simulated path to trade");
    auto* sim_seed = c_sim->add_option("--seed", sim.seed, "override the scenario master_seed");
    add_strategy_flags(c_sim, sim.flags);

    RiskArgs risk_args;
    auto* c_risk = app.add_subcommand("risk", "closed-form and monte carlo value at risk");
    c_risk->add_option("--value", risk_args.value, "exposure")->capture_default_str();
    c_risk->add_option("--z", risk_args.z, "confidence multiplier")->capture_default_str();
    c_risk->add_option("--sigma", risk_args.sigma, "annual volatility")->capture_default_str();
    c_risk->add_option("--horizon-days", risk_args.horizon_days)->capture_default_str();
    c_risk->add_option("--days-per-year", risk_args.days_per_year)->capture_default_str();
    c_risk->add_option("--config", risk_args.config_path,
                       "scenario file; enables the monte carlo estimate");
    c_risk->add_option("--percentile", risk_args.percentile)->capture_default_str();
    c_risk->add_option("--paths", risk_args.paths)->capture_default_str();
    c_risk->add_option("--unwind-days", risk_args.unwind_days,
                       "emit the residual risk profile of an even unwind");
    c_risk->add_option("--threads", risk_args.threads, "0 = all");
    c_risk->add_option("--out", risk_args.out_dir)->capture_default_str();
    auto* risk_seed = c_risk->add_option("--seed", risk_args.seed);

    AuditArgs audit_args;
    auto* c_audit = app.add_subcommand("audit", "reconstruct a programme from its tape");
    c_audit->add_option("--tape", audit_args.tape_path, "disclosure tape csv")->required();
    c_audit->add_option("--total-returned", audit_args.total_returned,
                        "reported cash returned incl. costs; implies the fee");
    c_audit->add_option("--stamp-bps", audit_args.stamp_bps)->capture_default_str();
    c_audit->add_option("--allowed-days", audit_args.allowed_days,
                        "allowed window (default: tape length)");
    c_audit->add_option("--target-value", audit_args.target_value,
                        "announced value (default: tape gross)");
    c_audit->add_option("--sensitivity-delta", audit_args.sensitivity_delta)
        ->capture_default_str();
    c_audit->add_option("--out", audit_args.out_dir)->capture_default_str();

    ExperimentArgs exp;
    auto* c_exp = app.add_subcommand("experiment", "coin games and strategy studies");
    c_exp->add_option("--mode", exp.mode, "coin, beat or collapse")
        ->check(CLI::IsMember({"coin", "beat", "collapse"}))
        ->capture_default_str();
    c_exp->add_option("--n-min", exp.n_min)->capture_default_str();
    c_exp->add_option("--n-max", exp.n_max)->capture_default_str();
    c_exp->add_option("--trials", exp.trials, "monte carlo trials (0 = exact only)")
        ->capture_default_str();
    auto* exp_seed = c_exp->add_option("--seed", exp.seed)->capture_default_str();
    c_exp->add_option("--config", exp.config_path, "scenario file for beat/collapse");
    c_exp->add_option("--paths", exp.paths)->capture_default_str();
    c_exp->add_option("--collapse-day", exp.collapse_day)->capture_default_str();
    c_exp->add_option("--threads", exp.threads, "0 = all");
    c_exp->add_option("--out", exp.out_dir)->capture_default_str();
    add_strategy_flags(c_exp, exp.flags);

    NavArgs nav_args;
    auto* c_nav = app.add_subcommand("nav", "investment trust worked example");
    c_nav->add_option("--assets", nav_args.assets)->capture_default_str();
    c_nav->add_option("--shares", nav_args.shares)->capture_default_str();
    c_nav->add_option("--price", nav_args.price)->capture_default_str();
    c_nav->add_option("--spend", nav_args.spend)->capture_default_str();
    c_nav->add_option("--alt-price", nav_args.alt_price, "second execution price to compare")
        ->capture_default_str();
    c_nav->add_option("--out", nav_args.out_dir, "also write nav.json here");

    ReportArgs rep;
    auto* c_rep = app.add_subcommand("report", "simulate, price and audit in one pass");
    c_rep->add_option("--config", rep.config_path, "scenario file")->required();
    c_rep->add_option("--out", rep.out_dir)->capture_default_str();
    c_rep->add_option("--path-index", rep.path_index);
    c_rep->add_option("--z", rep.z)->capture_default_str();
    auto* rep_seed = c_rep->add_option("--seed", rep.seed);
    add_strategy_flags(c_rep, rep.flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    sim.seed_given = sim_seed->count() > 0;
    risk_args.seed_given = risk_seed->count() > 0;
    exp.seed_given = exp_seed->count() > 0;
    rep.seed_given = rep_seed->count() > 0;

    try {
        if (c_sim->parsed()) return cmd_simulate(sim);
        if (c_risk->parsed()) return cmd_risk(risk_args);
        if (c_audit->parsed()) return cmd_audit(audit_args);
        if (c_exp->parsed()) return cmd_experiment(exp);
        if (c_nav->parsed()) return cmd_nav(nav_args);
        if (c_rep->parsed()) return cmd_report(rep);
    } catch (const InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 1;
    } catch (const ConfigError& e) {
        std::cerr << "config: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "invalid: " << e.what() << '\n';
        return 3;
    } catch (const IoError& e) {
        std::cerr << "io: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
