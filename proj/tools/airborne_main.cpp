#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "airborne/bootstrap.hpp"
#include "airborne/dataset.hpp"
#include "airborne/errors.hpp"
#include "airborne/estimators.hpp"
#include "airborne/simulate.hpp"
#include "airborne/table.hpp"

namespace {

using namespace airborne;

constexpr int year_unset = std::numeric_limits<int>::min();

struct CommonArgs {
    std::string data = "data/airborne.csv";
    int from = year_unset;
    int to = year_unset;
    std::string spec = "simple";
    std::string lulcc = "gcp";
    std::vector<std::string> instruments;
    std::string method = "ols";
    double delta = 1.0;
    std::size_t bootstrap_b = 9999;
    std::uint64_t seed = 20220101;
    double level = 0.95;
    bool detrend_enso = false;
    bool dof_correction = false;
    std::string format = "md";
    std::string plot_dir;
    unsigned threads = 1;
};

void add_common_options(CLI::App* cmd, CommonArgs& a, bool with_model_flags) {
    cmd->add_option("--data", a.data, "input CSV path")->capture_default_str();
    cmd->add_option("--from", a.from, "first year of the sample");
    cmd->add_option("--to", a.to, "last year of the sample");
    cmd->add_option("--lulcc", a.lulcc, "LULCC source for the regressor")
        ->check(CLI::IsMember({"gcp", "hc", "vma"}))
        ->capture_default_str();
    cmd->add_option("--instruments", a.instruments,
                    "comma-separated LULCC sources used as instruments")
        ->delimiter(',');
    cmd->add_option("--bootstrap", a.bootstrap_b,
                    "Deming bootstrap replications (0 disables)")
        ->capture_default_str();
    cmd->add_option("--seed", a.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--level", a.level, "confidence level")->capture_default_str();
    cmd->add_flag("--detrend-enso", a.detrend_enso, "use linearly detrended ENSO");
    cmd->add_flag("--dof-correction", a.dof_correction,
                  "residual variance by 1/(T-k) instead of 1/T");
    cmd->add_option("--format", a.format, "output format")
        ->check(CLI::IsMember({"md", "csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--emit-plot-data", a.plot_dir, "write tidy plot CSVs to this directory");
    cmd->add_option("--threads", a.threads, "bootstrap worker threads")
        ->capture_default_str();
    if (with_model_flags) {
        cmd->add_option("--spec", a.spec, "regression specification")
            ->check(CLI::IsMember({"simple", "extended"}))
            ->capture_default_str();
        cmd->add_option("--method", a.method, "estimator")
            ->check(CLI::IsMember({"ols", "deming", "iv"}))
            ->capture_default_str();
        cmd->add_option("--delta", a.delta, "Deming error-variance ratio")
            ->capture_default_str();
    }
}

int usage_error(const std::string& message) {
    std::cerr << "error: " << message << "\n";
    return 2;
}

bool validate_common(const CommonArgs& a, std::string& message) {
    if (!(a.level > 0.0 && a.level < 1.0)) {
        message = "--level must lie in (0, 1)";
        return false;
    }
    if (a.from != year_unset && a.to != year_unset && a.from > a.to) {
        message = "--from must not exceed --to";
        return false;
    }
    if (a.bootstrap_b == 1) {
        message = "--bootstrap needs at least 2 replications (or 0 to disable)";
        return false;
    }
    return true;
}

dataset::Dataset load_sample(const CommonArgs& a) {
    dataset::Dataset d = dataset::load_csv(a.data);
    const auto range = d.year_range();
    const int from = a.from == year_unset ? range.first : a.from;
    const int to = a.to == year_unset ? range.last : a.to;
    if (from != range.first || to != range.last) d = dataset::subset(d, from, to);
    return d;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write " + path.string());
    out << text;
}

void emit_plot_data(const dataset::Dataset& d, const std::string& dir) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const auto range = d.year_range();
    const auto value = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    const auto emit = [&](const char* name, const std::vector<std::string>& headers,
                          const std::vector<numerics::Vector>& columns) {
        std::string text = "year";
        for (const auto& h : headers) text += "," + h;
        text += "\n";
        for (std::size_t i = 0; i < d.size(); ++i) {
            text += std::to_string(range.first + static_cast<int>(i));
            for (const auto& col : columns) text += "," + value(col[i]);
            text += "\n";
        }
        write_text(fs::path(dir) / name, text);
    };

    emit("emissions.csv",
         {"emissions_gcp", "emissions_hc", "emissions_vma", "co2_growth"},
         {dataset::emissions(d, dataset::LulccSource::gcp).values,
          dataset::emissions(d, dataset::LulccSource::hc).values,
          dataset::emissions(d, dataset::LulccSource::vma).values,
          d.series("co2_growth").values});
    emit("lulcc.csv", {"lulcc_gcp", "lulcc_hc", "lulcc_vma"},
         {d.series("lulcc_gcp").values, d.series("lulcc_hc").values,
          d.series("lulcc_vma").values});
    emit("covariates.csv", {"enso", "enso_detrended", "vai"},
         {d.series("enso").values, dataset::detrend(d.series("enso")).values,
          d.series("vai").values});
}

std::vector<dataset::LulccSource> parse_instruments(const std::vector<std::string>& tokens) {
    std::vector<dataset::LulccSource> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) out.push_back(dataset::lulcc_from_string(t));
    return out;
}

int run_estimate(const CommonArgs& a) {
    std::string message;
    if (!validate_common(a, message)) return usage_error(message);
    const auto method = estimators::method_from_string(a.method);
    if (method == estimators::Method::iv && a.instruments.empty())
        return usage_error("--method iv: instruments required (--instruments hc,vma)");
    if (method == estimators::Method::deming && !(a.delta > 0.0))
        return usage_error("--delta must be positive");
    std::vector<dataset::LulccSource> instruments;
    try {
        instruments = parse_instruments(a.instruments);
    } catch (const DomainError& e) {
        return usage_error(e.what());
    }

    const dataset::Dataset d = load_sample(a);
    estimators::ModelSpec spec = a.spec == "simple"
                                     ? estimators::ModelSpec::simple(a.lulcc)
                                     : estimators::ModelSpec::extended(a.lulcc, a.detrend_enso);
    for (auto src : instruments)
        spec.instruments.push_back("emissions_" + std::string(dataset::to_string(src)));

    table::RowResult row;
    row.spec = a.spec;
    switch (method) {
        case estimators::Method::ols: row.label = "OLS"; break;
        case estimators::Method::deming:
            row.label = "Deming reg.";
            break;
        case estimators::Method::iv:
        case estimators::Method::give: {
            std::string joined;
            for (std::size_t i = 0; i < instruments.size(); ++i) {
                if (i) joined += "-";
                joined += table::display_name(instruments[i]);
            }
            row.label = "IV reg. (" + joined + ")";
            break;
        }
    }
    const estimators::FitOptions opt{a.level, a.dof_correction};
    const estimators::DemingConfig dc{a.delta};
    row.est = estimators::fit(method, spec, d, dc, opt);
    if (method == estimators::Method::deming && a.bootstrap_b >= 2) {
        const bootstrap::BootstrapConfig bc{a.bootstrap_b, a.seed, a.level};
        const bootstrap::BootstrapResult br =
            bootstrap::residual_bootstrap(spec, d, dc, bc, a.threads);
        row.est.se_alpha = br.se;
        row.est.ci_alpha = br.percentile_ci;
        row.est.ci_level = a.level;
        row.boot = bc;
    }

    if (a.format == "md") std::cout << table::render_markdown(row);
    else if (a.format == "csv") std::cout << table::render_csv({row});
    else std::cout << table::render_json(row) << "\n";
    if (!a.plot_dir.empty()) emit_plot_data(d, a.plot_dir);
    return 0;
}

int run_replicate(const CommonArgs& a) {
    std::string message;
    if (!validate_common(a, message)) return usage_error(message);
    table::TableConfig cfg;
    cfg.lulcc = dataset::lulcc_from_string(a.lulcc);
    if (!a.instruments.empty()) cfg.instruments = parse_instruments(a.instruments);
    cfg.B = a.bootstrap_b;
    cfg.seed = a.seed;
    cfg.level = a.level;
    cfg.detrend_enso = a.detrend_enso;
    cfg.dof_correction = a.dof_correction;
    cfg.threads = a.threads;

    const dataset::Dataset full = dataset::load_csv(a.data);
    const auto range = full.year_range();
    std::vector<table::ReplicationTable> tables;
    if (a.from != year_unset || a.to != year_unset) {
        tables.push_back(table::build_table(load_sample(a), cfg));
    } else {
        tables.push_back(table::build_table(full, cfg));
        if (range.first < 1992 && range.last >= 1992)
            tables.push_back(
                table::build_table(dataset::subset(full, 1992, range.last), cfg));
    }

    if (a.format == "md") {
        for (std::size_t i = 0; i < tables.size(); ++i) {
            if (i) std::cout << "\n";
            std::cout << table::render_markdown(tables[i]);
        }
    } else {
        std::vector<table::RowResult> rows;
        for (const auto& t : tables) rows.insert(rows.end(), t.rows.begin(), t.rows.end());
        if (a.format == "csv") std::cout << table::render_csv(rows);
        else std::cout << table::render_json(rows) << "\n";
    }
    if (!a.plot_dir.empty()) emit_plot_data(full, a.plot_dir);
    return 0;
}

struct SimulateArgs {
    std::size_t T = 1000;
    std::size_t R = 1000;
    double alpha = 0.5;
    double gamma_enso = 0.0;
    double gamma_vai = 0.0;
    bool with_gamma = false;
    double sigma_u = 0.1;
    double sigma_omega = 0.0;
    double sigma_eta = 0.0;
    double sigma_kappa = 0.0;
    std::string process = "linear_ramp";
    double ramp_base = 2.5;
    double ramp_slope = 0.12;
    std::uint64_t seed = 20220101;
    std::string format = "md";
};

int run_simulate(const SimulateArgs& a) {
    simulate::SyntheticConfig cfg;
    cfg.T = a.T;
    cfg.alpha_true = a.alpha;
    if (a.with_gamma) cfg.gamma_true = {a.gamma_enso, a.gamma_vai};
    cfg.sigma_u = a.sigma_u;
    cfg.sigma_omega = a.sigma_omega;
    cfg.sigma_eta = a.sigma_eta;
    cfg.sigma_kappa = a.sigma_kappa;
    cfg.e_star_process = a.process == "linear_ramp" ? simulate::EStarProcess::linear_ramp
                                                    : simulate::EStarProcess::random_walk_drift;
    cfg.ramp_base = a.ramp_base;
    cfg.ramp_slope = a.ramp_slope;
    cfg.seed = a.seed;
    const simulate::MonteCarloReport report = simulate::monte_carlo(cfg, a.R);

    const auto value = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    if (a.format == "md") {
        std::cout << "Monte Carlo: R=" << report.R << ", T=" << report.T
                  << ", alpha=" << table::format_fixed4(report.alpha_true)
                  << ", delta_true=" << value(report.delta_true)
                  << ", predicted OLS plim=" << table::format_fixed4(report.predicted_ols)
                  << "\n\n| Estimator | Mean | SD |\n|---|---|---|\n";
        std::cout << "| OLS | " << table::format_fixed4(report.ols.mean) << " | "
                  << table::format_fixed4(report.ols.sd) << " |\n";
        std::cout << "| IV | " << table::format_fixed4(report.iv.mean) << " | "
                  << table::format_fixed4(report.iv.sd) << " |\n";
        std::cout << "| Deming | " << table::format_fixed4(report.deming.mean) << " | "
                  << table::format_fixed4(report.deming.sd) << " |\n";
    } else if (a.format == "csv") {
        std::cout << "estimator,mean,sd\n";
        std::cout << "ols," << value(report.ols.mean) << "," << value(report.ols.sd) << "\n";
        std::cout << "iv," << value(report.iv.mean) << "," << value(report.iv.sd) << "\n";
        std::cout << "deming," << value(report.deming.mean) << "," << value(report.deming.sd)
                  << "\n";
    } else {
        nlohmann::json j;
        j["R"] = report.R;
        j["T"] = report.T;
        j["alpha_true"] = report.alpha_true;
        j["predicted_ols"] = report.predicted_ols;
        j["delta_true"] = report.delta_true;
        j["ols"] = {{"mean", report.ols.mean}, {"sd", report.ols.sd}};
        j["iv"] = {{"mean", report.iv.mean}, {"sd", report.iv.sd}};
        j["deming"] = {{"mean", report.deming.mean}, {"sd", report.deming.sd}};
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

struct TrendArgs {
    CommonArgs common;
    std::string series = "enso";
};

int run_trendtest(const TrendArgs& a) {
    std::string message;
    if (!validate_common(a.common, message)) return usage_error(message);
    const dataset::Dataset d = load_sample(a.common);
    const numerics::Vector values = estimators::resolve_series(a.series, d);
    const dataset::AnnualSeries series{a.series, d.year_range().first, values};
    const dataset::TrendTestResult result = dataset::trend_test(series);

    const auto value = [](double x) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    if (a.common.format == "md") {
        std::cout << "| Series | Slope (/yr) | t | p |\n|---|---|---|---|\n";
        std::cout << "| " << a.series << " | " << table::format_fixed4(result.slope) << " | "
                  << table::format_fixed4(result.t_stat) << " | "
                  << table::format_fixed4(result.p_value) << " |\n";
    } else if (a.common.format == "csv") {
        std::cout << "series,slope,t_stat,p_value\n";
        std::cout << a.series << "," << value(result.slope) << "," << value(result.t_stat)
                  << "," << value(result.p_value) << "\n";
    } else {
        nlohmann::json j;
        j["series"] = a.series;
        j["slope"] = result.slope;
        j["t_stat"] = result.t_stat;
        j["p_value"] = result.p_value;
        const auto range = d.year_range();
        j["sample"] = {{"from", range.first}, {"to", range.last}, {"n", d.size()}};
        std::cout << j.dump(2) << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Airborne-fraction estimators robust to emissions measurement error"};
    app.require_subcommand(1);

    CommonArgs est_args;
    CLI::App* est = app.add_subcommand("estimate", "run one estimator on one sample");
    add_common_options(est, est_args, true);

    CommonArgs rep_args;
    CLI::App* rep = app.add_subcommand(
        "replicate", "full estimate tables (all methods, both specifications)");
    add_common_options(rep, rep_args, false);

    SimulateArgs sim_args;
    CLI::App* sim = app.add_subcommand("simulate", "Monte-Carlo study on synthetic data");
    sim->add_option("--T", sim_args.T, "sample size")->capture_default_str();
    sim->add_option("--R", sim_args.R, "replications")->capture_default_str();
    sim->add_option("--alpha", sim_args.alpha, "true airborne fraction")
        ->capture_default_str();
    auto* ge = sim->add_option("--gamma-enso", sim_args.gamma_enso, "ENSO loading");
    auto* gv = sim->add_option("--gamma-vai", sim_args.gamma_vai, "VAI loading");
    sim->add_option("--sigma-u", sim_args.sigma_u, "structural error sd")
        ->capture_default_str();
    sim->add_option("--sigma-omega", sim_args.sigma_omega, "response measurement error sd")
        ->capture_default_str();
    sim->add_option("--sigma-eta", sim_args.sigma_eta, "regressor measurement error sd")
        ->capture_default_str();
    sim->add_option("--sigma-kappa", sim_args.sigma_kappa, "instrument measurement error sd")
        ->capture_default_str();
    sim->add_option("--process", sim_args.process, "latent emissions process")
        ->check(CLI::IsMember({"linear_ramp", "random_walk_drift"}))
        ->capture_default_str();
    sim->add_option("--ramp-base", sim_args.ramp_base, "e* level at t=0")
        ->capture_default_str();
    sim->add_option("--ramp-slope", sim_args.ramp_slope, "e* drift per step")
        ->capture_default_str();
    sim->add_option("--seed", sim_args.seed, "RNG seed")->capture_default_str();
    sim->add_option("--format", sim_args.format, "output format")
        ->check(CLI::IsMember({"md", "csv", "json"}))
        ->capture_default_str();

    TrendArgs trend_args;
    CLI::App* trend = app.add_subcommand("trendtest", "linear trend t-test for one series");
    add_common_options(trend, trend_args.common, false);
    trend->add_option("--series", trend_args.series, "series name")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }
    sim_args.with_gamma = ge->count() > 0 || gv->count() > 0;

    try {
        if (est->parsed()) return run_estimate(est_args);
        if (rep->parsed()) return run_replicate(rep_args);
        if (sim->parsed()) return run_simulate(sim_args);
        return run_trendtest(trend_args);
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
