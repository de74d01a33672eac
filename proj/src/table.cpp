#include "airborne/table.hpp"

#include <array>
#include <cmath>
#include <cstdio>

#include "json.hpp"

#include "airborne/rng.hpp"

namespace airborne::table {

std::string display_name(dataset::LulccSource source) {
    switch (source) {
        case dataset::LulccSource::gcp: return "GCP";
        case dataset::LulccSource::hc: return "H&C";
        case dataset::LulccSource::vma: return "vMa";
    }
    return "?";
}

std::string format_fixed4(double x) {
    double scaled = std::nearbyint(x * 1e4); // ties to even under the default mode
    if (scaled == 0.0) scaled = 0.0;         // normalise -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", scaled / 1e4);
    return buf;
}

namespace {

std::string format_full(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_short(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string ci_cell(const RowResult& r) {
    if (!r.est.ci_alpha) return "-";
    return "[" + format_fixed4((*r.est.ci_alpha)[0]) + ", " +
           format_fixed4((*r.est.ci_alpha)[1]) + "]";
}

std::string se_cell(const RowResult& r) {
    return r.est.se_alpha ? format_fixed4(*r.est.se_alpha) : "-";
}

std::string sample_text(const estimators::SampleInfo& s) {
    return std::to_string(s.from) + "-" + std::to_string(s.to) + " (n=" +
           std::to_string(s.n) + ")";
}

std::string ci_header(double level) {
    return format_short(level * 100.0) + "% CI";
}

nlohmann::json row_json(const RowResult& r) {
    using nlohmann::json;
    json j;
    j["method"] = estimators::to_string(r.est.method);
    j["spec"] = r.spec;
    j["sample"] = {{"from", r.est.sample.from},
                   {"to", r.est.sample.to},
                   {"n", r.est.sample.n}};
    j["estimate"] = r.est.alpha_hat;
    j["se"] = r.est.se_alpha ? json(*r.est.se_alpha) : json(nullptr);
    j["ci"] = r.est.ci_alpha
                  ? json::array({(*r.est.ci_alpha)[0], (*r.est.ci_alpha)[1]})
                  : json(nullptr);
    j["gamma"] = {
        {"enso", !r.est.gamma_hat.empty() ? json(r.est.gamma_hat[0]) : json(nullptr)},
        {"vai", r.est.gamma_hat.size() > 1 ? json(r.est.gamma_hat[1]) : json(nullptr)}};
    j["delta"] = r.est.delta ? json(*r.est.delta) : json(nullptr);
    j["instruments"] = r.est.instruments;
    j["bootstrap"] =
        r.boot ? json{{"B", r.boot->B}, {"seed", r.boot->seed}} : json(nullptr);
    return j;
}

} // namespace

ReplicationTable build_table(const dataset::Dataset& d, const TableConfig& cfg) {
    ReplicationTable t;
    const auto range = d.year_range();
    t.sample = {range.first, range.last, d.size()};
    t.config = cfg;
    const estimators::FitOptions opt{cfg.level, cfg.dof_correction};
    const std::string lulcc_token = dataset::to_string(cfg.lulcc);
    const std::array<estimators::ModelSpec, 2> specs = {
        estimators::ModelSpec::simple(lulcc_token),
        estimators::ModelSpec::extended(lulcc_token, cfg.detrend_enso)};
    const std::array<const char*, 2> spec_names = {"simple", "extended"};

    for (std::size_t p = 0; p < 2; ++p) {
        const auto& spec = specs[p];
        RowResult ols_row;
        ols_row.label = "OLS";
        ols_row.spec = spec_names[p];
        ols_row.est = estimators::fit(estimators::Method::ols, spec, d, {}, opt);
        t.rows.push_back(std::move(ols_row));

        std::vector<std::string> instrument_names;
        for (auto src : cfg.instruments)
            instrument_names.push_back("emissions_" + std::string(dataset::to_string(src)));
        for (std::size_t i = 0; i < cfg.instruments.size(); ++i) {
            auto ivspec = spec;
            ivspec.instruments = {instrument_names[i]};
            RowResult row;
            row.label = "IV reg. (" + display_name(cfg.instruments[i]) + ")";
            row.spec = spec_names[p];
            row.est = estimators::fit(estimators::Method::iv, ivspec, d, {}, opt);
            t.rows.push_back(std::move(row));
        }
        if (cfg.instruments.size() >= 2) {
            auto ivspec = spec;
            ivspec.instruments = instrument_names;
            std::string joined;
            for (std::size_t i = 0; i < cfg.instruments.size(); ++i) {
                if (i) joined += "-";
                joined += display_name(cfg.instruments[i]);
            }
            RowResult row;
            row.label = "IV reg. (" + joined + ")";
            row.spec = spec_names[p];
            row.est = estimators::fit(estimators::Method::iv, ivspec, d, {}, opt);
            t.rows.push_back(std::move(row));
        }

        std::size_t deming_index = 0;
        for (double delta : cfg.delta_grid) {
            const estimators::DemingConfig dc{delta};
            RowResult row;
            row.label = "Deming reg. (" + format_short(delta) + ")";
            row.spec = spec_names[p];
            row.est = estimators::fit(estimators::Method::deming, spec, d, dc, opt);
            if (cfg.B >= 2) {
                // Stable per-row substream so the table never depends on
                // evaluation order.
                const bootstrap::BootstrapConfig bc{
                    cfg.B, rng::derive_seed(cfg.seed, p * 100 + deming_index), cfg.level};
                const bootstrap::BootstrapResult br =
                    bootstrap::residual_bootstrap(spec, d, dc, bc, cfg.threads);
                row.est.se_alpha = br.se;
                row.est.ci_alpha = br.percentile_ci;
                row.est.ci_level = cfg.level;
                row.boot = bc;
            }
            ++deming_index;
            t.rows.push_back(std::move(row));
        }
    }
    return t;
}

std::string render_markdown(const ReplicationTable& t) {
    std::string out = "Sample " + sample_text(t.sample) +
                      ". Simple specification (left), extended specification (right).\n";
    if (t.config.B >= 2)
        out += "Deming rows: " + std::to_string(t.config.B) +
               " bootstrap replications, seed " + std::to_string(t.config.seed) +
               ", percentile intervals.\n";
    else
        out += "Deming rows: bootstrap disabled, point estimates only.\n";
    out += "\n";
    const std::string ci = ci_header(t.config.level);
    out += "| Model | Est. | S.e. | " + ci + " | Est. | S.e. | " + ci + " |\n";
    out += "|---|---|---|---|---|---|---|\n";
    const std::size_t panel = t.rows.size() / 2;
    for (std::size_t i = 0; i < panel; ++i) {
        const RowResult& s = t.rows[i];
        const RowResult& x = t.rows[i + panel];
        out += "| " + s.label + " | " + format_fixed4(s.est.alpha_hat) + " | " + se_cell(s) +
               " | " + ci_cell(s) + " | " + format_fixed4(x.est.alpha_hat) + " | " +
               se_cell(x) + " | " + ci_cell(x) + " |\n";
    }
    return out;
}

std::string render_markdown(const RowResult& row) {
    std::string out = "| Model | Spec | Sample | Est. | S.e. | " +
                      ci_header(row.est.ci_level) + " |\n|---|---|---|---|---|---|\n";
    out += "| " + row.label + " | " + row.spec + " | " + sample_text(row.est.sample) +
           " | " + format_fixed4(row.est.alpha_hat) + " | " + se_cell(row) + " | " +
           ci_cell(row) + " |\n";
    if (!row.est.gamma_hat.empty()) {
        out += "\ngamma: enso=" + format_fixed4(row.est.gamma_hat[0]);
        if (row.est.gamma_hat.size() > 1)
            out += ", vai=" + format_fixed4(row.est.gamma_hat[1]);
        out += "\n";
    }
    if (row.est.delta) out += "\ndelta: " + format_short(*row.est.delta) + "\n";
    if (!row.est.instruments.empty()) {
        out += "\ninstruments:";
        for (const auto& z : row.est.instruments) out += " " + z;
        out += "\n";
    }
    if (row.boot)
        out += "\nbootstrap: B=" + std::to_string(row.boot->B) + ", seed=" +
               std::to_string(row.boot->seed) + "\n";
    if (row.est.weak_instrument) out += "\nwarning: weak instrument (|corr| < 0.1)\n";
    return out;
}

std::string render_csv(const std::vector<RowResult>& rows) {
    std::string out =
        "label,method,spec,from,to,n,estimate,se,ci_lo,ci_hi,gamma_enso,gamma_vai,"
        "delta,instruments,bootstrap_B,bootstrap_seed\n";
    for (const auto& r : rows) {
        out += r.label + "," + estimators::to_string(r.est.method) + "," + r.spec + "," +
               std::to_string(r.est.sample.from) + "," + std::to_string(r.est.sample.to) +
               "," + std::to_string(r.est.sample.n) + "," + format_full(r.est.alpha_hat);
        out += ",";
        if (r.est.se_alpha) out += format_full(*r.est.se_alpha);
        out += ",";
        if (r.est.ci_alpha) out += format_full((*r.est.ci_alpha)[0]);
        out += ",";
        if (r.est.ci_alpha) out += format_full((*r.est.ci_alpha)[1]);
        out += ",";
        if (!r.est.gamma_hat.empty()) out += format_full(r.est.gamma_hat[0]);
        out += ",";
        if (r.est.gamma_hat.size() > 1) out += format_full(r.est.gamma_hat[1]);
        out += ",";
        if (r.est.delta) out += format_full(*r.est.delta);
        out += ",";
        for (std::size_t i = 0; i < r.est.instruments.size(); ++i) {
            if (i) out += ";";
            out += r.est.instruments[i];
        }
        out += ",";
        if (r.boot) out += std::to_string(r.boot->B);
        out += ",";
        if (r.boot) out += std::to_string(r.boot->seed);
        out += "\n";
    }
    return out;
}

std::string render_json(const RowResult& row) { return row_json(row).dump(2); }

std::string render_json(const std::vector<RowResult>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) arr.push_back(row_json(r));
    return arr.dump(2);
}

} // namespace airborne::table
