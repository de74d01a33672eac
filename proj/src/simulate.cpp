#include "airborne/simulate.hpp"

#include <cmath>
#include <string>

#include "airborne/estimators.hpp"
#include "airborne/rng.hpp"

namespace airborne::simulate {

namespace {

constexpr std::uint64_t tag_estar = 1;
constexpr std::uint64_t tag_eta = 2;
constexpr std::uint64_t tag_kappa = 3;
constexpr std::uint64_t tag_u = 4;
constexpr std::uint64_t tag_omega = 5;
constexpr std::uint64_t tag_enso = 6;
constexpr std::uint64_t tag_vai = 7;

constexpr double walk_innovation_sd = 0.1;

void validate(const SyntheticConfig& cfg) {
    if (cfg.T < 2) throw DomainError("simulate: T must be at least 2");
    for (double sd : {cfg.sigma_u, cfg.sigma_omega, cfg.sigma_eta, cfg.sigma_kappa})
        if (!(sd >= 0.0) || !std::isfinite(sd))
            throw DomainError("simulate: error sds must be finite and nonnegative");
}

numerics::Vector scaled_normals(rng::Stream stream, std::size_t n, double sd) {
    numerics::Vector v(n);
    for (auto& x : v) x = sd * stream.next_normal();
    return v;
}

} // namespace

SyntheticData generate(const SyntheticConfig& cfg) {
    validate(cfg);
    const rng::Stream root(cfg.seed);
    SyntheticData data;

    data.e_star.resize(cfg.T);
    if (cfg.e_star_process == EStarProcess::linear_ramp) {
        for (std::size_t t = 0; t < cfg.T; ++t)
            data.e_star[t] = cfg.ramp_base + cfg.ramp_slope * static_cast<double>(t);
    } else {
        rng::Stream walk = root.substream(tag_estar);
        double level = cfg.ramp_base;
        for (std::size_t t = 0; t < cfg.T; ++t) {
            data.e_star[t] = level;
            level += cfg.ramp_slope + walk_innovation_sd * walk.next_normal();
        }
    }

    const numerics::Vector eta = scaled_normals(root.substream(tag_eta), cfg.T, cfg.sigma_eta);
    const numerics::Vector kappa =
        scaled_normals(root.substream(tag_kappa), cfg.T, cfg.sigma_kappa);
    const numerics::Vector u = scaled_normals(root.substream(tag_u), cfg.T, cfg.sigma_u);
    const numerics::Vector omega =
        scaled_normals(root.substream(tag_omega), cfg.T, cfg.sigma_omega);
    data.enso = scaled_normals(root.substream(tag_enso), cfg.T, 1.0);
    data.vai = scaled_normals(root.substream(tag_vai), cfg.T, 1.0);

    data.e1.resize(cfg.T);
    data.e2.resize(cfg.T);
    data.g.resize(cfg.T);
    for (std::size_t t = 0; t < cfg.T; ++t) {
        data.e1[t] = data.e_star[t] + eta[t];
        data.e2[t] = data.e_star[t] + kappa[t];
        double g = cfg.alpha_true * data.e_star[t] + u[t] + omega[t];
        if (cfg.gamma_true)
            g += cfg.gamma_true->first * data.enso[t] + cfg.gamma_true->second * data.vai[t];
        data.g[t] = g;
    }
    return data;
}

double attenuation_factor(const numerics::Vector& e_star, double sigma_eta) {
    if (e_star.empty()) throw DomainError("attenuation_factor: empty e_star");
    const double m2 = numerics::dot(e_star, e_star) / static_cast<double>(e_star.size());
    return m2 / (m2 + sigma_eta * sigma_eta);
}

MonteCarloReport monte_carlo(const SyntheticConfig& cfg, std::size_t R) {
    validate(cfg);
    if (R < 1) throw DomainError("monte_carlo: R must be at least 1");

    const double s2g = cfg.sigma_u * cfg.sigma_u + cfg.sigma_omega * cfg.sigma_omega;
    const double s2e = cfg.sigma_eta * cfg.sigma_eta;
    double delta_true = 1.0;
    if (s2e == 0.0 && s2g > 0.0) delta_true = 1e12;
    else if (s2g == 0.0 && s2e > 0.0) delta_true = 1e-12;
    else if (s2g > 0.0 && s2e > 0.0) delta_true = s2g / s2e;
    const estimators::DemingConfig deming_cfg{delta_true};

    numerics::Vector ols_draws(R), iv_draws(R), deming_draws(R);
    double predicted = 0.0;
    for (std::size_t r = 0; r < R; ++r) {
        SyntheticConfig draw_cfg = cfg;
        draw_cfg.seed = rng::derive_seed(cfg.seed, r);
        const SyntheticData data = generate(draw_cfg);
        predicted += cfg.alpha_true * attenuation_factor(data.e_star, cfg.sigma_eta);

        if (cfg.gamma_true) {
            const numerics::Matrix W =
                numerics::Matrix::from_columns({data.enso, data.vai});
            const numerics::Matrix X =
                numerics::Matrix::from_columns({data.e1, data.enso, data.vai});
            const numerics::Matrix Z =
                numerics::Matrix::from_columns({data.e2, data.enso, data.vai});
            ols_draws[r] = estimators::ols(data.g, X).alpha_hat;
            iv_draws[r] = estimators::give(data.g, X, Z).alpha_hat;
            deming_draws[r] =
                estimators::deming_multivariate(data.g, data.e1, W, deming_cfg).alpha_hat;
        } else {
            const numerics::Matrix X = numerics::Matrix::from_columns({data.e1});
            ols_draws[r] = estimators::ols(data.g, X).alpha_hat;
            iv_draws[r] = estimators::iv(data.g, data.e1, data.e2).alpha_hat;
            deming_draws[r] =
                estimators::deming_univariate(data.g, data.e1, deming_cfg).alpha_hat;
        }
    }

    const auto summarize = [R](const numerics::Vector& draws) {
        EstimatorSummary s;
        for (double d : draws) s.mean += d;
        s.mean /= static_cast<double>(R);
        if (R > 1) {
            double ss = 0.0;
            for (double d : draws) ss += (d - s.mean) * (d - s.mean);
            s.sd = std::sqrt(ss / static_cast<double>(R - 1));
        }
        return s;
    };

    MonteCarloReport report;
    report.R = R;
    report.T = cfg.T;
    report.alpha_true = cfg.alpha_true;
    report.predicted_ols = predicted / static_cast<double>(R);
    report.delta_true = delta_true;
    report.ols = summarize(ols_draws);
    report.iv = summarize(iv_draws);
    report.deming = summarize(deming_draws);
    return report;
}

} // namespace airborne::simulate
