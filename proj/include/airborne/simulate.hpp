#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "airborne/numerics.hpp"

namespace airborne::simulate {

/// Deterministic ramp e*_t = base + slope·t, or a random walk that starts at
/// base, drifts by slope per step, and adds N(0, 0.1²) innovations.
enum class EStarProcess { linear_ramp, random_walk_drift };

struct SyntheticConfig {
    std::size_t T = 64;
    double alpha_true = 0.5;
    std::optional<std::pair<double, double>> gamma_true; // loadings on (enso, vai)
    double sigma_u = 0.1;     // structural error in the g equation
    double sigma_omega = 0.0; // measurement error on g
    double sigma_eta = 0.0;   // measurement error on e1
    double sigma_kappa = 0.0; // measurement error on e2
    EStarProcess e_star_process = EStarProcess::linear_ramp;
    double ramp_base = 2.5;
    double ramp_slope = 0.12;
    std::uint64_t seed = 1;
};

/// One draw of the errors-in-variables model: latent e*, its two noisy
/// measurements, the response, and standard-normal covariate series (which
/// enter g only when gamma_true is set).
struct SyntheticData {
    numerics::Vector e_star;
    numerics::Vector e1;
    numerics::Vector e2;
    numerics::Vector g;
    numerics::Vector enso;
    numerics::Vector vai;
};

/// Every error source draws from its own substream of cfg.seed, so changing
/// one sd never perturbs the other components.
SyntheticData generate(const SyntheticConfig& cfg);

/// m2 / (m2 + sigma_eta²) with m2 = (1/T)Σ e*_t², the multiplicative OLS
/// attenuation under regressor measurement error.
double attenuation_factor(const numerics::Vector& e_star, double sigma_eta);

struct EstimatorSummary {
    double mean = 0.0;
    double sd = 0.0; // across replications, R−1 divisor (0 when R = 1)
};

struct MonteCarloReport {
    std::size_t R = 0;
    std::size_t T = 0;
    double alpha_true = 0.0;
    double predicted_ols = 0.0; // alpha_true · mean attenuation factor
    double delta_true = 0.0;    // (sigma_u² + sigma_omega²) / sigma_eta², guarded
    EstimatorSummary ols;
    EstimatorSummary iv;     // e2 instruments e1
    EstimatorSummary deming; // run at delta_true
};

/// R independent datasets (replication r uses the substream of (seed, r)),
/// each fit by OLS of g on e1, IV with e2 as instrument, and Deming at the
/// true delta. Covariates are included in every fit when gamma_true is set.
MonteCarloReport monte_carlo(const SyntheticConfig& cfg, std::size_t R);

} // namespace airborne::simulate
