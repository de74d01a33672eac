#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "airborne/dataset.hpp"
#include "airborne/numerics.hpp"

namespace airborne::estimators {

enum class Method { ols, deming, iv, give };

const char* to_string(Method m);
Method method_from_string(std::string_view token); // DomainError on unknown token

/// Names the series involved in one regression. Derived names are resolved
/// against the dataset on demand: "emissions_gcp" / "_hc" / "_vma" mean
/// fossil-fuel plus that LULCC series, "enso_detrended" the ENSO residuals
/// after removing a linear trend.
struct ModelSpec {
    std::string response = "co2_growth";
    std::string regressor = "emissions_gcp";       // the error-prone series
    std::vector<std::string> covariates;           // empty for the simple spec
    std::vector<std::string> instruments;          // IV/GIVE only

    static ModelSpec simple(std::string_view lulcc = "gcp");
    /// Covariates [enso, vai]; detrended ENSO on request.
    static ModelSpec extended(std::string_view lulcc = "gcp", bool detrend_enso = false);
};

struct DemingConfig {
    double delta = 1.0; // sigma2_G / sigma2_E, must be positive and finite
};

struct FitOptions {
    double level = 0.95;        // Gaussian CI level
    bool dof_correction = false; // residual variance by 1/(T−k) instead of 1/T
};

struct SampleInfo {
    int from = 0;
    int to = 0;
    std::size_t n = 0;
};

struct EstimateResult {
    Method method = Method::ols;
    double alpha_hat = 0.0;
    numerics::Vector gamma_hat;                   // covariate coefficients, spec order
    std::optional<double> se_alpha;               // raw Deming fits carry none
    std::optional<std::array<double, 2>> ci_alpha;
    double ci_level = 0.95;
    double sigma2_hat = 0.0;                      // residual variance of the fit
    SampleInfo sample;
    std::optional<double> delta;                  // echoed by Deming
    std::vector<std::string> instruments;         // echoed by IV/GIVE
    bool weak_instrument = false;                 // |corr(z, x)| < 0.1 for some z
};

/// Least squares through the origin of y on the columns of X; the first
/// column is the slope of interest, the rest fill gamma_hat.
EstimateResult ols(const numerics::Vector& y, const numerics::Matrix& X,
                   const FitOptions& opt = {});

/// Closed-form Deming slope for g on e, no intercept. Point estimate only;
/// the bootstrap module attaches se and CI.
EstimateResult deming_univariate(const numerics::Vector& g, const numerics::Vector& e,
                                 const DemingConfig& cfg);

/// Deming slope with exogenous covariates W: univariate Deming on the
/// annihilated series (I−P_W)g, (I−P_W)e. gamma_hat is recovered by least
/// squares of (g − alpha_hat·e) on W.
EstimateResult deming_multivariate(const numerics::Vector& g, const numerics::Vector& e,
                                   const numerics::Matrix& W, const DemingConfig& cfg);

/// Just-identified IV: alpha_hat = (zᵀy)/(zᵀx), variance from the GIVE
/// formula with Z = z. Self-instrumenting (z = x) reproduces ols(y, x)
/// bit for bit.
EstimateResult iv(const numerics::Vector& y, const numerics::Vector& x,
                  const numerics::Vector& z, const FitOptions& opt = {});

/// Generalised IV estimator: coefficients (XᵀP_Z X)⁻¹(XᵀP_Z y), covariance
/// sigma2·(XᵀP_Z X)⁻¹ with sigma2 = (1/T)Σ residual². Column convention as
/// in ols().
EstimateResult give(const numerics::Vector& y, const numerics::Matrix& X,
                    const numerics::Matrix& Z, const FitOptions& opt = {});

/// Concrete design extracted from a dataset for one ModelSpec.
struct Design {
    numerics::Vector y;
    numerics::Vector e;
    numerics::Matrix W;                        // T×0 when there are no covariates
    std::vector<numerics::Vector> instruments; // resolved instrument columns
    SampleInfo sample;
};

/// One series by name, deriving "emissions_gcp|hc|vma" and "enso_detrended"
/// on the fly; anything else must be a dataset column.
numerics::Vector resolve_series(const std::string& name, const dataset::Dataset& d);

/// Resolve spec series names (including the derived ones) against the data.
Design resolve(const ModelSpec& spec, const dataset::Dataset& d);

/// Dataset-level dispatcher used by the CLI and the bootstrap. method = iv
/// picks the scalar IV path for one instrument and no covariates, and the
/// GIVE path otherwise (tagged give only when overidentified).
EstimateResult fit(Method method, const ModelSpec& spec, const dataset::Dataset& d,
                   const DemingConfig& deming = {}, const FitOptions& opt = {});

} // namespace airborne::estimators
