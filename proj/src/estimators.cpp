#include "airborne/estimators.hpp"

#include <cmath>
#include <string>

namespace airborne::estimators {

const char* to_string(Method m) {
    switch (m) {
        case Method::ols: return "ols";
        case Method::deming: return "deming";
        case Method::iv: return "iv";
        case Method::give: return "give";
    }
    return "?";
}

Method method_from_string(std::string_view token) {
    if (token == "ols") return Method::ols;
    if (token == "deming") return Method::deming;
    if (token == "iv") return Method::iv;
    if (token == "give") return Method::give;
    throw DomainError("unknown method: " + std::string(token));
}

ModelSpec ModelSpec::simple(std::string_view lulcc) {
    dataset::lulcc_from_string(lulcc); // validate the token
    ModelSpec s;
    s.regressor = "emissions_" + std::string(lulcc);
    return s;
}

ModelSpec ModelSpec::extended(std::string_view lulcc, bool detrend_enso) {
    ModelSpec s = simple(lulcc);
    s.covariates = {detrend_enso ? "enso_detrended" : "enso", "vai"};
    return s;
}

namespace {

void require_lengths(std::size_t a, std::size_t b, const char* what) {
    if (a != b)
        throw SampleMismatch(std::string(what) + ": lengths " + std::to_string(a) + " and " +
                             std::to_string(b) + " differ");
}

double gaussian_z(double level) {
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence level must lie in (0, 1)");
    return numerics::std_normal_quantile(1.0 - (1.0 - level) / 2.0);
}

double variance_divisor(std::size_t n, std::size_t k, bool dof_correction) {
    return static_cast<double>(dof_correction ? n - k : n);
}

double residual_variance(const numerics::Vector& y, const numerics::Matrix& X,
                         const numerics::Vector& coef, double divisor) {
    double rss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double fit = 0.0;
        for (std::size_t j = 0; j < X.cols(); ++j) fit += X(i, j) * coef[j];
        const double r = y[i] - fit;
        rss += r * r;
    }
    return rss / divisor;
}

double pearson_corr(const numerics::Vector& a, const numerics::Vector& b) {
    const double n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return 0.0;
    return sab / std::sqrt(saa * sbb);
}

void attach_gaussian_ci(EstimateResult& r, double level) {
    const double zq = gaussian_z(level);
    const double se = *r.se_alpha;
    r.ci_alpha = {{r.alpha_hat - zq * se, r.alpha_hat + zq * se}};
    r.ci_level = level;
}

} // namespace

EstimateResult ols(const numerics::Vector& y, const numerics::Matrix& X,
                   const FitOptions& opt) {
    require_lengths(y.size(), X.rows(), "ols");
    if (X.cols() == 0) throw RankError("ols: no regressors");
    if (y.size() < X.cols() + 1)
        throw RankError("ols: " + std::to_string(y.size()) + " rows for " +
                        std::to_string(X.cols()) + " regressors");

    EstimateResult r;
    r.method = Method::ols;
    r.sample.n = y.size();
    const double divisor = variance_divisor(y.size(), X.cols(), opt.dof_correction);

    if (X.cols() == 1) {
        // Scalar path kept in the exact form the IV estimator collapses to
        // when the instrument equals the regressor.
        const numerics::Vector x = X.column(0);
        const double sxx = numerics::dot(x, x);
        if (sxx <= 0.0) throw NotPositiveDefinite("ols: zero regressor");
        r.alpha_hat = numerics::dot(x, y) / sxx;
        r.sigma2_hat = residual_variance(y, X, {r.alpha_hat}, divisor);
        r.se_alpha = std::sqrt(r.sigma2_hat / sxx);
    } else {
        const numerics::CholeskyFactor chol(numerics::gram(X));
        const numerics::Vector coef = chol.solve(numerics::matvec_transposed(X, y));
        r.alpha_hat = coef[0];
        r.gamma_hat.assign(coef.begin() + 1, coef.end());
        r.sigma2_hat = residual_variance(y, X, coef, divisor);
        r.se_alpha = std::sqrt(r.sigma2_hat * chol.inverse()(0, 0));
    }
    attach_gaussian_ci(r, opt.level);
    return r;
}

EstimateResult deming_univariate(const numerics::Vector& g, const numerics::Vector& e,
                                 const DemingConfig& cfg) {
    require_lengths(g.size(), e.size(), "deming");
    if (g.size() < 2) throw RankError("deming: needs at least 2 observations");
    if (!(cfg.delta > 0.0) || !std::isfinite(cfg.delta))
        throw DomainError("deming: delta must be positive and finite");

    const double sgg = numerics::dot(g, g);
    const double see = numerics::dot(e, e);
    const double seg = numerics::dot(e, g);
    if (seg == 0.0) throw DegenerateCross("deming: e'g = 0, slope undefined");

    // Positive root of  alpha^2 (e'g) + alpha (delta e'e - g'g) - delta e'g = 0.
    // When a < 0 the direct a + sqrt(...) cancels, so switch to the conjugate
    // form; this keeps the delta -> infinity limit accurate.
    const double a = sgg - cfg.delta * see;
    const double disc = std::sqrt(a * a + 4.0 * cfg.delta * seg * seg);
    const double numerator = a >= 0.0 ? a + disc : 4.0 * cfg.delta * seg * seg / (disc - a);
    EstimateResult r;
    r.method = Method::deming;
    r.alpha_hat = numerator / (2.0 * seg);
    r.delta = cfg.delta;
    r.sample.n = g.size();
    double rss = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double u = g[i] - r.alpha_hat * e[i];
        rss += u * u;
    }
    r.sigma2_hat = rss / static_cast<double>(g.size());
    return r;
}

EstimateResult deming_multivariate(const numerics::Vector& g, const numerics::Vector& e,
                                   const numerics::Matrix& W, const DemingConfig& cfg) {
    require_lengths(g.size(), e.size(), "deming");
    require_lengths(g.size(), W.rows(), "deming covariates");
    if (W.cols() == 0) throw RankError("deming_multivariate: empty covariate block");

    EstimateResult r =
        deming_univariate(numerics::annihilate(W, g), numerics::annihilate(W, e), cfg);

    numerics::Vector partial(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) partial[i] = g[i] - r.alpha_hat * e[i];
    r.gamma_hat = numerics::solve_spd(numerics::gram(W),
                                      numerics::matvec_transposed(W, partial));
    double rss = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        double u = partial[i];
        for (std::size_t j = 0; j < W.cols(); ++j) u -= W(i, j) * r.gamma_hat[j];
        rss += u * u;
    }
    r.sigma2_hat = rss / static_cast<double>(g.size());
    return r;
}

EstimateResult iv(const numerics::Vector& y, const numerics::Vector& x,
                  const numerics::Vector& z, const FitOptions& opt) {
    require_lengths(y.size(), x.size(), "iv");
    require_lengths(y.size(), z.size(), "iv instrument");
    if (y.size() < 2) throw RankError("iv: needs at least 2 observations");

    const double szx = numerics::dot(z, x);
    if (szx == 0.0) throw ZeroCross("iv: z'x = 0, estimator undefined");
    const double szz = numerics::dot(z, z);

    EstimateResult r;
    r.method = Method::iv;
    r.sample.n = y.size();
    r.alpha_hat = numerics::dot(z, y) / szx;
    double rss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double u = y[i] - r.alpha_hat * x[i];
        rss += u * u;
    }
    r.sigma2_hat = rss / variance_divisor(y.size(), 1, opt.dof_correction);
    // Var = sigma2 * z'z / (z'x)^2, factored so that z = x reproduces the
    // OLS variance sigma2 / x'x bit for bit (z'z / z'x is then exactly 1).
    r.se_alpha = std::sqrt((r.sigma2_hat / szx) * (szz / szx));
    r.weak_instrument = std::abs(pearson_corr(z, x)) < 0.1;
    attach_gaussian_ci(r, opt.level);
    return r;
}

EstimateResult give(const numerics::Vector& y, const numerics::Matrix& X,
                    const numerics::Matrix& Z, const FitOptions& opt) {
    require_lengths(y.size(), X.rows(), "give");
    require_lengths(y.size(), Z.rows(), "give instruments");
    if (X.cols() == 0) throw RankError("give: no regressors");
    if (Z.cols() < X.cols())
        throw OrderCondition("give: " + std::to_string(Z.cols()) + " instruments for " +
                             std::to_string(X.cols()) + " regressors");

    // P_Z X column by column; X'P_Z X assembled as the Gram matrix of the
    // projections (P_Z is idempotent, so this is the same matrix).
    std::vector<numerics::Vector> projected(X.cols());
    for (std::size_t j = 0; j < X.cols(); ++j)
        projected[j] = numerics::project(Z, X.column(j));
    const numerics::Matrix PX = numerics::Matrix::from_columns(projected);
    const numerics::CholeskyFactor chol(numerics::gram(PX));
    const numerics::Vector coef = chol.solve(numerics::matvec_transposed(PX, y));

    EstimateResult r;
    r.method = Method::give;
    r.sample.n = y.size();
    r.alpha_hat = coef[0];
    r.gamma_hat.assign(coef.begin() + 1, coef.end());
    r.sigma2_hat = residual_variance(
        y, X, coef, variance_divisor(y.size(), X.cols(), opt.dof_correction));
    r.se_alpha = std::sqrt(r.sigma2_hat * chol.inverse()(0, 0));
    attach_gaussian_ci(r, opt.level);
    return r;
}

numerics::Vector resolve_series(const std::string& name, const dataset::Dataset& d) {
    if (name.rfind("emissions_", 0) == 0 && name != "emissions_ff") {
        const auto source = dataset::lulcc_from_string(name.substr(10));
        return dataset::emissions(d, source).values;
    }
    if (name == "enso_detrended") return dataset::detrend(d.series("enso")).values;
    return d.series(name).values;
}

Design resolve(const ModelSpec& spec, const dataset::Dataset& d) {
    for (const auto& c : spec.covariates)
        if (c == spec.regressor)
            throw DomainError("spec: regressor '" + c + "' repeated as covariate");
    for (const auto& z : spec.instruments)
        if (z == spec.response)
            throw DomainError("spec: response '" + z + "' used as instrument");

    Design dz;
    dz.y = resolve_series(spec.response, d);
    dz.e = resolve_series(spec.regressor, d);
    if (spec.covariates.empty()) {
        dz.W = numerics::Matrix(dz.y.size(), 0);
    } else {
        std::vector<numerics::Vector> cols;
        cols.reserve(spec.covariates.size());
        for (const auto& c : spec.covariates) cols.push_back(resolve_series(c, d));
        dz.W = numerics::Matrix::from_columns(cols);
    }
    for (const auto& z : spec.instruments) dz.instruments.push_back(resolve_series(z, d));
    const auto range = d.year_range();
    dz.sample = {range.first, range.last, d.size()};
    return dz;
}

EstimateResult fit(Method method, const ModelSpec& spec, const dataset::Dataset& d,
                   const DemingConfig& deming_cfg, const FitOptions& opt) {
    const Design dz = resolve(spec, d);
    const std::size_t k = dz.W.cols();
    EstimateResult r;

    switch (method) {
        case Method::ols: {
            std::vector<numerics::Vector> cols{dz.e};
            for (std::size_t j = 0; j < k; ++j) cols.push_back(dz.W.column(j));
            r = ols(dz.y, numerics::Matrix::from_columns(cols), opt);
            break;
        }
        case Method::deming:
            r = k == 0 ? deming_univariate(dz.y, dz.e, deming_cfg)
                       : deming_multivariate(dz.y, dz.e, dz.W, deming_cfg);
            break;
        case Method::iv:
        case Method::give: {
            if (dz.instruments.empty())
                throw OrderCondition("iv: at least one instrument required");
            if (dz.instruments.size() == 1 && k == 0) {
                r = iv(dz.y, dz.e, dz.instruments[0], opt);
            } else {
                std::vector<numerics::Vector> xc{dz.e};
                std::vector<numerics::Vector> zc = dz.instruments;
                for (std::size_t j = 0; j < k; ++j) {
                    xc.push_back(dz.W.column(j));
                    zc.push_back(dz.W.column(j));
                }
                r = give(dz.y, numerics::Matrix::from_columns(xc),
                         numerics::Matrix::from_columns(zc), opt);
                if (dz.instruments.size() == 1) r.method = Method::iv;
                for (const auto& z : dz.instruments)
                    if (std::abs(pearson_corr(z, dz.e)) < 0.1) r.weak_instrument = true;
            }
            r.instruments = spec.instruments;
            break;
        }
    }
    r.sample = dz.sample;
    return r;
}

} // namespace airborne::estimators
