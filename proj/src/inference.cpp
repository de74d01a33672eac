#include "airborne/inference.hpp"

#include <algorithm>
#include <cmath>

#include "airborne/numerics.hpp"

namespace airborne::inference {

std::array<double, 2> gaussian_ci(double estimate, double se, double level) {
    if (se < 0.0) throw DomainError("gaussian_ci: negative standard error");
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence level must lie in (0, 1)");
    const double z = numerics::std_normal_quantile(1.0 - (1.0 - level) / 2.0);
    return {estimate - z * se, estimate + z * se};
}

ComparisonTest hausman_test(const estimators::EstimateResult& ols_res,
                            const estimators::EstimateResult& iv_res) {
    if (ols_res.sample.n != iv_res.sample.n || ols_res.sample.from != iv_res.sample.from ||
        ols_res.sample.to != iv_res.sample.to)
        throw SampleMismatch("hausman: estimates cover different samples");
    if (!ols_res.se_alpha || !iv_res.se_alpha)
        throw DomainError("hausman: both results need a standard error");

    constexpr double eps = 1e-12;
    const double diff = iv_res.alpha_hat - ols_res.alpha_hat;
    const double var_gap = *iv_res.se_alpha * *iv_res.se_alpha -
                           *ols_res.se_alpha * *ols_res.se_alpha;

    ComparisonTest test;
    test.estimate_a = ols_res.alpha_hat;
    test.estimate_b = iv_res.alpha_hat;
    test.statistic = diff * diff / std::max(var_gap, eps);
    test.p_value = 1.0 - numerics::chi2_cdf_1df(test.statistic);
    return test;
}

} // namespace airborne::inference
