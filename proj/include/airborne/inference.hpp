#pragma once

#include <array>
#include <string>

#include "airborne/estimators.hpp"

namespace airborne::inference {

struct ComparisonTest {
    double estimate_a = 0.0; // OLS side
    double estimate_b = 0.0; // IV side
    double statistic = 0.0;  // chi-square(1) form, ≥ 0
    double p_value = 1.0;
    std::string method = "hausman";
};

/// estimate ± z(1−(1−level)/2)·se; DomainError on bad level or negative se.
std::array<double, 2> gaussian_ci(double estimate, double se, double level);

/// Classical Hausman comparison of an efficient-under-null estimator (OLS)
/// against a consistent one (IV): H = (a_iv − a_ols)² / max(V_iv − V_ols, ε)
/// with ε = 1e-12, p from chi-square with 1 degree of freedom. Both results
/// must carry a standard error and cover the same sample.
ComparisonTest hausman_test(const estimators::EstimateResult& ols_res,
                            const estimators::EstimateResult& iv_res);

} // namespace airborne::inference
