#include "doctest.h"

#include <cmath>

#include "airborne/estimators.hpp"
#include "airborne/inference.hpp"
#include "airborne/simulate.hpp"

using namespace airborne;
using estimators::EstimateResult;
using numerics::Matrix;
using numerics::Vector;

namespace {

EstimateResult with_se(double alpha, double se, int from, int to) {
    EstimateResult r;
    r.alpha_hat = alpha;
    r.se_alpha = se;
    r.sample = {from, to, static_cast<std::size_t>(to - from + 1)};
    return r;
}

} // namespace

TEST_CASE("gaussian_ci reference band") {
    auto band = inference::gaussian_ci(0.4478, 0.0142, 0.95);
    CHECK(band[0] == doctest::Approx(0.4199).epsilon(2.5e-4));
    CHECK(band[1] == doctest::Approx(0.4757).epsilon(2.5e-4));

    auto point = inference::gaussian_ci(1.23, 0.0, 0.8);
    CHECK(point[0] == 1.23);
    CHECK(point[1] == 1.23);

    auto unit = inference::gaussian_ci(0.0, 1.0, 0.95);
    CHECK(unit[0] == doctest::Approx(-1.9599639845400542).epsilon(1e-10));
    CHECK(unit[1] == doctest::Approx(1.9599639845400542).epsilon(1e-10));

    // width is linear in the standard error
    auto w1 = inference::gaussian_ci(0.0, 0.5, 0.9);
    auto w2 = inference::gaussian_ci(0.0, 1.5, 0.9);
    CHECK((w2[1] - w2[0]) == doctest::Approx(3.0 * (w1[1] - w1[0])).epsilon(1e-12));

    CHECK_THROWS_AS(inference::gaussian_ci(0.0, -0.1, 0.95), DomainError);
    CHECK_THROWS_AS(inference::gaussian_ci(0.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(inference::gaussian_ci(0.0, 1.0, 1.0), DomainError);
}

TEST_CASE("hausman test on identical estimates is a clean null") {
    EstimateResult a = with_se(0.45, 0.014, 1959, 2022);
    inference::ComparisonTest t = inference::hausman_test(a, a);
    CHECK(t.statistic == doctest::Approx(0.0));
    CHECK(t.p_value == doctest::Approx(1.0));
    CHECK(t.method == "hausman");
    CHECK(t.estimate_a == 0.45);
    CHECK(t.estimate_b == 0.45);
}

TEST_CASE("hausman statistic is symmetric in the sign of the gap") {
    EstimateResult o = with_se(0.45, 0.010, 1959, 2022);
    EstimateResult up = with_se(0.47, 0.020, 1959, 2022);
    EstimateResult down = with_se(0.43, 0.020, 1959, 2022);
    inference::ComparisonTest tu = inference::hausman_test(o, up);
    inference::ComparisonTest td = inference::hausman_test(o, down);
    CHECK(tu.statistic == doctest::Approx(td.statistic).epsilon(1e-14));
    CHECK(tu.p_value == doctest::Approx(td.p_value).epsilon(1e-14));

    // H = gap^2 / (V_iv − V_ols) against the hand-computed value
    double H = 0.02 * 0.02 / (0.02 * 0.02 - 0.01 * 0.01);
    CHECK(tu.statistic == doctest::Approx(H).epsilon(1e-12));
    CHECK(tu.p_value == doctest::Approx(1.0 - numerics::chi2_cdf_1df(H)).epsilon(1e-14));
}

TEST_CASE("hausman p-value falls as the gap grows") {
    EstimateResult o = with_se(0.45, 0.010, 1959, 2022);
    double last_p = 1.0;
    for (double gap : {0.005, 0.01, 0.02, 0.04, 0.08}) {
        inference::ComparisonTest t = inference::hausman_test(o, with_se(0.45 + gap, 0.02, 1959, 2022));
        CHECK(t.p_value < last_p);
        last_p = t.p_value;
    }
}

TEST_CASE("hausman guards the variance difference from below") {
    // IV nominally more precise than OLS: the epsilon floor keeps H finite
    EstimateResult o = with_se(0.45, 0.020, 1959, 2022);
    EstimateResult i = with_se(0.46, 0.010, 1959, 2022);
    inference::ComparisonTest t = inference::hausman_test(o, i);
    CHECK(std::isfinite(t.statistic));
    CHECK(t.statistic > 0.0);
    CHECK(t.p_value >= 0.0);
    CHECK(t.p_value <= 1e-6); // gap^2 / 1e-12 is enormous
}

TEST_CASE("hausman validation") {
    EstimateResult a = with_se(0.45, 0.014, 1959, 2022);
    EstimateResult b = with_se(0.46, 0.020, 1959, 2021);
    CHECK_THROWS_AS(inference::hausman_test(a, b), SampleMismatch);

    EstimateResult no_se = a;
    no_se.se_alpha.reset();
    CHECK_THROWS_AS(inference::hausman_test(a, no_se), DomainError);
    CHECK_THROWS_AS(inference::hausman_test(no_se, a), DomainError);
}

TEST_CASE("hausman detects attenuation on a large synthetic sample") {
    simulate::SyntheticConfig cfg;
    cfg.T = 10000;
    cfg.alpha_true = 0.5;
    cfg.sigma_u = 0.3;
    cfg.sigma_eta = 1.0;   // heavy measurement error on e1
    cfg.sigma_kappa = 1.0; // e2 is noisy too but uncorrelated with eta
    cfg.ramp_base = 2.0;
    cfg.ramp_slope = 0.0; // constant e* keeps the attenuation away from 1
    cfg.seed = 20240801;
    simulate::SyntheticData s = simulate::generate(cfg);

    EstimateResult r_ols = estimators::ols(s.g, Matrix::from_columns({s.e1}));
    EstimateResult r_iv = estimators::iv(s.g, s.e1, s.e2);
    inference::ComparisonTest t = inference::hausman_test(r_ols, r_iv);
    CHECK(r_ols.alpha_hat < r_iv.alpha_hat); // attenuation pulls OLS down
    CHECK(t.p_value < 0.05);

    // same exercise without measurement error: no rejection at any plausible level
    simulate::SyntheticConfig clean = cfg;
    clean.sigma_eta = 0.0;
    clean.sigma_kappa = 0.0;
    simulate::SyntheticData sc = simulate::generate(clean);
    EstimateResult c_ols = estimators::ols(sc.g, Matrix::from_columns({sc.e1}));
    EstimateResult c_iv = estimators::iv(sc.g, sc.e1, sc.e2);
    inference::ComparisonTest tc = inference::hausman_test(c_ols, c_iv);
    CHECK(tc.p_value > 0.95); // e1 = e2 = e*, the estimators coincide
}
