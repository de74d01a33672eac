#pragma once

#include <array>
#include <cstdint>
#include <functional>

#include "airborne/dataset.hpp"
#include "airborne/estimators.hpp"
#include "airborne/numerics.hpp"
#include "airborne/rng.hpp"

namespace airborne::bootstrap {

struct BootstrapConfig {
    std::size_t B = 9999;
    std::uint64_t seed = 20220101;
    double level = 0.95;
};

struct BootstrapResult {
    numerics::Vector replicates;           // ordered by replicate index
    double se = 0.0;                       // B−1 divisor
    std::array<double, 2> percentile_ci{}; // plain percentile band (default)
    std::array<double, 2> paper_ci{};      // the printed interval formula
    BootstrapConfig config;
};

/// Sample standard deviation with B−1 divisor; TooFewReplicates below 2.
double bootstrap_se(const numerics::Vector& replicates);

/// Empirical [l/2, 1−l/2] percentile band, linear interpolation between
/// order statistics (type 7).
std::array<double, 2> percentile_ci(const numerics::Vector& replicates, double level);

/// Residuals shifted to mean zero, the resampling pool of step i.
numerics::Vector recentre(const numerics::Vector& residuals);

/// Deterministic parallel map over replicate indices. Replicate b always
/// draws from the stream derived from (seed, b) and results are assembled
/// by index, so any thread count gives bit-identical output. An exception
/// inside a replicate aborts the run as ReplicateFailure(b).
numerics::Vector run_replicates(std::size_t B, std::uint64_t seed, unsigned threads,
                                const std::function<double(std::size_t, rng::Stream&)>& replicate);

/// Model-based residual bootstrap of the Deming fit: fit once, recentre the
/// residuals, then B times draw T of them with replacement, rebuild the
/// response with E and W held fixed, and re-estimate. percentile_ci is the
/// percentile band; paper_ci renders the printed formula
/// [a − q*(1−l/2)·se, a + q*(l/2)·se] with q* the replicate percentiles.
BootstrapResult residual_bootstrap(const estimators::ModelSpec& spec,
                                   const dataset::Dataset& data,
                                   const estimators::DemingConfig& cfg_est,
                                   const BootstrapConfig& cfg_boot, unsigned threads = 1);

} // namespace airborne::bootstrap
