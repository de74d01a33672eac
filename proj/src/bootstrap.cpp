#include "airborne/bootstrap.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <optional>
#include <thread>
#include <utility>
#include <vector>

namespace airborne::bootstrap {

double bootstrap_se(const numerics::Vector& replicates) {
    const std::size_t b = replicates.size();
    if (b < 2) throw TooFewReplicates("need at least 2 replicates, got " + std::to_string(b));
    double mean = 0.0;
    for (double r : replicates) mean += r;
    mean /= static_cast<double>(b);
    double ss = 0.0;
    for (double r : replicates) ss += (r - mean) * (r - mean);
    return std::sqrt(ss / static_cast<double>(b - 1));
}

std::array<double, 2> percentile_ci(const numerics::Vector& replicates, double level) {
    if (replicates.size() < 2)
        throw TooFewReplicates("need at least 2 replicates, got " +
                               std::to_string(replicates.size()));
    if (!(level > 0.0 && level < 1.0))
        throw DomainError("confidence level must lie in (0, 1)");

    numerics::Vector sorted = replicates;
    std::sort(sorted.begin(), sorted.end());
    const auto quantile = [&sorted](double p) {
        const double h = p * static_cast<double>(sorted.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(h);
        if (lo + 1 == sorted.size()) return sorted.back();
        return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
    };
    const double tail = (1.0 - level) / 2.0;
    return {quantile(tail), quantile(1.0 - tail)};
}

numerics::Vector recentre(const numerics::Vector& residuals) {
    double mean = 0.0;
    for (double u : residuals) mean += u;
    mean /= static_cast<double>(residuals.size());
    numerics::Vector centred(residuals.size());
    for (std::size_t i = 0; i < residuals.size(); ++i) centred[i] = residuals[i] - mean;
    return centred;
}

numerics::Vector run_replicates(
    std::size_t B, std::uint64_t seed, unsigned threads,
    const std::function<double(std::size_t, rng::Stream&)>& replicate) {
    numerics::Vector out(B);
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(std::max(threads, 1u), std::max<std::size_t>(B, 1)));

    std::atomic<std::size_t> next{0};
    std::atomic<bool> aborted{false};
    std::mutex failure_mutex;
    std::optional<std::pair<std::size_t, std::string>> failure;

    const auto work = [&]() {
        while (!aborted.load(std::memory_order_relaxed)) {
            const std::size_t b = next.fetch_add(1, std::memory_order_relaxed);
            if (b >= B) return;
            rng::Stream stream(rng::derive_seed(seed, b));
            try {
                out[b] = replicate(b, stream);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure || b < failure->first) failure = {b, e.what()};
                aborted.store(true, std::memory_order_relaxed);
                return;
            }
        }
    };

    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (failure) throw ReplicateFailure(failure->first, failure->second);
    return out;
}

BootstrapResult residual_bootstrap(const estimators::ModelSpec& spec,
                                   const dataset::Dataset& data,
                                   const estimators::DemingConfig& cfg_est,
                                   const BootstrapConfig& cfg_boot, unsigned threads) {
    if (cfg_boot.B < 2)
        throw TooFewReplicates("B must be at least 2, got " + std::to_string(cfg_boot.B));
    if (!(cfg_boot.level > 0.0 && cfg_boot.level < 1.0))
        throw DomainError("confidence level must lie in (0, 1)");

    const estimators::Design dz = estimators::resolve(spec, data);
    const std::size_t T = dz.y.size();
    const std::size_t k = dz.W.cols();

    const estimators::EstimateResult fit =
        k == 0 ? estimators::deming_univariate(dz.y, dz.e, cfg_est)
               : estimators::deming_multivariate(dz.y, dz.e, dz.W, cfg_est);

    // Fitted response and recentred residual pool (steps i-ii).
    numerics::Vector fitted(T);
    for (std::size_t i = 0; i < T; ++i) {
        double f = fit.alpha_hat * dz.e[i];
        for (std::size_t j = 0; j < k; ++j) f += dz.W(i, j) * fit.gamma_hat[j];
        fitted[i] = f;
    }
    numerics::Vector residuals(T);
    for (std::size_t i = 0; i < T; ++i) residuals[i] = dz.y[i] - fitted[i];
    const numerics::Vector pool = recentre(residuals);

    // The annihilated regressor never changes across replicates.
    const numerics::Vector e_tilde = k == 0 ? dz.e : numerics::annihilate(dz.W, dz.e);

    const auto replicate = [&](std::size_t, rng::Stream& stream) {
        numerics::Vector gstar(T);
        for (std::size_t i = 0; i < T; ++i) gstar[i] = fitted[i] + pool[stream.next_index(T)];
        const numerics::Vector gstar_tilde =
            k == 0 ? std::move(gstar) : numerics::annihilate(dz.W, gstar);
        return estimators::deming_univariate(gstar_tilde, e_tilde, cfg_est).alpha_hat;
    };

    BootstrapResult result;
    result.config = cfg_boot;
    result.replicates = run_replicates(cfg_boot.B, cfg_boot.seed, threads, replicate);
    result.se = bootstrap_se(result.replicates);
    result.percentile_ci = percentile_ci(result.replicates, cfg_boot.level);
    result.paper_ci = {fit.alpha_hat - result.percentile_ci[1] * result.se,
                       fit.alpha_hat + result.percentile_ci[0] * result.se};
    return result;
}

} // namespace airborne::bootstrap
