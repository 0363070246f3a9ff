#include <cmath>

#include <boost/math/statistics/univariate_statistics.hpp>

#include "lim/core/errors.hpp"
#include "lim/core/rng.hpp"
#include "lim/diagnostics/diagnostics.hpp"

namespace lim {

double mc_asymptotic_variance(const std::vector<double>& means, std::size_t T) {
    if (means.size() < 2) throw TooFewReplicates("need at least 2 replicate means");
    return double(T) * boost::math::statistics::sample_variance(means);
}

VarianceEstimate mc_asymptotic_variance_bootstrap(const std::vector<double>& means, std::size_t T,
                                                  std::size_t resamples, std::uint64_t seed) {
    VarianceEstimate e;
    e.value = mc_asymptotic_variance(means, T);
    RngStream rng(seed, 0x600757);
    std::vector<double> boot(resamples), draw(means.size());
    for (std::size_t b = 0; b < resamples; ++b) {
        for (auto& v : draw) v = means[std::size_t(rng.below(means.size()))];
        boot[b] = mc_asymptotic_variance(draw, T);
    }
    e.bootstrap_se = resamples > 1 ? std::sqrt(boost::math::statistics::sample_variance(boot)) : 0.0;
    return e;
}

} // namespace lim
