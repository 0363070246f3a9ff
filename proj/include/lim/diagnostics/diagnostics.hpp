#pragma once
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace lim {

// Rows are points.
using SampleBatch = Eigen::MatrixXd;

enum class TiePolicy { Error, Jitter };

struct KlOptions {
    std::size_t k = 1;
    TiePolicy ties = TiePolicy::Error;
    std::uint64_t jitter_seed = 0x5eed;
};

// k-NN divergence estimate of KL(p || q) (Wang, Kulkarni and Verdu), brute force.
double knn_kl(const SampleBatch& p, const SampleBatch& q, const KlOptions& opt = {});

struct VarianceEstimate {
    double value = 0;
    double bootstrap_se = 0;
};

// T times the unbiased variance of the replicate means.
double mc_asymptotic_variance(const std::vector<double>& means, std::size_t T);
VarianceEstimate mc_asymptotic_variance_bootstrap(const std::vector<double>& means, std::size_t T,
                                                  std::size_t resamples = 1000, std::uint64_t seed = 7);

// Half L1 distance between empirical frequencies of `samples` (state indices) and pi.
double empirical_tv(const std::vector<std::size_t>& samples, const std::vector<double>& pi);

} // namespace lim
