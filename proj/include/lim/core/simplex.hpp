#pragma once
#include <cstddef>
#include <vector>

#include "lim/core/rng.hpp"

namespace lim {

// A point of the probability simplex: selection probabilities over n kernels.
class SimplexWeights {
  public:
    SimplexWeights() = default;
    // Validates; throws InvalidArgument unless entries are >= 0 and sum to 1 (1e-12).
    explicit SimplexWeights(std::vector<double> w);

    static SimplexWeights uniform(std::size_t n);
    static SimplexWeights delta(std::size_t n, std::size_t i);

    std::size_t size() const { return w_.size(); }
    double operator[](std::size_t i) const { return w_[i]; }
    const std::vector<double>& values() const { return w_; }

  private:
    std::vector<double> w_;
};

// Throws AllZero / NonFinite on degenerate input.
SimplexWeights simplex_normalize(const std::vector<double>& raw);

// Inverse-CDF draw; only strictly positive entries can be returned.
std::size_t sample_categorical(const SimplexWeights& w, RngStream& rng);
std::size_t sample_categorical(const std::vector<double>& probs, RngStream& rng);

} // namespace lim
