#pragma once
#include <cstddef>
#include <vector>

#include "lim/core/space.hpp"

namespace lim {

// Probability mass function on an enumerated space, with an optional mask
// marking the filament Z.
class DiscreteTarget {
  public:
    DiscreteTarget() = default;
    // probs must be >= 0 and sum to 1 within 1e-12; mask empty or one entry per state.
    DiscreteTarget(DiscreteSpace space, std::vector<double> probs, std::vector<bool> mask = {});
    // Normalizes exp(logw) with log-sum-exp; -inf entries get mass 0.
    static DiscreteTarget from_log_weights(DiscreteSpace space, const std::vector<double>& logw,
                                           std::vector<bool> mask = {});

    const DiscreteSpace& space() const { return space_; }
    std::size_t size() const { return probs_.size(); }
    double prob(std::size_t i) const { return probs_[i]; }
    double log_prob(std::size_t i) const { return logp_[i]; }
    const std::vector<double>& probs() const { return probs_; }
    bool in_filament(std::size_t i) const { return !mask_.empty() && mask_[i]; }
    const std::vector<bool>& mask() const { return mask_; }
    double filament_mass() const;
    // states with positive mass, increasing index order
    std::vector<std::size_t> support() const;

  private:
    DiscreteSpace space_;
    std::vector<double> probs_, logp_;
    std::vector<bool> mask_;
};

} // namespace lim
