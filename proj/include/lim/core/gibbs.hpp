#pragma once
#include <cstddef>
#include <utility>
#include <vector>

#include "lim/core/rng.hpp"
#include "lim/core/target.hpp"

namespace lim {

// Exact full conditional of coordinate i at state x: (state, probability) pairs
// over the slice, zero-mass entries dropped. Throws ZeroSlice.
std::vector<std::pair<std::size_t, double>> full_conditional(const DiscreteTarget& t, std::size_t x,
                                                             std::size_t i);

std::size_t gibbs_full_conditional_step(const DiscreteTarget& t, std::size_t x, std::size_t i,
                                        RngStream& rng);

} // namespace lim
