#pragma once
#include <cstddef>

#include "lim/core/target.hpp"
#include "lim/samplers/kernels.hpp"

namespace lim {

// One exact full-conditional Gibbs kernel per coordinate.
KernelCollection<std::size_t> gibbs_collection(const DiscreteTarget& t);

// One MH kernel per coordinate proposing a uniform value of that coordinate
// (the current value included).
KernelCollection<std::size_t> mh_coordinate_collection(const DiscreteTarget& t);

} // namespace lim
