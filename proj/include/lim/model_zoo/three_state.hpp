#pragma once
#include <cstddef>

#include <Eigen/Dense>

#include "lim/core/simplex.hpp"
#include "lim/core/target.hpp"
#include "lim/samplers/kernels.hpp"
#include "lim/samplers/weights.hpp"

namespace lim {

// pi = ((1-p)/2, (1-p)/2, p) on three states; kernel 0 proposes the smallest
// other state, kernel 1 the largest.
struct ThreeStateSetup {
    DiscreteTarget target;
    KernelCollection<std::size_t> kernels;
    WeightFunction<std::size_t> informed;
    SimplexWeights uninformed;
};

ThreeStateSetup three_state_setup(double p);

// Closed-form matrices and spectral gaps as printed for the uninformed and
// the locally informed (Algorithm 2) chains.
Eigen::Matrix3d three_state_uninformed_closed(double p);
Eigen::Matrix3d three_state_informed_closed(double p);
double three_state_gap_closed(double p);
double three_state_gap_informed_closed(double p);

} // namespace lim
