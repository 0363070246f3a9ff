#pragma once
#include <cstddef>

#include "lim/core/simplex.hpp"
#include "lim/core/target.hpp"
#include "lim/samplers/kernels.hpp"
#include "lim/samplers/weights.hpp"

namespace lim {

// {1,2,3}^d with mass 1 on two hyperplanes (first d-2 coordinates at 1, or
// last d-2 coordinates at 1) and `background` elsewhere.
struct CrossSpec {
    int d = 5;
    double background = -1.0;  // negative means 100^-d
    // For d = 2 read the hyperplanes with 1-based ranges 1:(d-2) = (1,0) and
    // 3:d = (3,2): the first selects x1 = 1, the second nothing.
    bool short_range_rule = false;
};

struct CrossSetup {
    DiscreteTarget target;
    KernelCollection<std::size_t> kernels;
    WeightFunction<std::size_t> informed;
    SimplexWeights uninformed;
    std::size_t start = 0;  // the all-ones state
};

CrossSetup cross_setup(const CrossSpec& s);

} // namespace lim
