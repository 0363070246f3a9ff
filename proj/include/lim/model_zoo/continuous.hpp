#pragma once
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lim/core/rng.hpp"
#include "lim/core/simplex.hpp"
#include "lim/samplers/kernels.hpp"
#include "lim/samplers/weights.hpp"

namespace lim {

using Vec = Eigen::VectorXd;

struct TestFunction {
    std::string name;
    std::function<double(const Vec&)> f;
};

// Everything an experiment needs for one continuous example.
struct ContinuousSetup {
    KernelCollection<Vec> kernels;
    WeightFunction<Vec> informed;
    SimplexWeights uninformed;
    std::function<double(const Vec&)> log_density;  // unnormalized
    std::function<Vec(RngStream&)> iid;              // exact draw from the target
    std::function<Vec(RngStream&)> start;            // transient-regime initial law
    std::vector<TestFunction> tests;
};

// Single-coordinate Gaussian random walk MH kernel.
Kernel<Vec> gaussian_rw_kernel(std::string name, Eigen::Index coord, double sigma,
                               std::function<double(const Vec&)> log_target);

} // namespace lim
