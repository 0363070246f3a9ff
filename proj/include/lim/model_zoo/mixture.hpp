#pragma once
#include <array>

#include "lim/model_zoo/continuous.hpp"

namespace lim {

struct MixtureSpec {
    double theta = 100.0;
    double eps = 0.01;
    double sigma_large = -1.0;  // negative means sqrt(theta)
    double sigma_small = 1.0;
};

void validate(const MixtureSpec& s);
std::array<Vec, 3> mixture_means(double theta);
double mixture_log_density(const MixtureSpec& s, const Vec& x);
// Component responsibilities xi_k(x).
std::array<double, 3> mixture_responsibilities(const MixtureSpec& s, const Vec& x);
// Kernel index = scale_row * 3 + direction; row 0 uses sigma_large.
SimplexWeights mixture_weights_at(const MixtureSpec& s, const Vec& x);
ContinuousSetup mixture_setup(const MixtureSpec& s);

} // namespace lim
