#pragma once
#include "lim/model_zoo/continuous.hpp"

namespace lim {

// Printed: the weight equation as written. Prose: the edge branches swapped so
// that near x1 = 1 the large x2 move and the small x1 move dominate (and
// symmetrically near x2 = 1), as the accompanying text describes.
enum class SinusoidWeightRule { Printed, Prose };

struct SinusoidSpec {
    double sigma_small = 0.01;
    double sigma_large = 1.0;
    SinusoidWeightRule rule = SinusoidWeightRule::Printed;
};

// Symmetrized x1^100 (1 - cos(10 pi x2)) on the unit square, normalized.
double sinusoid_log_density(const Vec& x);
// Kernel order: x2 small, x2 large, x1 small, x1 large (truncated Gaussian MH).
SimplexWeights sinusoid_weights_at(const Vec& x, SinusoidWeightRule rule = SinusoidWeightRule::Printed);
ContinuousSetup sinusoid_setup(const SinusoidSpec& s = {});

// Truncated normal on [0,1] centred at `mean`: draw and log-density.
double truncated_normal_draw(double mean, double sigma, RngStream& rng);
double truncated_normal_logpdf(double v, double mean, double sigma);

} // namespace lim
