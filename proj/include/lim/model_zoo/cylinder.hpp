#pragma once
#include <cstddef>
#include <vector>

#include "lim/model_zoo/continuous.hpp"
#include "lim/samplers/steps.hpp"

namespace lim {

// Two cylinders of radius R (height l) and r (height L) joined by a cone,
// with Laplace(lambda) noise on each coordinate.
struct CylinderSpec {
    double R = 1.0;
    double r = 0.05;
    double lambda = 100.0;
    double eps = 0.1;    // probability of a random-walk proposal
    double sigma = 0.1;  // random-walk scale
    int n = 12;          // control points
    double short_height() const { return (R * R - r * r) / (2 * R); }
    double long_height() const { return (R * R - r * r) / (2 * r); }
    double profile_area() const { return 1.5 * (R * R - r * r); }
};

void validate(const CylinderSpec& s);

// Control constants: mu_j on the axis, nu_j the matching radius.
struct ControlPoints {
    std::vector<double> mu, nu;
};
ControlPoints control_points(const CylinderSpec& s);

// Upper end of the axial section of Z at radius rho.
double axial_extent(const CylinderSpec& s, double rho);

// Log-density of uniform(Z) convolved with the noise, by adaptive quadrature.
double cylinder_log_density(const CylinderSpec& s, const Vec& x);

SimplexWeights cylinder_axial_weights(const CylinderSpec& s, const ControlPoints& cp, const Vec& x);   // move 1
SimplexWeights cylinder_radial_weights(const CylinderSpec& s, const ControlPoints& cp, const Vec& x);  // move 2

// Proposal log-densities of kernel j for each move (marginal over the moved block).
double axial_proposal_logpdf(const CylinderSpec& s, const ControlPoints& cp, std::size_t j, double from, double to);
double radial_proposal_logpdf(const CylinderSpec& s, const ControlPoints& cp, std::size_t j, double rho_from,
                              double rho_to);

struct MoveFamily {
    KernelCollection<Vec> kernels;
    WeightFunction<Vec> informed;
    SimplexWeights uninformed;
};

struct CylinderSetup {
    CylinderSpec spec;
    ControlPoints cp;
    MoveFamily axial, radial;  // move 1 updates x1, move 2 updates (x2, x3)
    std::function<double(const Vec&)> log_density;
    std::function<Vec(RngStream&)> iid;
    std::function<Vec(RngStream&)> start;
    std::vector<TestFunction> tests;
};

CylinderSetup cylinder_setup(const CylinderSpec& s);

// Strict alternation move 1, move 2. Hybrid = uniform kernel choice (RSGS).
StepFn<Vec> cylinder_step(const CylinderSetup& c, const VariantSpec& v);

} // namespace lim
