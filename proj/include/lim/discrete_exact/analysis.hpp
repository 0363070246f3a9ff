#pragma once
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "lim/discrete_exact/transition_matrix.hpp"

namespace lim {

// max_{x,y} |pi(x)P(x,y) - pi(y)P(y,x)|
double check_detailed_balance(const TransitionMatrix& P, const Eigen::VectorXd& pi);
double check_detailed_balance(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi);

double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

// [TV(mu0 P^t, pi) for t = 0..T]
std::vector<double> tv_curve(const Eigen::VectorXd& mu0, const TransitionMatrix& P, const Eigen::VectorXd& pi,
                             std::size_t T);

// Smallest t >= 0 with TV(mu0 P^t, pi) < eps, plus `count_from`. Throws NoConvergence past horizon.
std::size_t mixing_time(const Eigen::VectorXd& mu0, const TransitionMatrix& P, const Eigen::VectorXd& pi, double eps,
                        std::size_t horizon = 1000000, std::size_t count_from = 0);

// Left null vector of I - P normalized to a distribution (dense LU).
Eigen::VectorXd stationary_distribution(const TransitionMatrix& P);
Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P);

inline constexpr double kUnitEigTol = 1e-9;

// Eigenvalue moduli. Reversible chains use the symmetrized form D^1/2 P D^-1/2.
std::vector<double> spectrum_moduli(const Eigen::MatrixXd& P);
std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& P);
// 1 - max |lambda| with exactly one eigenvalue near 1 removed. Throws NotStochastic.
double spectral_gap(const Eigen::MatrixXd& P, double unit_tol = kUnitEigTol);
double spectral_gap(const TransitionMatrix& P, double unit_tol = kUnitEigTol);

// 2<f,g>_pi - <f,f>_pi with (I - P + 1 pi^T) g = f centered. Throws SingularSystem.
double exact_asymptotic_variance(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, const Eigen::VectorXd& f);
double exact_asymptotic_variance(const TransitionMatrix& P, const Eigen::VectorXd& pi, const Eigen::VectorXd& f);

// Expected time to hit `targets` from each state (0 on targets). Throws Unreachable.
Eigen::VectorXd expected_hitting_times(const Eigen::MatrixXd& P, const std::vector<std::size_t>& targets);

} // namespace lim
