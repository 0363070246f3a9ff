#pragma once
#include <cstddef>

#include <Eigen/Dense>

#include "lim/core/rng.hpp"

namespace lim {

// Maps between a d-edge filament of edge length n (states ordered V1, E1
// interior, V2, ..., V_{d+1}; (n-1)d+1 of them) and its folded space of
// 2d+1 states (vertex k -> 2k, edge k -> 2k+1, 0-based).
struct FoldingMaps {
    std::size_t d = 0, n = 0;
    Eigen::MatrixXd gamma;  // (2d+1) x ((n-1)d+1): averages over an edge
    Eigen::MatrixXd omega;  // ((n-1)d+1) x (2d+1): sends a state to its folded class
};

FoldingMaps build_folding_maps(std::size_t d, std::size_t n);

struct FoldedPair {
    Eigen::MatrixXd folded;    // Gamma P Omega
    Eigen::MatrixXd unfolded;  // Omega Q Gamma
};
FoldedPair fold_unfold(const Eigen::MatrixXd& P_filament, const FoldingMaps& maps);

// Folded chain written directly from its edge/vertex rates: RSGS
// (alpha = 1/(dn), beta = (1-2/n)/d) or the locally informed chain
// (alpha = 1/(2n), alpha_end = 1/n, beta = (n-2)/(2n), beta_end = (n-2)/n).
Eigen::MatrixXd folded_rate_matrix(std::size_t d, std::size_t n, bool informed);

// Closed-form expected hitting times of the middle vertex from the first one.
double hitting_time_rsgs(std::size_t d, std::size_t n);
double hitting_time_informed(std::size_t d, std::size_t n);

// Reflection coupling on a folded chain: Y from state 0 uses U, Y' from
// state 2d uses 1-U, both by inverse CDF. Returns the meeting time; Timeout
// past max_t.
std::size_t reflection_coupling(const Eigen::MatrixXd& Q, std::size_t d, RngStream& rng, std::size_t max_t);

// Positions of both coupled chains after T steps (moving together once met).
std::pair<std::size_t, std::size_t> reflection_coupling_at(const Eigen::MatrixXd& Q, std::size_t d, RngStream& rng,
                                                           std::size_t T);

struct LemmaReport {
    std::size_t d = 0, n = 0;
    double lambda = 0;
    double gamma_folded_rsgs = 0, gamma_folded_delayed = 0;
    double gap_folded_dev = 0;        // |gamma(Q) - gamma(Q*_lambda)|
    double gap_unfold_rsgs_dev = 0;   // |gamma(Pbar) - gamma(Q)|
    double gap_unfold_delayed_dev = 0;// |gamma(Pbar*_lambda) - gamma(Q*_lambda)|
    double gap_filament_dev = 0;      // |gamma(P) - gamma(P*_lambda)| on the filament itself
    double gamma_omega_dev = 0;       // max |Gamma Omega - I|
    double spectrum_union_dev = 0;    // Sp(Pbar) vs Sp(Q) + {0}^(n-3)d, both chains
    double hit_rsgs = 0, hit_informed = 0;  // from the folded matrices
    double hit_rsgs_dev = 0, hit_informed_dev = 0;  // against the closed forms
    double max_deviation() const;
};

// P_rsgs and P_informed are the filament-restricted chains in filament order; d even.
LemmaReport verify_lemma_suite(const Eigen::MatrixXd& P_rsgs, const Eigen::MatrixXd& P_informed, std::size_t d,
                               std::size_t n);

// Greedy nearest matching distance between Sp(A) and Sp(B) plus `zeros` extra zeros in B.
double spectrum_union_deviation(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, std::size_t zeros);

} // namespace lim
