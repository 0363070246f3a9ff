#include "lim/discrete_exact/folding.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "lim/core/errors.hpp"
#include "lim/discrete_exact/analysis.hpp"

namespace lim {

FoldingMaps build_folding_maps(std::size_t d, std::size_t n) {
    if (d < 2 || n < 3) throw InvalidArgument("folding needs d >= 2 and n >= 3");
    const std::size_t N = (n - 1) * d + 1, K = 2 * d + 1;
    FoldingMaps m;
    m.d = d;
    m.n = n;
    m.gamma = Eigen::MatrixXd::Zero(Eigen::Index(K), Eigen::Index(N));
    m.omega = Eigen::MatrixXd::Zero(Eigen::Index(N), Eigen::Index(K));
    for (std::size_t i = 0; i < N; ++i) {
        bool vertex = i % (n - 1) == 0;
        std::size_t k = vertex ? 2 * (i / (n - 1)) : 2 * (i / (n - 1)) + 1;
        m.omega(Eigen::Index(i), Eigen::Index(k)) = 1.0;
        m.gamma(Eigen::Index(k), Eigen::Index(i)) = vertex ? 1.0 : 1.0 / double(n - 2);
    }
    return m;
}

FoldedPair fold_unfold(const Eigen::MatrixXd& P, const FoldingMaps& maps) {
    if (P.rows() != maps.omega.rows() || P.cols() != maps.omega.rows())
        throw DimensionMismatch("filament matrix has " + std::to_string(P.rows()) + " states, maps expect " +
                                std::to_string(maps.omega.rows()));
    FoldedPair out;
    out.folded = maps.gamma * P * maps.omega;
    out.unfolded = maps.omega * out.folded * maps.gamma;
    return out;
}

Eigen::MatrixXd folded_rate_matrix(std::size_t d, std::size_t n, bool informed) {
    if (d < 2 || n < 3) throw InvalidArgument("folded chain needs d >= 2 and n >= 3");
    const double dn = double(d), nn = double(n);
    double a, a_end, b, b_end;
    if (informed) {
        a = 1.0 / (2.0 * nn);
        a_end = 1.0 / nn;
        b = (nn - 2.0) / (2.0 * nn);
        b_end = (nn - 2.0) / nn;
    } else {
        a = a_end = 1.0 / (dn * nn);
        b = b_end = (1.0 - 2.0 / nn) / dn;
    }
    const Eigen::Index K = Eigen::Index(2 * d + 1), last = K - 1;
    Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(K, K);
    for (Eigen::Index s = 0; s < K; ++s) {
        if (s % 2 == 0) {
            bool end = s == 0 || s == last;
            if (s > 0) {
                Q(s, s - 1) = end ? b_end : b;
                Q(s, s - 2) = a;
            }
            if (s < last) {
                Q(s, s + 1) = end ? b_end : b;
                Q(s, s + 2) = a;
            }
        } else {
            Q(s, s - 1) = s - 1 == 0 ? a_end : a;
            Q(s, s + 1) = s + 1 == last ? a_end : a;
        }
        Q(s, s) = 1.0 - Q.row(s).sum();
    }
    return Q;
}

double hitting_time_rsgs(std::size_t d, std::size_t n) {
    double dd = double(d);
    return double(n - 1) * dd * dd * dd / 4.0 + dd * dd / 2.0;
}

double hitting_time_informed(std::size_t d, std::size_t n) {
    double dd = double(d);
    return double(n - 1) * dd * dd / 2.0 + dd;
}

namespace {
std::size_t inverse_cdf(const Eigen::MatrixXd& Q, std::size_t from, double u) {
    const Eigen::Index K = Q.cols();
    double c = 0.0;
    Eigen::Index lastpos = 0;
    for (Eigen::Index j = 0; j < K; ++j) {
        double q = Q(Eigen::Index(from), j);
        if (q <= 0.0) continue;
        c += q;
        lastpos = j;
        if (u < c) return std::size_t(j);
    }
    return std::size_t(lastpos);
}
} // namespace

std::pair<std::size_t, std::size_t> reflection_coupling_at(const Eigen::MatrixXd& Q, std::size_t d, RngStream& rng,
                                                           std::size_t T) {
    if (Q.rows() != Eigen::Index(2 * d + 1)) throw DimensionMismatch("folded matrix must have 2d+1 states");
    std::size_t y = 0, yp = 2 * d;
    for (std::size_t t = 0; t < T; ++t) {
        double u = rng.uniform_pos();
        if (y == yp) {
            y = yp = inverse_cdf(Q, y, u);
        } else {
            y = inverse_cdf(Q, y, u);
            yp = inverse_cdf(Q, yp, 1.0 - u);
        }
    }
    return {y, yp};
}

std::size_t reflection_coupling(const Eigen::MatrixXd& Q, std::size_t d, RngStream& rng, std::size_t max_t) {
    if (Q.rows() != Eigen::Index(2 * d + 1)) throw DimensionMismatch("folded matrix must have 2d+1 states");
    std::size_t y = 0, yp = 2 * d, t = 0;
    while (y != yp) {
        if (t >= max_t) throw Timeout("chains did not meet within " + std::to_string(max_t) + " steps");
        double u = rng.uniform_pos();
        y = inverse_cdf(Q, y, u);
        yp = inverse_cdf(Q, yp, 1.0 - u);
        ++t;
    }
    return t;
}

double spectrum_union_deviation(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B, std::size_t zeros) {
    std::vector<std::complex<double>> a = spectrum(A), b = spectrum(B);
    b.insert(b.end(), zeros, {0.0, 0.0});
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    std::vector<char> used(b.size(), 0);
    double worst = 0.0;
    // match the largest moduli first so clusters near 0 take what is left
    std::sort(a.begin(), a.end(), [](auto x, auto y) { return std::abs(x) > std::abs(y); });
    for (auto z : a) {
        std::size_t best = b.size();
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(z - b[j]) < bd) {
                bd = std::abs(z - b[j]);
                best = j;
            }
        used[best] = 1;
        worst = std::max(worst, bd);
    }
    return worst;
}

double LemmaReport::max_deviation() const {
    return std::max({gap_folded_dev, gap_unfold_rsgs_dev, gap_unfold_delayed_dev, gap_filament_dev, gamma_omega_dev,
                     spectrum_union_dev, hit_rsgs_dev, hit_informed_dev});
}

LemmaReport verify_lemma_suite(const Eigen::MatrixXd& P, const Eigen::MatrixXd& Pinf, std::size_t d, std::size_t n) {
    if (d % 2 != 0) throw InvalidArgument("the lemma suite needs an even d");
    FoldingMaps maps = build_folding_maps(d, n);
    LemmaReport r;
    r.d = d;
    r.n = n;
    r.lambda = 2.0 / double(d);
    const Eigen::Index N = P.rows();
    Eigen::MatrixXd Pdel = r.lambda * Pinf + (1.0 - r.lambda) * Eigen::MatrixXd::Identity(N, N);
    FoldedPair f = fold_unfold(P, maps);
    FoldedPair fd = fold_unfold(Pdel, maps);
    r.gamma_folded_rsgs = spectral_gap(f.folded);
    r.gamma_folded_delayed = spectral_gap(fd.folded);
    r.gap_folded_dev = std::abs(r.gamma_folded_rsgs - r.gamma_folded_delayed);
    r.gap_unfold_rsgs_dev = std::abs(spectral_gap(f.unfolded) - r.gamma_folded_rsgs);
    r.gap_unfold_delayed_dev = std::abs(spectral_gap(fd.unfolded) - r.gamma_folded_delayed);
    r.gap_filament_dev = std::abs(spectral_gap(P) - spectral_gap(Pdel));
    r.gamma_omega_dev =
        (maps.gamma * maps.omega - Eigen::MatrixXd::Identity(Eigen::Index(2 * d + 1), Eigen::Index(2 * d + 1)))
            .cwiseAbs()
            .maxCoeff();
    std::size_t zeros = (n - 3) * d;
    r.spectrum_union_dev = std::max(spectrum_union_deviation(f.unfolded, f.folded, zeros),
                                    spectrum_union_deviation(fd.unfolded, fd.folded, zeros));
    FoldedPair fi = fold_unfold(Pinf, maps);
    r.hit_rsgs = expected_hitting_times(f.folded, {d})(0);
    r.hit_informed = expected_hitting_times(fi.folded, {d})(0);
    r.hit_rsgs_dev = std::abs(r.hit_rsgs - hitting_time_rsgs(d, n));
    r.hit_informed_dev = std::abs(r.hit_informed - hitting_time_informed(d, n));
    return r;
}

} // namespace lim
