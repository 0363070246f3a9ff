#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lim/core/errors.hpp"
#include "lim/core/rng.hpp"
#include "lim/diagnostics/diagnostics.hpp"

namespace lim {

namespace {
// k-th smallest squared distance from row i of `a` to the rows of `b`,
// skipping row `skip` of b (set to b.rows() for none).
double kth_sq_distance(const SampleBatch& a, Eigen::Index i, const SampleBatch& b, Eigen::Index skip, std::size_t k,
                       std::vector<double>& buf) {
    buf.clear();
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
        if (j == skip) continue;
        buf.push_back((a.row(i) - b.row(j)).squaredNorm());
    }
    std::nth_element(buf.begin(), buf.begin() + std::ptrdiff_t(k - 1), buf.end());
    return buf[k - 1];
}

SampleBatch jittered(const SampleBatch& x, RngStream& rng) {
    double scale = x.cwiseAbs().maxCoeff();
    if (scale == 0.0) scale = 1.0;
    SampleBatch y = x;
    for (Eigen::Index i = 0; i < y.rows(); ++i)
        for (Eigen::Index j = 0; j < y.cols(); ++j) y(i, j) += 1e-12 * scale * rng.normal();
    return y;
}
} // namespace

double knn_kl(const SampleBatch& p_in, const SampleBatch& q_in, const KlOptions& opt) {
    const std::size_t k = opt.k;
    if (k < 1) throw InvalidArgument("k must be >= 1");
    if (p_in.cols() != q_in.cols()) throw DimensionMismatch("batches have different dimensions");
    if (std::size_t(p_in.rows()) <= k || std::size_t(q_in.rows()) < k)
        throw InvalidArgument("each batch needs more than k points");
    SampleBatch p = p_in, q = q_in;
    if (opt.ties == TiePolicy::Jitter) {
        RngStream rng(opt.jitter_seed, 0);
        p = jittered(p_in, rng);
        q = jittered(q_in, rng);
    }
    const double N = double(p.rows()), M = double(q.rows()), d = double(p.cols());
    std::vector<double> buf;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
        double rho2 = kth_sq_distance(p, i, p, i, k, buf);
        double nu2 = kth_sq_distance(p, i, q, q.rows(), k, buf);
        if (rho2 == 0.0 || nu2 == 0.0)
            throw DuplicatePoints("zero nearest-neighbour distance at point " + std::to_string(i));
        acc += 0.5 * std::log(nu2 / rho2);
    }
    return d / N * acc + std::log(M / (N - 1.0));
}

} // namespace lim
