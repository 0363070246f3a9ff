#include "lim/discrete_exact/transition_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lim/core/errors.hpp"

namespace lim {

TransitionMatrix::TransitionMatrix(SparseRM m, std::vector<std::size_t> labels)
    : m_(std::move(m)), labels_(std::move(labels)) {
    if (m_.rows() != m_.cols()) throw DimensionMismatch("transition matrix must be square");
    if (!labels_.empty() && labels_.size() != size()) throw DimensionMismatch("one label per row required");
    m_.makeCompressed();
    for (Eigen::Index r = 0; r < m_.outerSize(); ++r) {
        double s = 0.0;
        for (SparseRM::InnerIterator it(m_, r); it; ++it) {
            double& v = it.valueRef();
            if (v < -1e-14 || v > 1.0 + 1e-14 || !std::isfinite(v))
                throw NotStochastic("entry out of range in row " + std::to_string(r));
            v = std::clamp(v, 0.0, 1.0);
            s += v;
        }
        if (std::abs(s - 1.0) > 1e-12)
            throw NotStochastic("row " + std::to_string(r) + " sums to " + std::to_string(s));
    }
}

TransitionMatrix TransitionMatrix::from_dense(const Eigen::MatrixXd& m, std::vector<std::size_t> labels) {
    return TransitionMatrix(m.sparseView(0.0, 0.0), std::move(labels));
}

TransitionMatrix TransitionMatrix::identity(std::size_t n) {
    SparseRM I{Eigen::Index(n), Eigen::Index(n)};
    I.setIdentity();
    return TransitionMatrix(I);
}

Eigen::MatrixXd TransitionMatrix::dense(std::size_t cap) const {
    if (size() > cap)
        throw SpaceTooLarge("dense solve needs " + std::to_string(size()) + " states, cap is " + std::to_string(cap));
    return Eigen::MatrixXd(m_);
}

std::size_t TransitionMatrix::local(std::size_t state) const {
    if (labels_.empty()) return state < size() ? state : size();
    auto it = std::find(labels_.begin(), labels_.end(), state);
    return std::size_t(it - labels_.begin());
}

Eigen::VectorXd TransitionMatrix::left_apply(const Eigen::VectorXd& mu) const {
    return m_.transpose() * mu;
}

TransitionMatrix blend(const TransitionMatrix& A, const TransitionMatrix& B, double a) {
    if (A.size() != B.size()) throw DimensionMismatch("blend of matrices with different sizes");
    SparseRM m = a * A.sparse() + (1.0 - a) * B.sparse();
    return TransitionMatrix(std::move(m), A.labels());
}

void check_stochastic(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols()) throw NotStochastic("matrix is not square");
    if ((m.array() < -1e-14).any()) throw NotStochastic("negative entry");
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        if (std::abs(m.row(r).sum() - 1.0) > tol) throw NotStochastic("row " + std::to_string(r) + " does not sum to 1");
}

} // namespace lim
