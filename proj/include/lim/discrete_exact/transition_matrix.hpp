#pragma once
#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace lim {

using SparseRM = Eigen::SparseMatrix<double, Eigen::RowMajor>;

// Largest state count for which dense eigen/linear solves are attempted.
inline constexpr std::size_t kDenseCap = 6000;

// Row-stochastic matrix over an enumerated state list. Stored sparse; the
// rows are labelled by the original state indices they stand for.
class TransitionMatrix {
  public:
    TransitionMatrix() = default;
    // Entries in [-1e-14, 1+1e-14] are clamped to [0,1]; rows must sum to 1 within 1e-12.
    explicit TransitionMatrix(SparseRM m, std::vector<std::size_t> labels = {});
    static TransitionMatrix from_dense(const Eigen::MatrixXd& m, std::vector<std::size_t> labels = {});
    static TransitionMatrix identity(std::size_t n);

    std::size_t size() const { return std::size_t(m_.rows()); }
    const SparseRM& sparse() const { return m_; }
    // Throws SpaceTooLarge above `cap` states.
    Eigen::MatrixXd dense(std::size_t cap = kDenseCap) const;
    double operator()(std::size_t i, std::size_t j) const { return m_.coeff(Eigen::Index(i), Eigen::Index(j)); }
    // Original state index of row i (identity when unlabelled).
    std::size_t label(std::size_t i) const { return labels_.empty() ? i : labels_[i]; }
    const std::vector<std::size_t>& labels() const { return labels_; }
    // Local row of an original state index, or size() when absent.
    std::size_t local(std::size_t state) const;

    // mu P
    Eigen::VectorXd left_apply(const Eigen::VectorXd& mu) const;

  private:
    SparseRM m_;
    std::vector<std::size_t> labels_;
};

// Convex combination a*A + (1-a)*B of matrices on the same labels.
TransitionMatrix blend(const TransitionMatrix& A, const TransitionMatrix& B, double a);

// Throws NotStochastic when a row misses 1 by more than tol or an entry is negative.
void check_stochastic(const Eigen::MatrixXd& m, double tol = 1e-10);

} // namespace lim
