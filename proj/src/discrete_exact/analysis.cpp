#include "lim/discrete_exact/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "lim/core/errors.hpp"

namespace lim {

double check_detailed_balance(const TransitionMatrix& P, const Eigen::VectorXd& pi) {
    if (std::size_t(pi.size()) != P.size()) throw DimensionMismatch("pi length differs from matrix size");
    const SparseRM& m = P.sparse();
    double worst = 0.0;
    for (Eigen::Index x = 0; x < m.outerSize(); ++x)
        for (SparseRM::InnerIterator it(m, x); it; ++it) {
            Eigen::Index y = it.col();
            worst = std::max(worst, std::abs(pi(x) * it.value() - pi(y) * m.coeff(y, x)));
        }
    return worst;
}

double check_detailed_balance(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi) {
    if (pi.size() != P.rows()) throw DimensionMismatch("pi length differs from matrix size");
    Eigen::MatrixXd F = pi.asDiagonal() * P;
    return (F - F.transpose()).cwiseAbs().maxCoeff();
}

double tv_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return 0.5 * (a - b).cwiseAbs().sum(); }

std::vector<double> tv_curve(const Eigen::VectorXd& mu0, const TransitionMatrix& P, const Eigen::VectorXd& pi,
                             std::size_t T) {
    if (std::size_t(mu0.size()) != P.size() || pi.size() != mu0.size())
        throw DimensionMismatch("distribution length differs from matrix size");
    std::vector<double> out;
    out.reserve(T + 1);
    Eigen::VectorXd mu = mu0;
    out.push_back(tv_distance(mu, pi));
    for (std::size_t t = 1; t <= T; ++t) {
        mu = P.left_apply(mu);
        out.push_back(tv_distance(mu, pi));
    }
    return out;
}

std::size_t mixing_time(const Eigen::VectorXd& mu0, const TransitionMatrix& P, const Eigen::VectorXd& pi, double eps,
                        std::size_t horizon, std::size_t count_from) {
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("eps must lie in (0,1)");
    Eigen::VectorXd mu = mu0;
    for (std::size_t t = 0; t <= horizon; ++t) {
        if (tv_distance(mu, pi) < eps) return t + count_from;
        mu = P.left_apply(mu);
    }
    throw NoConvergence("TV stayed above " + std::to_string(eps) + " for " + std::to_string(horizon) + " steps");
}

Eigen::VectorXd stationary_distribution(const Eigen::MatrixXd& P) {
    const Eigen::Index n = P.rows();
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - P.transpose();
    A.row(n - 1).setOnes();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(n - 1) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw SingularSystem("stationary distribution is not unique");
    Eigen::VectorXd pi = lu.solve(b);
    return pi.cwiseMax(0.0) / pi.cwiseMax(0.0).sum();
}

Eigen::VectorXd stationary_distribution(const TransitionMatrix& P) { return stationary_distribution(P.dense()); }

std::vector<std::complex<double>> spectrum(const Eigen::MatrixXd& P) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(P, false);
    if (es.info() != Eigen::Success) throw NoConvergence("eigensolver failed");
    std::vector<std::complex<double>> ev(std::size_t(P.rows()));
    for (Eigen::Index i = 0; i < P.rows(); ++i) ev[std::size_t(i)] = es.eigenvalues()(i);
    return ev;
}

namespace {
// Real spectrum through the symmetrized similarity transform when P is
// reversible with respect to a strictly positive stationary law.
bool symmetric_spectrum(const Eigen::MatrixXd& P, Eigen::VectorXd& ev) {
    Eigen::VectorXd pi;
    try {
        pi = stationary_distribution(P);
    } catch (const SingularSystem&) {
        return false;
    }
    if (pi.minCoeff() <= 0.0) return false;
    if (check_detailed_balance(P, pi) > 1e-12) return false;
    Eigen::VectorXd s = pi.cwiseSqrt();
    Eigen::MatrixXd S = s.asDiagonal() * P * s.cwiseInverse().asDiagonal();
    S = 0.5 * (S + S.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    ev = es.eigenvalues();
    return true;
}
} // namespace

std::vector<double> spectrum_moduli(const Eigen::MatrixXd& P) {
    Eigen::VectorXd ev;
    std::vector<double> out;
    if (symmetric_spectrum(P, ev)) {
        for (Eigen::Index i = 0; i < ev.size(); ++i) out.push_back(std::abs(ev(i)));
    } else {
        for (auto z : spectrum(P)) out.push_back(std::abs(z));
    }
    return out;
}

double spectral_gap(const Eigen::MatrixXd& P, double unit_tol) {
    check_stochastic(P);
    // Keep signs/phases so that -1 is not mistaken for the unit eigenvalue.
    std::vector<std::complex<double>> ev;
    Eigen::VectorXd real_ev;
    if (symmetric_spectrum(P, real_ev))
        for (Eigen::Index i = 0; i < real_ev.size(); ++i) ev.emplace_back(real_ev(i), 0.0);
    else
        ev = spectrum(P);
    std::size_t unit = ev.size();
    double best = unit_tol;
    for (std::size_t i = 0; i < ev.size(); ++i) {
        double dist = std::abs(ev[i] - 1.0);
        if (dist <= best) {
            best = dist;
            unit = i;
        }
    }
    if (unit == ev.size()) throw NotStochastic("no eigenvalue within tolerance of 1");
    double mx = 0.0;
    for (std::size_t i = 0; i < ev.size(); ++i)
        if (i != unit) mx = std::max(mx, std::abs(ev[i]));
    return 1.0 - mx;
}

double spectral_gap(const TransitionMatrix& P, double unit_tol) { return spectral_gap(P.dense(), unit_tol); }

double exact_asymptotic_variance(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    const Eigen::Index n = P.rows();
    if (pi.size() != n || f.size() != n) throw DimensionMismatch("pi/f length differs from matrix size");
    Eigen::VectorXd fc = f.array() - pi.dot(f);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n) - P + Eigen::VectorXd::Ones(n) * pi.transpose();
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw SingularSystem("I - P + 1 pi^T is singular (reducible chain?)");
    Eigen::VectorXd g = lu.solve(fc);
    Eigen::VectorXd pf = pi.cwiseProduct(fc);
    return 2.0 * pf.dot(g) - pf.dot(fc);
}

double exact_asymptotic_variance(const TransitionMatrix& P, const Eigen::VectorXd& pi, const Eigen::VectorXd& f) {
    return exact_asymptotic_variance(P.dense(), pi, f);
}

Eigen::VectorXd expected_hitting_times(const Eigen::MatrixXd& P, const std::vector<std::size_t>& targets) {
    const std::size_t n = std::size_t(P.rows());
    std::vector<char> is_target(n, 0);
    for (auto s : targets) {
        if (s >= n) throw InvalidArgument("target state out of range");
        is_target[s] = 1;
    }
    // backward reachability from the target set
    std::vector<char> reach = is_target;
    std::vector<std::size_t> stack(targets.begin(), targets.end());
    while (!stack.empty()) {
        std::size_t y = stack.back();
        stack.pop_back();
        for (std::size_t x = 0; x < n; ++x)
            if (!reach[x] && P(Eigen::Index(x), Eigen::Index(y)) > 0.0) {
                reach[x] = 1;
                stack.push_back(x);
            }
    }
    for (std::size_t x = 0; x < n; ++x)
        if (!reach[x]) throw Unreachable("state " + std::to_string(x) + " cannot reach the target set");
    std::vector<std::size_t> tr;
    for (std::size_t x = 0; x < n; ++x)
        if (!is_target[x]) tr.push_back(x);
    const Eigen::Index k = Eigen::Index(tr.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(k, k);
    for (Eigen::Index a = 0; a < k; ++a)
        for (Eigen::Index b = 0; b < k; ++b) A(a, b) -= P(Eigen::Index(tr[a]), Eigen::Index(tr[b]));
    Eigen::VectorXd h = Eigen::VectorXd::Zero(Eigen::Index(n));
    if (k == 0) return h;
    Eigen::VectorXd sol = A.partialPivLu().solve(Eigen::VectorXd::Ones(k));
    for (Eigen::Index a = 0; a < k; ++a) h(Eigen::Index(tr[a])) = sol(a);
    return h;
}

} // namespace lim
