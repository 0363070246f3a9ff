#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "lim/core/errors.hpp"
#include "lim/core/target.hpp"
#include "lim/discrete_exact/transition_matrix.hpp"
#include "lim/samplers/steps.hpp"

namespace lim {

inline constexpr std::size_t kInduceCap = 200000;

struct InduceOptions {
    std::size_t cap = kInduceCap;
    // Explicit state list (row order); empty means the support of the target in index order.
    std::vector<std::size_t> order;
};

namespace detail {

using Row = std::map<std::size_t, double>;

struct Inducer {
    const KernelCollection<std::size_t>& P;
    const WeightFunction<std::size_t>& w;
    const SimplexWeights& wc;
    const DiscreteTarget& t;
    mutable std::unordered_map<std::size_t, SimplexWeights> wcache;

    const SimplexWeights& weights(std::size_t x) const {
        auto it = wcache.find(x);
        if (it != wcache.end()) return it->second;
        RngStream unused;
        return wcache.emplace(x, w.eval(x, unused)).first->second;
    }

    double log_q(std::size_t i, std::size_t a, std::size_t b) const { return P[i].mh.log_q(a, b); }

    // Full P_i(x,.) as (state, prob); MH kernels include their own rejection mass.
    void kernel_row(std::size_t i, std::size_t x, Row& out, double scale) const {
        const Kernel<std::size_t>& k = P[i];
        if (!k.enumerate) throw InvalidArgument("kernel '" + k.name + "' cannot enumerate its transitions");
        if (k.tag == KernelTag::GeneralReversible) {
            for (const auto& tr : k.enumerate(x)) out[tr.to] += scale * tr.prob;
            return;
        }
        double lpx = t.log_prob(x);
        for (const auto& tr : k.enumerate(x)) {
            if (tr.prob <= 0.0) continue;
            if (tr.to == x) {
                out[x] += scale * tr.prob;
                continue;
            }
            std::size_t j = P.reverse_index(i, x, tr.to);
            double lr = mh_log_ratio(t.log_prob(tr.to), log_q(j, tr.to, x), lpx, log_q(i, x, tr.to));
            double a = lr >= 0.0 ? 1.0 : (std::isnan(lr) ? 0.0 : std::exp(lr));
            out[tr.to] += scale * tr.prob * a;
            out[x] += scale * tr.prob * (1.0 - a);
        }
    }

    void alg1_row(std::size_t x, Row& out, double scale) const {
        const SimplexWeights wx = weights(x);
        for (std::size_t i = 0; i < P.size(); ++i) {
            if (wx[i] <= 0.0) continue;
            Row ki;
            kernel_row(i, x, ki, 1.0);
            for (const auto& [y, p] : ki) {
                if (p <= 0.0) continue;
                double a = 1.0;
                if (y != x) {
                    std::size_t j = P.reverse_index(i, x, y);
                    a = std::min(1.0, weights(y)[j] / wx[i]);
                }
                out[y] += scale * wx[i] * p * a;
                out[x] += scale * wx[i] * p * (1.0 - a);
            }
        }
    }

    void alg2_row(std::size_t x, Row& out, double scale) const {
        P.require_mh();
        const SimplexWeights wx = weights(x);
        double lpx = t.log_prob(x);
        for (std::size_t i = 0; i < P.size(); ++i) {
            if (wx[i] <= 0.0) continue;
            for (const auto& tr : P[i].enumerate(x)) {
                if (tr.prob <= 0.0) continue;
                double a = 1.0;
                if (tr.to != x) {
                    double lpy = t.log_prob(tr.to);
                    if (lpy == -std::numeric_limits<double>::infinity()) {
                        a = 0.0;
                    } else {
                        std::size_t j = P.reverse_index(i, x, tr.to);
                        double wyj = weights(tr.to)[j];
                        if (wyj <= 0.0) {
                            a = 0.0;
                        } else {
                            double lr = mh_log_ratio(lpy, log_q(j, tr.to, x) + std::log(wyj), lpx,
                                                     log_q(i, x, tr.to) + std::log(wx[i]));
                            a = lr >= 0.0 ? 1.0 : (std::isnan(lr) ? 0.0 : std::exp(lr));
                        }
                    }
                }
                out[tr.to] += scale * wx[i] * tr.prob * a;
                out[x] += scale * wx[i] * tr.prob * (1.0 - a);
            }
        }
    }

    void hybrid_row(std::size_t x, Row& out, double scale) const {
        for (std::size_t i = 0; i < P.size(); ++i)
            if (wc[i] > 0.0) kernel_row(i, x, out, scale * wc[i]);
    }

    void base_row(Variant v, std::size_t x, Row& out, double scale) const {
        switch (v) {
        case Variant::Alg1: alg1_row(x, out, scale); break;
        case Variant::Alg2: alg2_row(x, out, scale); break;
        case Variant::Hybrid: hybrid_row(x, out, scale); break;
        default: throw InvalidArgument("nested delayed/mixed variants are not supported");
        }
    }

    void row(const VariantSpec& v, std::size_t x, Row& out) const {
        switch (v.variant) {
        case Variant::Delayed:
            check_lambda(v.lambda);
            base_row(v.inner, x, out, v.lambda);
            out[x] += 1.0 - v.lambda;
            break;
        case Variant::Mixed:
            base_row(v.inner, x, out, v.varpi);
            hybrid_row(x, out, 1.0 - v.varpi);
            break;
        default: base_row(v.variant, x, out, 1.0);
        }
    }
};

} // namespace detail

// Exact transition matrix of a sampler variant, by summing over kernels and
// proposal supports. Rows are restricted to opts.order (default: support of pi).
inline TransitionMatrix induce_matrix(const KernelCollection<std::size_t>& P, const WeightFunction<std::size_t>& w,
                                      const SimplexWeights& wc, const VariantSpec& v, const DiscreteTarget& t,
                                      const InduceOptions& opts = {}) {
    if (t.size() > opts.cap && opts.order.empty())
        throw SpaceTooLarge("state space has " + std::to_string(t.size()) + " states, cap is " +
                            std::to_string(opts.cap));
    if (w.stochastic()) throw InvalidArgument("particle-estimated weights have no exact induced matrix");
    std::vector<std::size_t> order = opts.order.empty() ? t.support() : opts.order;
    if (order.size() > opts.cap) throw SpaceTooLarge("state list exceeds the cap");
    std::unordered_map<std::size_t, std::size_t> local;
    local.reserve(order.size() * 2);
    for (std::size_t k = 0; k < order.size(); ++k) local.emplace(order[k], k);

    detail::Inducer ind{P, w, wc, t, {}};
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t r = 0; r < order.size(); ++r) {
        detail::Row row;
        ind.row(v, order[r], row);
        for (const auto& [y, p] : row) {
            if (p == 0.0) continue;
            auto it = local.find(y);
            if (it == local.end()) {
                if (p > 1e-15)
                    throw InvalidArgument("transition leaves the state list (state " + std::to_string(y) + ")");
                continue;
            }
            trip.emplace_back(Eigen::Index(r), Eigen::Index(it->second), p);
        }
    }
    SparseRM m(Eigen::Index(order.size()), Eigen::Index(order.size()));
    m.setFromTriplets(trip.begin(), trip.end());
    return TransitionMatrix(std::move(m), order);
}

// Extended chain of Algorithm 1 on pairs (x, i): refresh i ~ w(x), move with
// kernel i and accept by the weight ratio; an accepted move lands on (y, j)
// with j the paired reverse kernel, a rejection on (x, i). Preserves
// w_i(x) pi(x). Rows ordered x-major over `order`.
inline Eigen::MatrixXd induce_joint_alg1(const KernelCollection<std::size_t>& P, const WeightFunction<std::size_t>& w,
                                         const DiscreteTarget& t, const std::vector<std::size_t>& order) {
    const std::size_t n = P.size(), N = order.size();
    std::unordered_map<std::size_t, std::size_t> local;
    for (std::size_t k = 0; k < N; ++k) local.emplace(order[k], k);
    SimplexWeights dummy = SimplexWeights::uniform(n);
    detail::Inducer ind{P, w, dummy, t, {}};
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(Eigen::Index(N * n), Eigen::Index(N * n));
    for (std::size_t a = 0; a < N; ++a) {
        std::size_t x = order[a];
        const SimplexWeights wx = ind.weights(x);
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(Eigen::Index(N * n));
        for (std::size_t i = 0; i < n; ++i) {
            if (wx[i] <= 0.0) continue;
            detail::Row ki;
            ind.kernel_row(i, x, ki, 1.0);
            for (const auto& [y, p] : ki) {
                if (p <= 0.0) continue;
                std::size_t j = i;
                double acc = 1.0;
                if (y != x) {
                    j = P.reverse_index(i, x, y);
                    acc = std::min(1.0, ind.weights(y)[j] / wx[i]);
                }
                auto it = local.find(y);
                if (it != local.end()) row(Eigen::Index(it->second * n + j)) += wx[i] * p * acc;
                row(Eigen::Index(a * n + i)) += wx[i] * p * (1.0 - acc);
            }
        }
        for (std::size_t i = 0; i < n; ++i) J.row(Eigen::Index(a * n + i)) = row;
    }
    return J;
}

} // namespace lim
