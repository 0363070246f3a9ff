#include "lim/model_zoo/three_state.hpp"

#include <cmath>
#include <limits>

#include "lim/core/errors.hpp"

namespace lim {

namespace {
std::size_t lowest_other(std::size_t i) { return i == 0 ? 1 : 0; }
std::size_t highest_other(std::size_t i) { return i == 2 ? 1 : 2; }
} // namespace

ThreeStateSetup three_state_setup(double p) {
    if (!(p > 0.0 && p < 1.0)) throw InvalidArgument("p must lie in (0,1)");
    ThreeStateSetup s;
    s.target = DiscreteTarget(DiscreteSpace({3}), {(1.0 - p) / 2.0, (1.0 - p) / 2.0, p});
    auto pi = s.target.probs();
    auto logt = [pi](std::size_t x) { return std::log(pi[x]); };
    s.kernels.log_target = logt;
    for (int k = 0; k < 2; ++k) {
        auto pick = k == 0 ? lowest_other : highest_other;
        Kernel<std::size_t> K;
        K.tag = KernelTag::MetropolisHastings;
        K.name = k == 0 ? "lower" : "upper";
        K.mh.log_target = logt;
        K.mh.propose = [pick](const std::size_t& x, RngStream&) { return pick(x); };
        K.mh.log_q = [pick](const std::size_t& a, const std::size_t& b) {
            return pick(a) == b ? 0.0 : -std::numeric_limits<double>::infinity();
        };
        K.enumerate = [pick](const std::size_t& x) { return std::vector<Transition<std::size_t>>{{pick(x), 1.0}}; };
        s.kernels.kernels.push_back(std::move(K));
    }
    // the kernel that undoes a move x -> y is the one proposing x from y
    s.kernels.reverse = [](std::size_t i, const std::size_t& x, const std::size_t& y) -> std::size_t {
        if (x == y) return i;
        return lowest_other(y) == x ? 0 : 1;
    };
    s.informed = WeightFunction<std::size_t>::closed_form(2, [pi](const std::size_t& x) {
        return simplex_normalize({pi[lowest_other(x)], pi[highest_other(x)]});
    });
    s.uninformed = SimplexWeights::uniform(2);
    return s;
}

Eigen::Matrix3d three_state_uninformed_closed(double p) {
    Eigen::Matrix3d m;
    if (p <= 1.0 / 3.0) {
        m << 1 - 3 * p, 1 - p, 2 * p, 1 - p, 1 - 3 * p, 2 * p, 1 - p, 1 - p, 0;
        return m / (2 * (1 - p));
    }
    m << 0, 2 * p, 2 * p, 2 * p, 0, 2 * p, 1 - p, 1 - p, 2 * (3 * p - 1);
    return m / (4 * p);
}

Eigen::Matrix3d three_state_informed_closed(double p) {
    Eigen::Matrix3d m;
    if (p <= 1.0 / 3.0) {
        m << 2 * p * (1 - 3 * p), 2 * (1 - p) * (1 - p), 2 * p * (1 + p), 2 * (1 - p) * (1 - p), 2 * p * (1 - 3 * p),
            2 * p * (1 + p), (1 - p) * (1 + p), (1 - p) * (1 + p), 0;
        return m / (2 * (1 - p) * (1 + p));
    }
    m << 0, 1 - p, 2 * p, 1 - p, 0, 2 * p, 1 - p, 1 - p, 0;
    return m / (1 + p);
}

double three_state_gap_closed(double p) { return p <= 1.0 / 3.0 ? (1 - 2 * p) / (1 - p) : 1.0 / p; }

double three_state_gap_informed_closed(double p) {
    return p <= 1.0 / 3.0 ? p * (3 - 5 * p) / (1 - p * p) : 2 * p / (1 + p);
}

} // namespace lim
