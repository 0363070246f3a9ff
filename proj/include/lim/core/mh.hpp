#pragma once
#include <cmath>
#include <functional>
#include <limits>
#include <utility>

#include "lim/core/errors.hpp"
#include "lim/core/rng.hpp"

namespace lim {

// Metropolis-Hastings pair: proposal sampler, proposal log-density, target log-density.
template <class S>
struct MhKernel {
    std::function<S(const S&, RngStream&)> propose;
    std::function<double(const S& from, const S& to)> log_q;
    std::function<double(const S&)> log_target;
};

// Accept with probability 1 ∧ exp(lr). Non-negative log-ratios accept without
// consuming a draw; NaN (e.g. -inf - -inf) rejects.
inline bool accept_log_ratio(double lr, RngStream& rng) {
    if (lr >= 0.0) return true;
    if (std::isnan(lr) || lr == -std::numeric_limits<double>::infinity()) return false;
    return std::log(rng.uniform_pos()) < lr;
}

inline double mh_log_ratio(double lp_y, double lq_yx, double lp_x, double lq_xy) {
    if (lp_y == -std::numeric_limits<double>::infinity() ||
        lq_yx == -std::numeric_limits<double>::infinity())
        return -std::numeric_limits<double>::infinity();
    return (lp_y + lq_yx) - (lp_x + lq_xy);
}

inline void check_current_density(double lp_x) {
    if (std::isnan(lp_x) || lp_x == std::numeric_limits<double>::infinity())
        throw NonFiniteDensity("log target at current state is NaN or +inf");
}

template <class S>
std::pair<S, bool> mh_step(const MhKernel<S>& k, const S& x, RngStream& rng) {
    double lpx = k.log_target(x);
    check_current_density(lpx);
    S y = k.propose(x, rng);
    double lr = mh_log_ratio(k.log_target(y), k.log_q(y, x), lpx, k.log_q(x, y));
    if (accept_log_ratio(lr, rng)) return {std::move(y), true};
    return {x, false};
}

} // namespace lim
