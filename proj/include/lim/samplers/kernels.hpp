#pragma once
#include <cmath>
#include <cstddef>
#include <limits>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "lim/core/errors.hpp"
#include "lim/core/mh.hpp"
#include "lim/core/rng.hpp"

namespace lim {

enum class KernelTag { GeneralReversible, MetropolisHastings };

template <class S>
struct Transition {
    S to;
    double prob;
};

// One member of the kernel family. A general kernel draws a full P_i move;
// an MH kernel carries its proposal. `enumerate` (discrete spaces only) lists
// P_i(x,.) for general kernels and Q_i(x,.) for MH kernels.
template <class S>
struct Kernel {
    KernelTag tag = KernelTag::GeneralReversible;
    std::string name;
    std::function<S(const S&, RngStream&)> move;
    MhKernel<S> mh;
    std::function<std::vector<Transition<S>>(const S&)> enumerate;
};

template <class S>
class KernelCollection {
  public:
    std::vector<Kernel<S>> kernels;
    // Index j of the kernel that proposes x from y when kernel i proposed y from x.
    // Empty means j = i. Needed when kernels come in mirrored pairs.
    std::function<std::size_t(std::size_t, const S&, const S&)> reverse;
    // Shared target; required for MH kernels and Alg. 2.
    std::function<double(const S&)> log_target;

    std::size_t size() const { return kernels.size(); }
    const Kernel<S>& operator[](std::size_t i) const { return kernels[i]; }

    std::size_t reverse_index(std::size_t i, const S& x, const S& y) const {
        return reverse ? reverse(i, x, y) : i;
    }
    bool all_mh() const {
        for (const auto& k : kernels)
            if (k.tag != KernelTag::MetropolisHastings) return false;
        return !kernels.empty();
    }
    void require_mh() const {
        if (!all_mh()) throw KernelTagMismatch("algorithm 2 needs every kernel tagged Metropolis-Hastings");
    }
    double target(const S& x) const {
        if (log_target) return log_target(x);
        if (!kernels.empty() && kernels[0].mh.log_target) return kernels[0].mh.log_target(x);
        throw InvalidArgument("kernel collection has no target log-density");
    }
};

// Full P_i transition from x. For MH kernels the acceptance uses the paired
// reverse kernel. Returns (state, moved-or-accepted).
template <class S>
std::pair<S, bool> kernel_transition(const KernelCollection<S>& P, std::size_t i, const S& x, double& lpx,
                                     double& lpy, RngStream& rng) {
    const Kernel<S>& k = P[i];
    if (k.tag == KernelTag::GeneralReversible) {
        lpy = std::numeric_limits<double>::quiet_NaN();
        return {k.move(x, rng), true};
    }
    if (std::isnan(lpx)) lpx = P.target(x);
    check_current_density(lpx);
    S y = k.mh.propose(x, rng);
    std::size_t j = P.reverse_index(i, x, y);
    lpy = P.target(y);
    double lr = mh_log_ratio(lpy, P[j].mh.log_q(y, x), lpx, k.mh.log_q(x, y));
    if (accept_log_ratio(lr, rng)) return {std::move(y), true};
    lpy = lpx;
    return {x, false};
}

} // namespace lim
