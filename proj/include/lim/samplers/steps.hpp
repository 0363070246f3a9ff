#pragma once
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

#include "lim/core/errors.hpp"
#include "lim/core/simplex.hpp"
#include "lim/samplers/kernels.hpp"
#include "lim/samplers/weights.hpp"

namespace lim {

template <class S>
struct StepResult {
    S state;
    double logp;  // log target at state, NaN when never evaluated
    std::size_t kernel;
    bool accepted;
};

// A sampler step: (current state, cached log target or NaN, iteration, rng).
template <class S>
using StepFn = std::function<StepResult<S>(const S&, double, std::size_t, RngStream&)>;

enum class Variant { Alg1, Alg2, Hybrid, Delayed, Mixed };

namespace detail {
// Particle weights at x and at the proposal must see the same exogenous noise.
struct WeightNoise {
    RngStream stream;
    bool active = false;
    template <class S>
    SimplexWeights at(const WeightFunction<S>& w, const S& x) const {
        RngStream copy = stream;
        return w.eval(x, copy);
    }
};
template <class S>
WeightNoise draw_noise(const WeightFunction<S>& w, RngStream& rng) {
    WeightNoise n;
    if (w.stochastic()) {
        n.stream = rng.split();
        n.active = true;
    }
    return n;
}
} // namespace detail

// Algorithm 1: i ~ w(x), full P_i move, then accept with 1 ∧ w_j(y)/w_i(x).
template <class S>
StepResult<S> step_alg1(const KernelCollection<S>& P, const WeightFunction<S>& w, const S& x, double lpx,
                        RngStream& rng) {
    auto noise = detail::draw_noise(w, rng);
    SimplexWeights wx = noise.at(w, x);
    std::size_t i = sample_categorical(wx, rng);
    double lpy;
    auto [y, moved] = kernel_transition(P, i, x, lpx, lpy, rng);
    if (!moved) return {x, lpx, i, false};
    std::size_t j = P.reverse_index(i, x, y);
    SimplexWeights wy = noise.at(w, y);
    double ratio = wy[j] / wx[i];
    if (ratio >= 1.0 || rng.uniform() < ratio) return {std::move(y), lpy, i, true};
    return {x, lpx, i, false};
}

// Algorithm 2: one combined MH test including the weight ratio.
template <class S>
StepResult<S> step_alg2(const KernelCollection<S>& P, const WeightFunction<S>& w, const S& x, double lpx,
                        RngStream& rng) {
    P.require_mh();
    if (std::isnan(lpx)) lpx = P.target(x);
    check_current_density(lpx);
    auto noise = detail::draw_noise(w, rng);
    SimplexWeights wx = noise.at(w, x);
    std::size_t i = sample_categorical(wx, rng);
    S y = P[i].mh.propose(x, rng);
    std::size_t j = P.reverse_index(i, x, y);
    SimplexWeights wy = noise.at(w, y);
    double lpy = P.target(y);
    double lr;
    if (wy[j] <= 0.0)
        lr = -std::numeric_limits<double>::infinity();
    else
        lr = mh_log_ratio(lpy, P[j].mh.log_q(y, x) + std::log(wy[j]), lpx,
                          P[i].mh.log_q(x, y) + std::log(wx[i]));
    if (accept_log_ratio(lr, rng)) return {std::move(y), lpy, i, true};
    return {x, lpx, i, false};
}

// Uninformed mixture with constant weights.
template <class S>
StepResult<S> step_hybrid(const KernelCollection<S>& P, const SimplexWeights& wc, const S& x, double lpx,
                          RngStream& rng) {
    std::size_t i = sample_categorical(wc, rng);
    double lpy;
    auto [y, moved] = kernel_transition(P, i, x, lpx, lpy, rng);
    return {std::move(y), lpy, i, moved};
}

inline void check_lambda(double lambda) {
    if (!(lambda > 0.0 && lambda <= 1.0)) throw BadLambda("lambda must lie in (0,1]");
}

// Lazy version: with probability 1-lambda stay put. lambda = 1 draws nothing extra.
template <class S>
StepResult<S> step_delayed(const StepFn<S>& inner, double lambda, const S& x, double lpx, std::size_t t,
                           RngStream& rng) {
    check_lambda(lambda);
    if (lambda < 1.0 && rng.uniform() >= lambda) return {x, lpx, 0, false};
    return inner(x, lpx, t, rng);
}

template <class S>
StepResult<S> step_mixed(const StepFn<S>& informed, const StepFn<S>& uninformed, double varpi, const S& x,
                         double lpx, std::size_t t, RngStream& rng) {
    if (!(varpi >= 0.0 && varpi <= 1.0)) throw InvalidArgument("mixing probability must lie in [0,1]");
    bool take_informed = varpi >= 1.0 ? true : varpi <= 0.0 ? false : rng.uniform() < varpi;
    return take_informed ? informed(x, lpx, t, rng) : uninformed(x, lpx, t, rng);
}

template <class S>
StepFn<S> make_alg1(KernelCollection<S> P, WeightFunction<S> w) {
    auto p = std::make_shared<const KernelCollection<S>>(std::move(P));
    return [p, w](const S& x, double lpx, std::size_t, RngStream& rng) { return step_alg1(*p, w, x, lpx, rng); };
}
template <class S>
StepFn<S> make_alg2(KernelCollection<S> P, WeightFunction<S> w) {
    P.require_mh();
    auto p = std::make_shared<const KernelCollection<S>>(std::move(P));
    return [p, w](const S& x, double lpx, std::size_t, RngStream& rng) { return step_alg2(*p, w, x, lpx, rng); };
}
template <class S>
StepFn<S> make_hybrid(KernelCollection<S> P, SimplexWeights wc) {
    auto p = std::make_shared<const KernelCollection<S>>(std::move(P));
    return [p, wc](const S& x, double lpx, std::size_t, RngStream& rng) {
        return step_hybrid(*p, wc, x, lpx, rng);
    };
}
template <class S>
StepFn<S> make_delayed(StepFn<S> inner, double lambda) {
    check_lambda(lambda);
    return [inner, lambda](const S& x, double lpx, std::size_t t, RngStream& rng) {
        return step_delayed(inner, lambda, x, lpx, t, rng);
    };
}
template <class S>
StepFn<S> make_mixed(StepFn<S> informed, StepFn<S> uninformed, double varpi) {
    if (!(varpi >= 0.0 && varpi <= 1.0)) throw InvalidArgument("mixing probability must lie in [0,1]");
    return [informed, uninformed, varpi](const S& x, double lpx, std::size_t t, RngStream& rng) {
        return step_mixed(informed, uninformed, varpi, x, lpx, t, rng);
    };
}
// Deterministic cycle through the given steps: iteration t uses steps[t % k].
template <class S>
StepFn<S> make_alternating(std::vector<StepFn<S>> steps) {
    if (steps.empty()) throw InvalidArgument("alternation needs at least one step");
    return [steps](const S& x, double lpx, std::size_t t, RngStream& rng) {
        return steps[t % steps.size()](x, lpx, t, rng);
    };
}

// Settings for the five sampler variants. `inner` is the wrapped variant for
// Delayed (Alg1, Alg2 or Hybrid); Mixed mixes `inner` with Hybrid.
struct VariantSpec {
    Variant variant = Variant::Alg1;
    Variant inner = Variant::Alg1;
    double lambda = 1.0;
    double varpi = 1.0;
};

template <class S>
StepFn<S> make_step(const VariantSpec& v, const KernelCollection<S>& P, const WeightFunction<S>& w,
                    const SimplexWeights& wc) {
    auto base = [&](Variant b) -> StepFn<S> {
        switch (b) {
        case Variant::Alg1: return make_alg1(P, w);
        case Variant::Alg2: return make_alg2(P, w);
        case Variant::Hybrid: return make_hybrid(P, wc);
        default: throw InvalidArgument("nested delayed/mixed variants are not supported");
        }
    };
    switch (v.variant) {
    case Variant::Delayed: return make_delayed(base(v.inner), v.lambda);
    case Variant::Mixed: return make_mixed(base(v.inner), base(Variant::Hybrid), v.varpi);
    default: return base(v.variant);
    }
}

template <class S>
struct ChainTrace {
    std::vector<S> states;
    // Entry 0 belongs to x0 and holds kernel 0, not accepted.
    std::vector<std::size_t> kernel_indices;
    std::vector<std::uint8_t> accept_flags;
    std::uint64_t seed = 0, stream = 0;
    std::size_t size() const { return states.size(); }
};

// Calls visit(t, result) for t = 1..T; returns the final state.
template <class S, class Visit>
StepResult<S> run_chain_visit(const StepFn<S>& step, const S& x0, std::size_t T, RngStream& rng, Visit&& visit) {
    StepResult<S> cur{x0, std::numeric_limits<double>::quiet_NaN(), 0, false};
    for (std::size_t t = 1; t <= T; ++t) {
        cur = step(cur.state, cur.logp, t - 1, rng);
        visit(t, cur);
    }
    return cur;
}

template <class S>
ChainTrace<S> run_chain(const StepFn<S>& step, const S& x0, std::size_t T, RngStream& rng) {
    ChainTrace<S> tr;
    tr.seed = rng.seed();
    tr.stream = rng.stream();
    tr.states.reserve(T + 1);
    tr.states.push_back(x0);
    tr.kernel_indices.push_back(0);
    tr.accept_flags.push_back(0);
    run_chain_visit(step, x0, T, rng, [&](std::size_t, const StepResult<S>& r) {
        tr.states.push_back(r.state);
        tr.kernel_indices.push_back(r.kernel);
        tr.accept_flags.push_back(r.accepted ? 1 : 0);
    });
    return tr;
}

} // namespace lim
