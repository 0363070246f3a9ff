#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "lim/core/simplex.hpp"
#include "lim/samplers/kernels.hpp"

namespace lim {

enum class WeightKind { Constant, ClosedForm, ParticleEstimated };

// Map from state to kernel-selection probabilities. Only particle-estimated
// weights touch the rng.
template <class S>
struct WeightFunction {
    WeightKind kind = WeightKind::Constant;
    std::size_t n = 0;
    std::function<SimplexWeights(const S&, RngStream&)> eval;

    bool stochastic() const { return kind == WeightKind::ParticleEstimated; }
    SimplexWeights operator()(const S& x) const {
        RngStream unused;
        return eval(x, unused);
    }

    static WeightFunction constant(SimplexWeights w) {
        WeightFunction f;
        f.kind = WeightKind::Constant;
        f.n = w.size();
        f.eval = [w](const S&, RngStream&) { return w; };
        return f;
    }
    static WeightFunction closed_form(std::size_t n, std::function<SimplexWeights(const S&)> g) {
        WeightFunction f;
        f.kind = WeightKind::ClosedForm;
        f.n = n;
        f.eval = [g](const S& x, RngStream&) { return g(x); };
        return f;
    }
};

// Average target density over L draws from each proposal, normalized across
// kernels; uniform when every particle has zero density.
template <class S>
SimplexWeights particle_weights(const KernelCollection<S>& P, const S& x, std::size_t L, RngStream& rng) {
    P.require_mh();
    if (L < 1) throw InvalidArgument("particle count must be >= 1");
    const double ninf = -std::numeric_limits<double>::infinity();
    std::vector<double> lw(P.size(), ninf);
    for (std::size_t i = 0; i < P.size(); ++i) {
        std::vector<double> lp(L);
        double mx = ninf;
        for (std::size_t l = 0; l < L; ++l) {
            lp[l] = P.target(P[i].mh.propose(x, rng));
            mx = std::max(mx, lp[l]);
        }
        if (mx == ninf) continue;
        double s = 0.0;
        for (double v : lp) s += std::exp(v - mx);
        lw[i] = mx + std::log(s / double(L));
    }
    double mx = *std::max_element(lw.begin(), lw.end());
    if (mx == ninf) return SimplexWeights::uniform(P.size());
    std::vector<double> w(P.size());
    for (std::size_t i = 0; i < P.size(); ++i) w[i] = std::exp(lw[i] - mx);
    return simplex_normalize(w);
}

template <class S>
WeightFunction<S> particle_weight_function(const KernelCollection<S>& P, std::size_t L) {
    WeightFunction<S> f;
    f.kind = WeightKind::ParticleEstimated;
    f.n = P.size();
    f.eval = [P, L](const S& x, RngStream& rng) { return particle_weights(P, x, L, rng); };
    return f;
}

} // namespace lim
