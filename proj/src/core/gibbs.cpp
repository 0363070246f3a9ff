#include "lim/core/gibbs.hpp"

#include <cmath>

#include "lim/core/errors.hpp"
#include "lim/core/simplex.hpp"

namespace lim {

std::vector<std::pair<std::size_t, double>> full_conditional(const DiscreteTarget& t, std::size_t x,
                                                             std::size_t i) {
    const auto& sp = t.space();
    if (i >= sp.dim()) throw InvalidArgument("coordinate out of range");
    // work in log space relative to the slice maximum; masses near 1e-16 survive
    std::vector<std::pair<std::size_t, double>> out;
    double mx = -INFINITY;
    for (int v = 0; v < sp.card(i); ++v) {
        std::size_t y = sp.with_coord(x, i, v);
        mx = std::max(mx, t.log_prob(y));
    }
    if (!std::isfinite(mx)) throw ZeroSlice("full conditional slice has zero mass");
    double s = 0.0;
    for (int v = 0; v < sp.card(i); ++v) {
        std::size_t y = sp.with_coord(x, i, v);
        double lp = t.log_prob(y);
        if (!std::isfinite(lp)) continue;
        double w = std::exp(lp - mx);
        out.emplace_back(y, w);
        s += w;
    }
    for (auto& e : out) e.second /= s;
    return out;
}

std::size_t gibbs_full_conditional_step(const DiscreteTarget& t, std::size_t x, std::size_t i,
                                        RngStream& rng) {
    auto cond = full_conditional(t, x, i);
    std::vector<double> p(cond.size());
    for (std::size_t k = 0; k < cond.size(); ++k) p[k] = cond[k].second;
    return cond[sample_categorical(p, rng)].first;
}

} // namespace lim
