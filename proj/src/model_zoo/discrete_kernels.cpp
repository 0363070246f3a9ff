#include "lim/model_zoo/discrete_kernels.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "lim/core/gibbs.hpp"

namespace lim {

KernelCollection<std::size_t> gibbs_collection(const DiscreteTarget& t) {
    auto tp = std::make_shared<const DiscreteTarget>(t);
    KernelCollection<std::size_t> P;
    P.log_target = [tp](std::size_t x) { return tp->log_prob(x); };
    for (std::size_t i = 0; i < t.space().dim(); ++i) {
        Kernel<std::size_t> k;
        k.tag = KernelTag::GeneralReversible;
        k.name = "gibbs" + std::to_string(i + 1);
        k.move = [tp, i](const std::size_t& x, RngStream& rng) { return gibbs_full_conditional_step(*tp, x, i, rng); };
        k.enumerate = [tp, i](const std::size_t& x) {
            std::vector<Transition<std::size_t>> out;
            for (auto [y, p] : full_conditional(*tp, x, i)) out.push_back({y, p});
            return out;
        };
        P.kernels.push_back(std::move(k));
    }
    return P;
}

KernelCollection<std::size_t> mh_coordinate_collection(const DiscreteTarget& t) {
    auto tp = std::make_shared<const DiscreteTarget>(t);
    KernelCollection<std::size_t> P;
    P.log_target = [tp](std::size_t x) { return tp->log_prob(x); };
    for (std::size_t i = 0; i < t.space().dim(); ++i) {
        const int m = t.space().card(i);
        Kernel<std::size_t> k;
        k.tag = KernelTag::MetropolisHastings;
        k.name = "mh" + std::to_string(i + 1);
        k.mh.log_target = P.log_target;
        k.mh.propose = [tp, i, m](const std::size_t& x, RngStream& rng) {
            return tp->space().with_coord(x, i, int(rng.below(std::uint64_t(m))));
        };
        k.mh.log_q = [tp, i, m](const std::size_t& a, const std::size_t& b) {
            const DiscreteSpace& sp = tp->space();
            return sp.with_coord(a, i, sp.coord(b, i)) == b ? -std::log(double(m))
                                                            : -std::numeric_limits<double>::infinity();
        };
        k.enumerate = [tp, i, m](const std::size_t& x) {
            std::vector<Transition<std::size_t>> out;
            for (int v = 0; v < m; ++v) out.push_back({tp->space().with_coord(x, i, v), 1.0 / m});
            return out;
        };
        P.kernels.push_back(std::move(k));
    }
    return P;
}

} // namespace lim
