#include "lim/model_zoo/cross.hpp"

#include <cmath>
#include <memory>

#include "lim/core/errors.hpp"
#include "lim/model_zoo/discrete_kernels.hpp"

namespace lim {

namespace {
bool in_high_set(const Coords& x, const CrossSpec& s) {
    const int d = s.d;
    if (s.short_range_rule && d == 2) return x[0] == 0;
    bool first = true, last = true;
    for (int i = 0; i < d - 2; ++i) first = first && x[std::size_t(i)] == 0;
    for (int i = 2; i < d; ++i) last = last && x[std::size_t(i)] == 0;
    return first || last;
}
} // namespace

CrossSetup cross_setup(const CrossSpec& s) {
    if (s.d < 2) throw InvalidArgument("cross example needs d >= 2");
    if (s.d > 10) throw SpaceTooLarge("cross example is capped at d = 10 (3^d states)");
    const double bg = s.background < 0.0 ? std::pow(100.0, -double(s.d)) : s.background;
    DiscreteSpace space(std::vector<int>(std::size_t(s.d), 3));
    std::vector<double> logw(space.total_states());
    std::vector<bool> mask(space.total_states());
    for (std::size_t i = 0; i < logw.size(); ++i) {
        mask[i] = in_high_set(space.decode(i), s);
        logw[i] = mask[i] ? 0.0 : std::log(bg);
    }
    CrossSetup out;
    out.target = DiscreteTarget::from_log_weights(space, logw, mask);
    out.kernels = gibbs_collection(out.target);
    auto tp = std::make_shared<const DiscreteTarget>(out.target);
    const std::size_t d = std::size_t(s.d);
    out.informed = WeightFunction<std::size_t>::closed_form(d, [tp, d](const std::size_t& x) {
        std::vector<double> w(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (int v = 0; v < 3; ++v) w[i] += tp->prob(tp->space().with_coord(x, i, v));
        return simplex_normalize(w);
    });
    out.uninformed = SimplexWeights::uniform(d);
    out.start = 0;
    return out;
}

} // namespace lim
