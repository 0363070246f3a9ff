#include "lim/core/simplex.hpp"

#include <cmath>
#include <algorithm>
#include <numeric>
#include <string>

#include "lim/core/errors.hpp"

namespace lim {

SimplexWeights::SimplexWeights(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty()) throw InvalidArgument("simplex weights need n >= 1");
    double s = 0.0;
    for (double v : w_) {
        if (!std::isfinite(v) || v < 0.0) throw InvalidArgument("simplex entry out of range");
        s += v;
    }
    if (std::abs(s - 1.0) > 1e-12)
        throw InvalidArgument("simplex weights sum to " + std::to_string(s));
}

SimplexWeights SimplexWeights::uniform(std::size_t n) {
    return SimplexWeights(std::vector<double>(n, 1.0 / double(n)));
}

SimplexWeights SimplexWeights::delta(std::size_t n, std::size_t i) {
    std::vector<double> w(n, 0.0);
    w.at(i) = 1.0;
    return SimplexWeights(std::move(w));
}

SimplexWeights simplex_normalize(const std::vector<double>& raw) {
    if (raw.empty()) throw AllZero("empty weight vector");
    double s = 0.0;
    for (double v : raw) {
        if (!std::isfinite(v)) throw NonFinite("non-finite weight");
        if (v < 0.0) throw InvalidArgument("negative weight");
        s += v;
    }
    if (s <= 0.0) throw AllZero("all weights are zero");
    std::vector<double> w(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) w[i] = raw[i] / s;
    // fold the rounding residue into the largest entry so the sum is exact to 1e-15
    double t = std::accumulate(w.begin(), w.end(), 0.0);
    auto big = std::max_element(w.begin(), w.end());
    *big += 1.0 - t;
    if (*big < 0.0) *big = 0.0;
    return SimplexWeights(std::move(w));
}

std::size_t sample_categorical(const std::vector<double>& p, RngStream& rng) {
    double u = rng.uniform();
    double total = 0.0;
    for (double v : p) total += v;
    u *= total;
    double c = 0.0;
    std::size_t last = p.size();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        c += p[i];
        last = i;
        if (u < c) return i;
    }
    if (last == p.size()) throw AllZero("categorical with no positive entry");
    return last;
}

std::size_t sample_categorical(const SimplexWeights& w, RngStream& rng) {
    return sample_categorical(w.values(), rng);
}

} // namespace lim
