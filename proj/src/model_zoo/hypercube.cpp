#include "lim/model_zoo/hypercube.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lim/core/errors.hpp"

namespace lim {

void validate(const HypercubeSpec& s) {
    if (s.m < 3) throw InvalidArgument("hypercube needs m >= 3");
    if (s.d < 2) throw InvalidArgument("hypercube needs d >= 2");
    if (!(s.p >= 0.0 && s.p < 1.0)) throw InvalidArgument("off-filament mass p must lie in [0,1)");
}

bool on_filament(const Coords& x, int m) {
    std::size_t j = 0;
    while (j < x.size() && x[j] == m - 1) ++j;
    for (std::size_t k = j + 1; k < x.size(); ++k)
        if (x[k] != 0) return false;
    return true;
}

std::size_t filament_size(int m, int d) { return std::size_t(d) * std::size_t(m - 1) + 1; }

std::size_t filament_position(const Coords& x, int m) {
    std::size_t j = 0;
    while (j < x.size() && x[j] == m - 1) ++j;
    if (j == x.size()) return x.size() * std::size_t(m - 1);
    return j * std::size_t(m - 1) + std::size_t(x[j]);
}

Coords filament_state(std::size_t pos, int m, int d) {
    Coords x(std::size_t(d), 0);
    std::size_t j = pos / std::size_t(m - 1), r = pos % std::size_t(m - 1);
    for (std::size_t k = 0; k < j && k < x.size(); ++k) x[k] = m - 1;
    if (j < x.size()) x[j] = int(r);
    return x;
}

std::vector<std::size_t> filament_order(const DiscreteSpace& space, int m) {
    const int d = int(space.dim());
    std::vector<std::size_t> out;
    for (std::size_t pos = 0; pos < filament_size(m, d); ++pos) out.push_back(space.encode(filament_state(pos, m, d)));
    return out;
}

DiscreteTarget hypercube_target(const HypercubeSpec& s, std::size_t cap) {
    validate(s);
    double total = std::pow(double(s.m), double(s.d));
    if (total > double(cap)) throw SpaceTooLarge("hypercube has " + std::to_string(total) + " states");
    DiscreteSpace space(std::vector<int>(std::size_t(s.d), s.m));
    const std::size_t N = space.total_states(), nz = filament_size(s.m, s.d);
    std::vector<double> probs(N);
    std::vector<bool> mask(N);
    for (std::size_t i = 0; i < N; ++i) {
        mask[i] = on_filament(space.decode(i), s.m);
        probs[i] = mask[i] ? (1.0 - s.p) / double(nz) : s.p / double(N - nz);
    }
    return DiscreteTarget(std::move(space), std::move(probs), std::move(mask));
}

std::vector<bool> exit_directions(const Coords& x, int m) {
    std::vector<bool> out(x.size(), false);
    Coords y = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (int v = 0; v < m && !out[i]; ++v) {
            y[i] = v;
            if (!on_filament(y, m)) out[i] = true;
        }
        y[i] = x[i];
    }
    return out;
}

SimplexWeights hypercube_weights_at(const HypercubeSpec& s, const Coords& x) {
    const std::size_t d = x.size();
    if (!on_filament(x, s.m)) return SimplexWeights::uniform(d);
    std::vector<bool> exit = exit_directions(x, s.m);
    std::size_t ns = std::size_t(std::count(exit.begin(), exit.end(), true));
    std::vector<double> w(d, 0.0);
    double to_exit = ns == 0 ? 0.0 : ns == d ? 1.0 : s.p;
    for (std::size_t i = 0; i < d; ++i)
        w[i] = exit[i] ? to_exit / double(ns) : (1.0 - to_exit) / double(d - ns);
    return simplex_normalize(w);
}

WeightFunction<std::size_t> hypercube_weights(const HypercubeSpec& s) {
    validate(s);
    DiscreteSpace space(std::vector<int>(std::size_t(s.d), s.m));
    return WeightFunction<std::size_t>::closed_form(std::size_t(s.d), [s, space](const std::size_t& x) {
        return hypercube_weights_at(s, space.decode(x));
    });
}

Eigen::MatrixXd filament_chain(int d, int m, bool informed) {
    HypercubeSpec s{m, d, 0.0};
    validate(s);
    const std::size_t N = filament_size(m, d);
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(Eigen::Index(N), Eigen::Index(N));
    for (std::size_t a = 0; a < N; ++a) {
        Coords x = filament_state(a, m, d);
        SimplexWeights wx = informed ? hypercube_weights_at(s, x) : SimplexWeights::uniform(std::size_t(d));
        for (std::size_t i = 0; i < std::size_t(d); ++i) {
            if (wx[i] <= 0.0) continue;
            std::vector<std::size_t> slice;
            Coords y = x;
            for (int v = 0; v < m; ++v) {
                y[i] = v;
                if (on_filament(y, m)) slice.push_back(filament_position(y, m));
            }
            for (std::size_t b : slice) {
                double acc = 1.0;
                if (informed && b != a) acc = std::min(1.0, hypercube_weights_at(s, filament_state(b, m, d))[i] / wx[i]);
                double mass = wx[i] / double(slice.size());
                P(Eigen::Index(a), Eigen::Index(b)) += mass * acc;
                P(Eigen::Index(a), Eigen::Index(a)) += mass * (1.0 - acc);
            }
        }
    }
    return P;
}

} // namespace lim
