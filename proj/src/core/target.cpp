#include "lim/core/target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lim/core/errors.hpp"

namespace lim {

DiscreteTarget::DiscreteTarget(DiscreteSpace space, std::vector<double> probs, std::vector<bool> mask)
    : space_(std::move(space)), probs_(std::move(probs)), mask_(std::move(mask)) {
    if (probs_.size() != space_.total_states()) throw DimensionMismatch("probs size != state count");
    if (!mask_.empty() && mask_.size() != probs_.size()) throw DimensionMismatch("mask size != state count");
    double s = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p) || p < 0.0) throw InvalidArgument("invalid probability mass");
        s += p;
    }
    if (std::abs(s - 1.0) > 1e-12) throw InvalidArgument("target masses do not sum to 1");
    logp_.resize(probs_.size());
    for (std::size_t i = 0; i < probs_.size(); ++i)
        logp_[i] = probs_[i] > 0.0 ? std::log(probs_[i]) : -std::numeric_limits<double>::infinity();
}

DiscreteTarget DiscreteTarget::from_log_weights(DiscreteSpace space, const std::vector<double>& logw,
                                                std::vector<bool> mask) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : logw) {
        if (std::isnan(v) || v == std::numeric_limits<double>::infinity())
            throw NonFinite("log weight is NaN or +inf");
        mx = std::max(mx, v);
    }
    if (!std::isfinite(mx)) throw AllZero("all log weights are -inf");
    double s = 0.0;
    for (double v : logw) s += std::exp(v - mx);
    double lz = mx + std::log(s);
    std::vector<double> p(logw.size());
    for (std::size_t i = 0; i < logw.size(); ++i) p[i] = std::exp(logw[i] - lz);
    // renormalize the rounding residue
    double t = 0.0;
    for (double v : p) t += v;
    for (double& v : p) v /= t;
    DiscreteTarget out(std::move(space), std::move(p), std::move(mask));
    for (std::size_t i = 0; i < logw.size(); ++i) out.logp_[i] = logw[i] - lz;
    return out;
}

double DiscreteTarget::filament_mass() const {
    double s = 0.0;
    for (std::size_t i = 0; i < probs_.size(); ++i)
        if (in_filament(i)) s += probs_[i];
    return s;
}

std::vector<std::size_t> DiscreteTarget::support() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < probs_.size(); ++i)
        if (probs_[i] > 0.0) out.push_back(i);
    return out;
}

} // namespace lim
