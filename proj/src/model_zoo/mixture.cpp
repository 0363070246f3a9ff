#include "lim/model_zoo/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/constants/constants.hpp>

#include "lim/core/errors.hpp"

namespace lim {

void validate(const MixtureSpec& s) {
    if (!(s.theta > 0.0)) throw InvalidArgument("theta must be > 0");
    if (!(s.eps > 0.0)) throw InvalidArgument("eps must be > 0");
    if (!(s.sigma_small > 0.0)) throw InvalidArgument("sigma_small must be > 0");
}

std::array<Vec, 3> mixture_means(double theta) {
    double s = std::sqrt(theta);
    std::array<Vec, 3> m;
    for (auto& v : m) v.resize(3);
    m[0] << 0, 2 * s, 0;
    m[1] << -2 * s, 0, 0;
    m[2] << -2 * s, -2 * s, 2 * s;
    return m;
}

namespace {
// log N(x; mean_k, Sigma_k), Sigma_k diagonal with theta at coordinate k
std::array<double, 3> component_logs(double theta, const Vec& x) {
    static const double half_log_2pi = 0.5 * std::log(2.0 * boost::math::constants::pi<double>());
    auto mu = mixture_means(theta);
    std::array<double, 3> out;
    for (int k = 0; k < 3; ++k) {
        double acc = 0.0;
        for (int j = 0; j < 3; ++j) {
            double var = j == k ? theta : 1.0;
            double z = x(j) - mu[std::size_t(k)](j);
            acc += -0.5 * z * z / var - 0.5 * std::log(var) - half_log_2pi;
        }
        out[std::size_t(k)] = acc;
    }
    return out;
}
} // namespace

double mixture_log_density(const MixtureSpec& s, const Vec& x) {
    auto l = component_logs(s.theta, x);
    double m = std::max({l[0], l[1], l[2]});
    return m + std::log((std::exp(l[0] - m) + std::exp(l[1] - m) + std::exp(l[2] - m)) / 3.0);
}

std::array<double, 3> mixture_responsibilities(const MixtureSpec& s, const Vec& x) {
    auto l = component_logs(s.theta, x);
    double m = std::max({l[0], l[1], l[2]});
    std::array<double, 3> xi;
    double tot = 0.0;
    for (int k = 0; k < 3; ++k) tot += xi[std::size_t(k)] = std::exp(l[std::size_t(k)] - m);
    for (auto& v : xi) v /= tot;
    return xi;
}

SimplexWeights mixture_weights_at(const MixtureSpec& s, const Vec& x) {
    auto xi = mixture_responsibilities(s, x);
    std::vector<double> w(6, 0.0);
    for (int k = 0; k < 3; ++k) {
        double row0[3], row1[3];
        for (int c = 0; c < 3; ++c) {
            row0[c] = c == k ? 1.0 : s.eps;
            row1[c] = c == k ? 0.125 : 0.25;
        }
        double norm = 0.0;
        for (int c = 0; c < 3; ++c) norm += row0[c] + row1[c];
        for (int c = 0; c < 3; ++c) {
            w[std::size_t(c)] += xi[std::size_t(k)] * row0[c] / norm;
            w[std::size_t(3 + c)] += xi[std::size_t(k)] * row1[c] / norm;
        }
    }
    return simplex_normalize(w);
}

ContinuousSetup mixture_setup(const MixtureSpec& s) {
    validate(s);
    ContinuousSetup out;
    const double sig_large = s.sigma_large > 0.0 ? s.sigma_large : std::sqrt(s.theta);
    out.log_density = [s](const Vec& x) { return mixture_log_density(s, x); };
    out.kernels.log_target = out.log_density;
    for (int row = 0; row < 2; ++row)
        for (int c = 0; c < 3; ++c)
            out.kernels.kernels.push_back(gaussian_rw_kernel(
                std::string(row == 0 ? "large_x" : "small_x") + std::to_string(c + 1), c,
                row == 0 ? sig_large : s.sigma_small, out.log_density));
    out.informed = WeightFunction<Vec>::closed_form(6, [s](const Vec& x) { return mixture_weights_at(s, x); });
    out.uninformed = SimplexWeights::uniform(6);
    const double theta = s.theta;
    out.iid = [theta](RngStream& rng) {
        auto mu = mixture_means(theta);
        std::size_t k = std::size_t(rng.below(3));
        Vec x = mu[k];
        for (Eigen::Index j = 0; j < 3; ++j) x(j) += (Eigen::Index(k) == j ? std::sqrt(theta) : 1.0) * rng.normal();
        return x;
    };
    out.start = [theta](RngStream& rng) {
        double r = std::sqrt(theta);
        Vec x(3);
        x << 3 * r + rng.normal(), 2 * r + rng.normal(), 1 + rng.normal();
        return x;
    };
    const double two_root = 2.0 * std::sqrt(theta);
    out.tests = {
        {"ratio", [](const Vec& x) { return (x(0) + x(1)) / (100.0 + x(2)); }},
        {"ordered_decay", [](const Vec& x) { return x(0) > x(1) ? std::exp(-std::abs(x(2))) : 0.0; }},
        {"x1_tail", [two_root](const Vec& x) { return x(0) > two_root ? 1.0 : 0.0; }},
        {"scaled_sum", [two_root](const Vec& x) { return std::max((x(0) + x(1)) / two_root, 1.0); }},
    };
    return out;
}

} // namespace lim
