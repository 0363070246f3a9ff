#include "lim/model_zoo/sinusoid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/constants/constants.hpp>
#include <boost/math/distributions/normal.hpp>

namespace lim {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kPi = boost::math::constants::pi<double>();

// log of 101 a^100 (1 - cos(10 pi b)), a normalized density on the unit square
double log_phi(double a, double b) {
    double c = 1.0 - std::cos(10.0 * kPi * b);
    if (a <= 0.0 || c <= 0.0) return kNegInf;
    return std::log(101.0) + 100.0 * std::log(a) + std::log(c);
}

bool in_unit(double v) { return v >= 0.0 && v <= 1.0; }

double log_mass_window(double mean, double sigma) {
    boost::math::normal_distribution<double> nd;
    double lo = (0.0 - mean) / sigma, hi = (1.0 - mean) / sigma;
    // use the upper tail when both ends sit right of 0 to avoid cancellation
    if (lo > 0.0) return std::log(boost::math::cdf(boost::math::complement(nd, lo)) -
                                  boost::math::cdf(boost::math::complement(nd, hi)));
    return std::log(boost::math::cdf(nd, hi) - boost::math::cdf(nd, lo));
}
} // namespace

double sinusoid_log_density(const Vec& x) {
    if (!in_unit(x(0)) || !in_unit(x(1))) return kNegInf;
    double a = log_phi(x(0), x(1)), b = log_phi(x(1), x(0));
    double m = std::max(a, b);
    if (m == kNegInf) return kNegInf;
    return m + std::log(0.5 * (std::exp(a - m) + std::exp(b - m)));
}

double truncated_normal_draw(double mean, double sigma, RngStream& rng) {
    boost::math::normal_distribution<double> nd;
    double lo = (0.0 - mean) / sigma, hi = (1.0 - mean) / sigma;
    double u = rng.uniform_pos();
    double v;
    if (lo > 0.0) {
        double slo = boost::math::cdf(boost::math::complement(nd, lo));
        double shi = boost::math::cdf(boost::math::complement(nd, hi));
        v = mean + sigma * boost::math::quantile(boost::math::complement(nd, slo - u * (slo - shi)));
    } else {
        double clo = boost::math::cdf(nd, lo), chi = boost::math::cdf(nd, hi);
        v = mean + sigma * boost::math::quantile(nd, clo + u * (chi - clo));
    }
    return std::clamp(v, 0.0, 1.0);
}

double truncated_normal_logpdf(double v, double mean, double sigma) {
    if (!in_unit(v)) return kNegInf;
    double z = (v - mean) / sigma;
    return -0.5 * z * z - std::log(sigma) - 0.5 * std::log(2.0 * kPi) - log_mass_window(mean, sigma);
}

SimplexWeights sinusoid_weights_at(const Vec& x, SinusoidWeightRule rule) {
    double a = x(0), b = x(1);
    const bool prose = rule == SinusoidWeightRule::Prose;
    if (a < 0.9 && b < 0.9) return simplex_normalize({a, 1 - a, b, 1 - b});
    if (a >= 0.9 && b < 0.9)
        return prose ? simplex_normalize({1 - a, a, a, 1 - a}) : simplex_normalize({a, 1 - a, a, 1 - a});
    if (a < 0.9 && b >= 0.9)
        return prose ? simplex_normalize({b, 1 - b, 1 - b, b}) : simplex_normalize({b, 1 - b, b, 1 - b});
    return SimplexWeights::uniform(4);
}

ContinuousSetup sinusoid_setup(const SinusoidSpec& s) {
    ContinuousSetup out;
    out.log_density = sinusoid_log_density;
    out.kernels.log_target = sinusoid_log_density;
    const struct {
        const char* name;
        Eigen::Index coord;
        double sigma;
    } specs[4] = {{"x2_small", 1, s.sigma_small},
                  {"x2_large", 1, s.sigma_large},
                  {"x1_small", 0, s.sigma_small},
                  {"x1_large", 0, s.sigma_large}};
    for (const auto& sp : specs) {
        Kernel<Vec> k;
        k.tag = KernelTag::MetropolisHastings;
        k.name = sp.name;
        k.mh.log_target = sinusoid_log_density;
        Eigen::Index c = sp.coord;
        double sig = sp.sigma;
        k.mh.propose = [c, sig](const Vec& x, RngStream& rng) {
            Vec y = x;
            y(c) = truncated_normal_draw(x(c), sig, rng);
            return y;
        };
        k.mh.log_q = [c, sig](const Vec& a, const Vec& b) {
            if (a(1 - c) != b(1 - c)) return kNegInf;
            return truncated_normal_logpdf(b(c), a(c), sig);
        };
        out.kernels.kernels.push_back(std::move(k));
    }
    out.informed = WeightFunction<Vec>::closed_form(
        4, [rule = s.rule](const Vec& x) { return sinusoid_weights_at(x, rule); });
    out.uninformed = SimplexWeights::uniform(4);
    out.iid = [](RngStream& rng) {
        double a = std::pow(rng.uniform_pos(), 1.0 / 101.0);
        double b;
        do {
            b = rng.uniform();
        } while (2.0 * rng.uniform() >= 1.0 - std::cos(10.0 * kPi * b));
        Vec x(2);
        if (rng.uniform() < 0.5)
            x << a, b;
        else
            x << b, a;
        return x;
    };
    // N((0.95, 0.5), I) restricted to the unit square
    out.start = [](RngStream& rng) {
        Vec x(2);
        do {
            x << 0.95 + rng.normal(), 0.5 + rng.normal();
        } while (!in_unit(x(0)) || !in_unit(x(1)));
        return x;
    };
    out.tests = {
        {"f1", [](const Vec& x) { return 1.0 / (1.0 + std::pow(x(0), 100.0)); }},
        {"f2", [](const Vec& x) { return (x(1) > 0.4 && x(1) < 0.5) ? 1.0 / x(0) : 0.0; }},
        {"f3", [](const Vec& x) { return x(0) / (1.0 + x(1)); }},
        {"f4", [](const Vec& x) { return x(1) < 0.9 ? std::exp(-std::pow(x(0) - 0.8, 10.0)) : 0.0; }},
    };
    return out;
}

} // namespace lim
