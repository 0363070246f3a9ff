#include "lim/model_zoo/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lim/core/errors.hpp"

namespace lim {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
const double kPi = boost::math::constants::pi<double>();
const double kTwoPi = 2.0 * boost::math::constants::pi<double>();

double log_phi_normal(double z, double sigma) {
    return -0.5 * (z / sigma) * (z / sigma) - std::log(sigma) - 0.5 * std::log(kTwoPi);
}

double radius(const Vec& x) { return std::hypot(x(1), x(2)); }

// sign * exp(c0 + c1 * rho)
struct ExpTerm {
    double sign, c0, c1;
};

// log of the integral of exp(c0 + c1 rho) over [a, b]
double log_int_exp(double c0, double c1, double a, double b) {
    const double w = b - a;
    if (std::abs(c1) * w < 1e-10) return c0 + c1 * 0.5 * (a + b) + std::log(w);
    if (c1 > 0) return c0 + c1 * b + std::log(-std::expm1(-c1 * w)) - std::log(c1);
    return c0 + c1 * a + std::log(-std::expm1(c1 * w)) - std::log(-c1);
}

// Signed log-sum-exp; a non-positive total (rounding) maps to -inf.
double log_sum_signed(const std::vector<std::pair<double, double>>& terms) {
    double m = kNegInf;
    for (const auto& t : terms) m = std::max(m, t.second);
    if (m == kNegInf) return kNegInf;
    double s = 0.0;
    for (const auto& t : terms) s += t.first * std::exp(t.second - m);
    return s > 0.0 ? m + std::log(s) : kNegInf;
}

// log of the axial factor: Laplace mass of [-l, b] seen from x1.
double log_axial(double lambda, double l, double b, double x1) {
    double tail = std::log(0.5) + std::log1p(-std::exp(-lambda * (b + l)));
    if (x1 >= b) return -lambda * (x1 - b) + tail;
    if (x1 <= -l) return -lambda * (-l - x1) + tail;
    return std::log(1.0 - 0.5 * std::exp(-lambda * (b - x1)) - 0.5 * std::exp(-lambda * (x1 + l)));
}
} // namespace

void validate(const CylinderSpec& s) {
    if (!(s.r > 0.0 && s.r < s.R)) throw InvalidArgument("cylinder needs 0 < r < R");
    if (!(s.lambda > 0.0)) throw InvalidArgument("noise rate lambda must be > 0");
    if (!(s.eps >= 0.0 && s.eps <= 1.0)) throw InvalidArgument("eps must lie in [0,1]");
    if (!(s.sigma > 0.0)) throw InvalidArgument("sigma must be > 0");
    if (s.n < 3) throw InvalidArgument("need at least 3 control points");
}

ControlPoints control_points(const CylinderSpec& s) {
    ControlPoints cp;
    const int n = s.n;
    cp.mu.resize(std::size_t(n));
    cp.nu.resize(std::size_t(n));
    cp.mu[0] = 0.0;
    cp.nu[0] = s.R;
    for (int j = 2; j <= n - 1; ++j) {
        cp.mu[std::size_t(j - 1)] = (s.R - s.r) * double(j - 1) / double(n - 2);
        cp.nu[std::size_t(j - 1)] = s.R - cp.mu[std::size_t(j - 1)];
    }
    cp.mu[std::size_t(n - 1)] = s.R - s.r + s.long_height();
    cp.nu[std::size_t(n - 1)] = s.r;
    return cp;
}

double axial_extent(const CylinderSpec& s, double rho) {
    return rho <= s.r ? s.R - s.r + s.long_height() : s.R - rho;
}

// The radius integral is closed form for a fixed angle: the planar Laplace
// exponent is piecewise linear in rho and the axial Laplace mass of
// [-l, R - rho] is a sum of exponentials linear in rho. Only the angle is
// integrated numerically.
double cylinder_log_density(const CylinderSpec& s, const Vec& x) {
    const double lam = s.lambda, l = s.short_height(), R = s.R, r = s.r;
    const double x1 = x(0), x2 = x(1), x3 = x(2), rx = radius(x);
    const double v = x1 + l;
    // axial mass below r (constant) and above r (terms in rho)
    const double log_f_core = log_axial(lam, l, axial_extent(s, 0.0), x1);
    const double log_half = std::log(0.5);
    const double split_u = R - x1;  // rho where R - rho crosses x1
    auto axial_terms = [&](bool u_nonneg, std::vector<ExpTerm>& out) {
        out.clear();
        if (u_nonneg) {
            if (v > 0) out.push_back({1.0, std::log1p(-0.5 * std::exp(-lam * v)), 0.0});
            else out.push_back({1.0, log_half + lam * v, 0.0});
            out.push_back({-1.0, log_half - lam * (R - x1), lam});
        } else {
            out.push_back({1.0, log_half + lam * (R - x1), -lam});
            out.push_back({-1.0, log_half - lam * v, 0.0});
        }
    };

    std::vector<double> cuts;
    std::vector<ExpTerm> fterms;
    std::vector<std::pair<double, double>> acc;
    auto h = [&](double phi) {
        const double c = std::cos(phi), sn = std::sin(phi);
        cuts.assign({0.0, R, r});
        if (split_u > r && split_u < R) cuts.push_back(split_u);
        if (c != 0.0 && x2 / c > 0.0 && x2 / c < R) cuts.push_back(x2 / c);
        if (sn != 0.0 && x3 / sn > 0.0 && x3 / sn < R) cuts.push_back(x3 / sn);
        std::sort(cuts.begin(), cuts.end());
        acc.clear();
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k], b = cuts[k + 1];
            if (!(b > a)) continue;
            const double mid = 0.5 * (a + b);
            const double s2 = x2 - mid * c >= 0 ? 1.0 : -1.0, s3 = x3 - mid * sn >= 0 ? 1.0 : -1.0;
            const double A0 = -lam * (s2 * x2 + s3 * x3), A1 = lam * (s2 * c + s3 * sn);
            if (mid < r) {
                acc.push_back({1.0, log_f_core + log_int_exp(A0, A1, a, b)});
                continue;
            }
            axial_terms(R - x1 - mid >= 0.0, fterms);
            for (const auto& t : fterms) acc.push_back({t.sign, t.c0 + log_int_exp(A0, A1 + t.c1, a, b)});
        }
        return log_sum_signed(acc);
    };

    const double centre = rx > 0.0 ? std::atan2(x3, x2) : 0.0;
    std::vector<double> nodes = {centre - kPi, centre, centre + kPi};
    const double width = rx > 0.0 ? std::min(kPi / 4, 1.0 / (lam * rx)) : kPi / 4;
    for (double f : {1.0, 4.0, 16.0, 64.0}) {
        if (f * width >= kPi) break;
        nodes.push_back(centre - f * width);
        nodes.push_back(centre + f * width);
    }
    for (int k = -4; k <= 4; ++k) {
        double q = k * kPi / 2;
        if (q > centre - kPi && q < centre + kPi) nodes.push_back(q);
    }
    std::sort(nodes.begin(), nodes.end());
    double M = kNegInf;
    for (double p : nodes) M = std::max(M, h(p));
    for (int k = 0; k < 32; ++k) M = std::max(M, h(centre - kPi + kTwoPi * (k + 0.5) / 32));
    if (!std::isfinite(M)) return kNegInf;
    double I = 0.0;
    auto g = [&](double phi) { return std::exp(h(phi) - M); };
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k) {
        if (nodes[k + 1] - nodes[k] < 1e-15) continue;
        I += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(g, nodes[k], nodes[k + 1], 15, 1e-8);
    }
    return 2.0 * std::log(lam / 2.0) - std::log(kTwoPi * s.profile_area()) + M + std::log(I);
}

namespace {
SimplexWeights inverse_distance(const std::vector<double>& dist) {
    std::vector<double> w(dist.size());
    for (std::size_t j = 0; j < dist.size(); ++j) {
        if (dist[j] == 0.0) return SimplexWeights::delta(dist.size(), j);
        w[j] = 1.0 / dist[j];
    }
    return simplex_normalize(w);
}
} // namespace

SimplexWeights cylinder_axial_weights(const CylinderSpec& s, const ControlPoints& cp, const Vec& x) {
    const std::size_t n = cp.nu.size();
    double rho = radius(x);
    if (rho < s.r) return SimplexWeights::delta(n, n - 1);
    std::vector<double> dist(n);
    for (std::size_t j = 0; j < n; ++j) dist[j] = std::abs(rho - cp.nu[j]);
    return inverse_distance(dist);
}

SimplexWeights cylinder_radial_weights(const CylinderSpec& s, const ControlPoints& cp, const Vec& x) {
    const std::size_t n = cp.mu.size();
    double x1 = x(0);
    if (x1 < 0.0) return SimplexWeights::delta(n, 0);
    if (x1 > s.R - s.r) return SimplexWeights::delta(n, n - 1);
    std::vector<double> dist(n);
    for (std::size_t j = 0; j < n; ++j) dist[j] = std::abs(x1 - cp.mu[j]);
    return inverse_distance(dist);
}

double axial_proposal_logpdf(const CylinderSpec& s, const ControlPoints& cp, std::size_t j, double from, double to) {
    const double l = s.short_height();
    double rw = s.eps > 0.0 ? s.eps * std::exp(log_phi_normal(to - from, s.sigma)) : 0.0;
    double ind = (to > -l && to < cp.mu[j]) ? (1.0 - s.eps) / (cp.mu[j] + l) : 0.0;
    double v = rw + ind;
    return v > 0.0 ? std::log(v) : kNegInf;
}

double radial_proposal_logpdf(const CylinderSpec& s, const ControlPoints& cp, std::size_t j, double rho_from,
                              double rho_to) {
    if (!(rho_to > 0.0)) return kNegInf;
    double rw = 0.0;
    if (s.eps > 0.0)
        rw = s.eps *
             (std::exp(log_phi_normal(rho_to - rho_from, s.sigma)) + std::exp(log_phi_normal(-rho_to - rho_from, s.sigma))) /
             (kTwoPi * rho_to);
    double ind = rho_to < cp.nu[j] ? (1.0 - s.eps) / (kTwoPi * cp.nu[j] * rho_to) : 0.0;
    double v = rw + ind;
    return v > 0.0 ? std::log(v) : kNegInf;
}

CylinderSetup cylinder_setup(const CylinderSpec& s) {
    validate(s);
    CylinderSetup c;
    c.spec = s;
    c.cp = control_points(s);
    auto cp = std::make_shared<const ControlPoints>(c.cp);
    c.log_density = [s](const Vec& x) { return cylinder_log_density(s, x); };
    const std::size_t n = std::size_t(s.n);
    const double l = s.short_height();
    c.axial.kernels.log_target = c.log_density;
    c.radial.kernels.log_target = c.log_density;
    for (std::size_t j = 0; j < n; ++j) {
        Kernel<Vec> a;
        a.tag = KernelTag::MetropolisHastings;
        a.name = "axial" + std::to_string(j + 1);
        a.mh.log_target = c.log_density;
        a.mh.propose = [s, cp, j, l](const Vec& x, RngStream& rng) {
            Vec y = x;
            if (rng.uniform() < s.eps)
                y(0) = x(0) + s.sigma * rng.normal();
            else
                y(0) = -l + rng.uniform() * (cp->mu[j] + l);
            return y;
        };
        a.mh.log_q = [s, cp, j](const Vec& from, const Vec& to) {
            if (from(1) != to(1) || from(2) != to(2)) return kNegInf;
            return axial_proposal_logpdf(s, *cp, j, from(0), to(0));
        };
        c.axial.kernels.kernels.push_back(std::move(a));

        Kernel<Vec> b;
        b.tag = KernelTag::MetropolisHastings;
        b.name = "radial" + std::to_string(j + 1);
        b.mh.log_target = c.log_density;
        b.mh.propose = [s, cp, j](const Vec& x, RngStream& rng) {
            Vec y = x;
            double rad;
            if (rng.uniform() < s.eps)
                rad = radius(x) + s.sigma * rng.normal();
            else
                rad = cp->nu[j] * (2.0 * rng.uniform() - 1.0);
            double ang = kTwoPi * rng.uniform();
            y(1) = rad * std::cos(ang);
            y(2) = rad * std::sin(ang);
            return y;
        };
        b.mh.log_q = [s, cp, j](const Vec& from, const Vec& to) {
            if (from(0) != to(0)) return kNegInf;
            return radial_proposal_logpdf(s, *cp, j, radius(from), radius(to));
        };
        c.radial.kernels.kernels.push_back(std::move(b));
    }
    c.axial.informed = WeightFunction<Vec>::closed_form(n, [s, cp](const Vec& x) {
        return cylinder_axial_weights(s, *cp, x);
    });
    c.radial.informed = WeightFunction<Vec>::closed_form(n, [s, cp](const Vec& x) {
        return cylinder_radial_weights(s, *cp, x);
    });
    c.axial.uninformed = c.radial.uninformed = SimplexWeights::uniform(n);
    c.iid = [s, l](RngStream& rng) {
        double x1, rho;
        switch (rng.below(3)) {
        case 0:
            x1 = -l * rng.uniform();
            rho = s.R * rng.uniform();
            break;
        case 1:
            do {
                x1 = (s.R - s.r) * rng.uniform();
                rho = s.R * rng.uniform();
            } while (rho > s.R - x1);
            break;
        default:
            x1 = s.R - s.r + s.long_height() * rng.uniform();
            rho = s.r * rng.uniform();
        }
        double ang = kTwoPi * rng.uniform();
        Vec x(3);
        x << x1, rho * std::cos(ang), rho * std::sin(ang);
        for (Eigen::Index i = 0; i < 3; ++i) x(i) += (rng.uniform() < 0.5 ? -1.0 : 1.0) * rng.exponential() / s.lambda;
        return x;
    };
    c.start = [s](RngStream& rng) {
        Vec x(3);
        double off = s.r / std::sqrt(8.0);
        x << s.R - s.r + s.long_height() + 0.1 * rng.normal(), off + 0.1 * rng.normal(), off + 0.1 * rng.normal();
        return x;
    };
    const double R = s.R;
    c.tests = {
        {"radius", [](const Vec& x) { return radius(x); }},
        {"axial_power", [](const Vec& x) {
             double a = x(0) < 0 ? -std::pow(-x(0), 0.1) : std::pow(x(0), 0.1);
             return a / (1.0 + radius(x));
         }},
        {"beyond_R", [R](const Vec& x) { return x(0) > R ? 1.0 : 0.0; }},
        {"outer_shell", [R](const Vec& x) { return radius(x) > 0.9 * R ? 1.0 : 0.0; }},
    };
    return c;
}

StepFn<Vec> cylinder_step(const CylinderSetup& c, const VariantSpec& v) {
    StepFn<Vec> a = make_step(v, c.axial.kernels, c.axial.informed, c.axial.uninformed);
    StepFn<Vec> b = make_step(v, c.radial.kernels, c.radial.informed, c.radial.uninformed);
    // the radial family reports kernel indices offset by n so traces tell the moves apart
    const std::size_t n = c.axial.kernels.size();
    StepFn<Vec> b_shift = [b, n](const Vec& x, double lp, std::size_t t, RngStream& rng) {
        auto r = b(x, lp, t, rng);
        r.kernel += n;
        return r;
    };
    return make_alternating<Vec>({a, b_shift});
}

} // namespace lim
