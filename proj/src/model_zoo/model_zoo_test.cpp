#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lim/core/errors.hpp"
#include "lim/model_zoo/cross.hpp"
#include "lim/model_zoo/discrete_kernels.hpp"
#include "lim/model_zoo/hypercube.hpp"
#include "lim/model_zoo/mixture.hpp"
#include "lim/model_zoo/sinusoid.hpp"
#include "lim/model_zoo/three_state.hpp"

using namespace lim;
using Idx = std::size_t;

namespace {

bool valid_simplex(const SimplexWeights& w) {
    double s = 0;
    for (Idx i = 0; i < w.size(); ++i) {
        if (!(w[i] >= 0.0)) return false;
        s += w[i];
    }
    return std::abs(s - 1.0) < 1e-12;
}

double total(const DiscreteTarget& t) { return std::accumulate(t.probs().begin(), t.probs().end(), 0.0); }

} // namespace

TEST_CASE("hypercube target") {
    auto t0 = hypercube_target({10, 3, 0.0});
    CHECK(t0.support().size() == 28);
    CHECK(t0.filament_mass() == doctest::Approx(1.0).epsilon(1e-14));
    for (Idx i = 0; i < t0.size(); ++i)
        if (!t0.in_filament(i)) CHECK(t0.prob(i) == 0.0);
    auto t1 = hypercube_target({10, 3, 0.1});
    for (Idx i = 0; i < t1.size(); ++i)
        if (!t1.in_filament(i)) CHECK(t1.prob(i) == doctest::Approx(0.1 / (1000 - 28)).epsilon(1e-14));
    CHECK(std::abs(total(t1) - 1.0) < 1e-12);
    CHECK_THROWS_AS(hypercube_target({2, 3, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(hypercube_target({10, 3, 1.0}), InvalidArgument);
    CHECK_THROWS_AS(hypercube_target({10, 7, 0.0}), SpaceTooLarge);
}

TEST_CASE("filament ordering") {
    const int m = 5, d = 3;
    CHECK(filament_size(m, d) == 13);
    for (Idx pos = 0; pos < filament_size(m, d); ++pos) {
        auto x = filament_state(pos, m, d);
        CHECK(on_filament(x, m));
        CHECK(filament_position(x, m) == pos);
    }
    CHECK(filament_state(0, m, d) == Coords{0, 0, 0});
    CHECK(filament_state(4, m, d) == Coords{4, 0, 0});
    CHECK(filament_state(12, m, d) == Coords{4, 4, 4});
    CHECK_FALSE(on_filament({1, 1, 0}, m));
}

TEST_CASE("hypercube weights") {
    HypercubeSpec s{10, 4, 0.0};
    // interior of the second edge moves only along direction 2 (index 1)
    auto w = hypercube_weights_at(s, {9, 4, 0, 0});
    CHECK(w.values() == std::vector<double>{0, 1, 0, 0});
    // vertex joining the second and third edges
    auto v = hypercube_weights_at(s, {9, 9, 0, 0});
    CHECK(v.values() == std::vector<double>{0, 0.5, 0.5, 0});
    // first vertex only has its own edge
    CHECK(hypercube_weights_at(s, {0, 0, 0, 0}).values() == std::vector<double>{1, 0, 0, 0});
    HypercubeSpec sp{10, 4, 0.1};
    auto off = hypercube_weights_at(sp, {3, 3, 3, 3});
    for (Idx i = 0; i < 4; ++i) CHECK(off[i] == 0.25);
    // on the filament: p spread over the exit directions, 1-p over the rest
    auto e = hypercube_weights_at(sp, {9, 4, 0, 0});
    CHECK(e[1] == doctest::Approx(0.9));
    CHECK(e[0] == doctest::Approx(0.1 / 3));
    CHECK(e[3] == doctest::Approx(0.1 / 3));
    auto ex = exit_directions({9, 4, 0, 0}, 10);
    CHECK(ex == std::vector<bool>{true, false, true, true});

    RngStream rng(1, 0);
    auto wf = hypercube_weights(sp);
    auto t = hypercube_target({10, 4, 0.1});
    for (int k = 0; k < 10000; ++k) CHECK(valid_simplex(wf(Idx(rng.below(t.size())))));
}

TEST_CASE("filament chain equals the induced chain restricted to the filament") {
    // p = 0 Gibbs on the full cube never leaves the filament
    const int d = 3, m = 5;
    auto t = hypercube_target({m, d, 0.0});
    auto P = gibbs_collection(t);
    auto order = filament_order(t.space(), m);
    for (bool informed : {false, true}) {
        auto F = filament_chain(d, m, informed);
        for (Idx a = 0; a < order.size(); ++a) {
            Coords x = t.space().decode(order[a]);
            auto w = informed ? hypercube_weights_at({m, d, 0.0}, x) : SimplexWeights::uniform(d);
            // row of the chain from the Gibbs enumeration
            Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(Eigen::Index(order.size()));
            for (Idx i = 0; i < Idx(d); ++i) {
                if (w[i] == 0) continue;
                for (auto tr : P[i].enumerate(order[a])) {
                    Idx b = filament_position(t.space().decode(tr.to), m);
                    double acc = 1.0;
                    if (informed && b != a)
                        acc = std::min(1.0, hypercube_weights_at({m, d, 0.0}, t.space().decode(tr.to))[i] / w[i]);
                    row(Eigen::Index(b)) += w[i] * tr.prob * acc;
                    row(Eigen::Index(a)) += w[i] * tr.prob * (1 - acc);
                }
            }
            CHECK((row - F.row(Eigen::Index(a))).cwiseAbs().maxCoeff() < 1e-14);
        }
    }
}

TEST_CASE("three-state setup") {
    auto ts = three_state_setup(0.1);
    CHECK(ts.target.prob(0) == doctest::Approx(0.45));
    CHECK(ts.target.prob(2) == doctest::Approx(0.1));
    auto w = ts.informed(0);
    CHECK(w[0] == doctest::Approx(0.45 / 0.55).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(0.1 / 0.55).epsilon(1e-14));
    CHECK(ts.uninformed.values() == std::vector<double>{0.5, 0.5});
    RngStream rng(2, 0);
    CHECK(ts.kernels[0].mh.propose(2, rng) == 0);
    CHECK(ts.kernels[1].mh.propose(2, rng) == 1);
    CHECK(ts.kernels[1].mh.propose(0, rng) == 2);
    CHECK_THROWS_AS(three_state_setup(0.0), InvalidArgument);
}

TEST_CASE("cross setup") {
    auto c = cross_setup({3});
    CHECK(std::abs(total(c.target) - 1.0) < 1e-12);
    const auto& sp = c.target.space();
    CHECK(c.start == sp.encode({0, 0, 0}));
    auto w = c.informed(sp.encode({2, 0, 0}));
    // marginal sums: 3, 3 and 1 + 2e-6 (two background states in the third slice)
    double z = 3 + 3 + 1 + 2e-6;
    CHECK(w[0] == doctest::Approx(3 / z).epsilon(1e-14));
    CHECK(w[1] == doctest::Approx(3 / z).epsilon(1e-14));
    CHECK(w[2] == doctest::Approx((1 + 2e-6) / z).epsilon(1e-14));
    CHECK(w[0] / w[2] == doctest::Approx(3.0 / (1 + 2e-6)).epsilon(1e-14));
    // d = 2: both hyperplanes are the whole space
    auto c2 = cross_setup({2});
    for (Idx i = 0; i < c2.target.size(); ++i) CHECK(c2.target.prob(i) == doctest::Approx(1.0 / 9));
    auto w2 = c2.informed(0);
    CHECK(w2[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(cross_setup({11}), SpaceTooLarge);
    RngStream rng(3, 0);
    auto c5 = cross_setup({5});
    for (int k = 0; k < 10000; ++k) CHECK(valid_simplex(c5.informed(Idx(rng.below(c5.target.size())))));
}

TEST_CASE("gibbs and MH coordinate collections") {
    DiscreteTarget t(DiscreteSpace({3, 2}), {0.1, 0.2, 0.1, 0.3, 0.2, 0.1});
    auto g = gibbs_collection(t);
    CHECK(g.size() == 2);
    auto row = g[0].enumerate(0);
    double s = 0;
    for (auto tr : row) s += tr.prob;
    CHECK(s == doctest::Approx(1.0));
    auto mh = mh_coordinate_collection(t);
    CHECK(mh.all_mh());
    CHECK(mh[1].mh.log_q(0, 3) == doctest::Approx(std::log(0.5)));
}

TEST_CASE("sinusoid") {
    auto u = sinusoid_weights_at(Vec::Constant(2, 0.5));
    for (Idx i = 0; i < 4; ++i) CHECK(u[i] == doctest::Approx(0.25));
    Vec x(2);
    x << 0.95, 0.5;
    auto w = sinusoid_weights_at(x);
    CHECK(w[0] == doctest::Approx(0.95 / 2));
    CHECK(w[1] == doctest::Approx(0.05 / 2));
    CHECK(w[2] == doctest::Approx(0.95 / 2));
    CHECK(w[3] == doctest::Approx(0.05 / 2));
    // text reading: near x1 = 1 favour the large x2 move and the small x1 move, and mirror near x2 = 1
    auto p = sinusoid_weights_at(x, SinusoidWeightRule::Prose);
    CHECK(p[0] == doctest::Approx(0.05 / 2));
    CHECK(p[1] == doctest::Approx(0.95 / 2));
    CHECK(p[2] == doctest::Approx(0.95 / 2));
    CHECK(p[3] == doctest::Approx(0.05 / 2));
    Vec y(2);
    y << 0.5, 0.95;
    auto q = sinusoid_weights_at(y, SinusoidWeightRule::Prose);
    CHECK(q[0] == doctest::Approx(0.95 / 2));
    CHECK(q[3] == doctest::Approx(0.95 / 2));
    CHECK(sinusoid_weights_at(Vec::Constant(2, 0.3), SinusoidWeightRule::Prose)[1] ==
          doctest::Approx(sinusoid_weights_at(Vec::Constant(2, 0.3))[1]));
    RngStream rng(4, 0);
    for (int k = 0; k < 10000; ++k) {
        Vec a(2);
        a << rng.uniform(), rng.uniform();
        Vec b(2);
        b << a(1), a(0);
        CHECK(std::abs(sinusoid_log_density(a) - sinusoid_log_density(b)) < 1e-14);
        CHECK(valid_simplex(sinusoid_weights_at(a)));
        CHECK(valid_simplex(sinusoid_weights_at(a, SinusoidWeightRule::Prose)));
    }
    Vec out(2);
    out << 1.2, 0.5;
    CHECK(sinusoid_log_density(out) == -INFINITY);
    // normalized: integrates to 1 over the unit square
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    auto inner = [&](double a) {
        return gk.integrate([&](double b) { return std::exp(sinusoid_log_density((Vec(2) << a, b).finished())); }, 0.0,
                            1.0, 10, 1e-12);
    };
    CHECK(gk.integrate(inner, 0.0, 1.0, 10, 1e-10) == doctest::Approx(1.0).epsilon(1e-6));
    auto st = sinusoid_setup();
    for (int k = 0; k < 1000; ++k) {
        Vec s0 = st.start(rng);
        CHECK((s0.array() >= 0).all());
        CHECK((s0.array() <= 1).all());
        CHECK(std::isfinite(st.log_density(st.iid(rng))));
    }
}

TEST_CASE("truncated normal") {
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    for (double m : {0.0, 0.3, 1.0})
        for (double s : {0.01, 1.0}) {
            double I = gk.integrate([&](double v) { return std::exp(truncated_normal_logpdf(v, m, s)); }, 0.0, 1.0, 15,
                                    1e-12);
            CHECK(I == doctest::Approx(1.0).epsilon(1e-8));
        }
    RngStream rng(5, 0);
    double sum = 0;
    const int N = 200000;
    for (int k = 0; k < N; ++k) {
        double v = truncated_normal_draw(0.0, 1.0, rng);
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
        sum += v;
    }
    double mean = gk.integrate([&](double v) { return v * std::exp(truncated_normal_logpdf(v, 0.0, 1.0)); }, 0.0, 1.0);
    CHECK(std::abs(sum / N - mean) < 4 * 0.3 / std::sqrt(double(N)));
}

TEST_CASE("mixture") {
    for (double theta : {10.0, 100.0, 1000.0}) {
        auto mu = mixture_means(theta);
        Vec m = (mu[0] + mu[1] + mu[2]) / 3.0;
        CHECK(m(0) == doctest::Approx(-4 * std::sqrt(theta) / 3));
        CHECK(std::abs(m(1)) < 1e-12);
        CHECK(m(2) == doctest::Approx(2 * std::sqrt(theta) / 3));
    }
    MixtureSpec s{1000.0};
    auto mu = mixture_means(1000.0);
    for (Idx k = 0; k < 3; ++k) CHECK(mixture_responsibilities(s, mu[k])[k] > 0.99);
    auto w = mixture_weights_at(s, mu[0]);
    double norm = 1 + 2 * s.eps + 0.125 + 0.5;
    CHECK(w[0] == doctest::Approx(1 / norm).epsilon(1e-6));
    CHECK(w[1] == doctest::Approx(s.eps / norm).epsilon(1e-6));
    CHECK(w[2] == doctest::Approx(s.eps / norm).epsilon(1e-6));
    CHECK(w[3] == doctest::Approx(0.125 / norm).epsilon(1e-6));
    CHECK(w[4] == doctest::Approx(0.25 / norm).epsilon(1e-6));

    auto ms = mixture_setup({100.0});
    CHECK(ms.kernels.size() == 6);
    CHECK(ms.kernels.all_mh());
    RngStream rng(6, 0);
    Vec acc = Vec::Zero(3);
    const int N = 300000;
    for (int k = 0; k < N; ++k) {
        Vec x = ms.iid(rng);
        CHECK(std::isfinite(ms.log_density(x)));
        acc += x;
        if (k < 10000) CHECK(valid_simplex(ms.informed(x)));
    }
    acc /= N;
    CHECK(acc(0) == doctest::Approx(-40.0 / 3).epsilon(0.02));
    CHECK(std::abs(acc(1)) < 0.15);
    CHECK(acc(2) == doctest::Approx(20.0 / 3).epsilon(0.03));
    CHECK_THROWS_AS(mixture_setup({-1.0}), InvalidArgument);
}
