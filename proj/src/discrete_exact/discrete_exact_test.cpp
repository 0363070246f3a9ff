#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lim/core/errors.hpp"
#include "lim/discrete_exact/analysis.hpp"
#include "lim/discrete_exact/folding.hpp"
#include "lim/discrete_exact/induce.hpp"
#include "lim/discrete_exact/transition_matrix.hpp"
#include "lim/model_zoo/cross.hpp"
#include "lim/model_zoo/discrete_kernels.hpp"
#include "lim/model_zoo/hypercube.hpp"
#include "lim/model_zoo/three_state.hpp"

using namespace lim;
using Idx = std::size_t;

namespace {

VariantSpec spec_of(Variant v) {
    VariantSpec s;
    s.variant = v;
    return s;
}

Eigen::VectorXd pi_of(const DiscreteTarget& t, const TransitionMatrix& P) {
    Eigen::VectorXd pi(Eigen::Index(P.size()));
    for (std::size_t k = 0; k < P.size(); ++k) pi(Eigen::Index(k)) = t.prob(P.label(k));
    return pi;
}

Eigen::VectorXd delta(std::size_t n, std::size_t i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(Eigen::Index(n));
    v(Eigen::Index(i)) = 1.0;
    return v;
}

// Sum of autocovariances truncated at `lags`, computed by repeated products.
double truncated_autocov_variance(const Eigen::MatrixXd& P, const Eigen::VectorXd& pi, Eigen::VectorXd f,
                                  int lags) {
    f.array() -= pi.dot(f);
    double v = pi.dot(f.cwiseProduct(f));
    Eigen::VectorXd g = f;
    for (int k = 1; k <= lags; ++k) {
        g = P * g;
        v += 2.0 * pi.dot(f.cwiseProduct(g));
    }
    return v;
}

struct CrossChains {
    CrossSetup c;
    TransitionMatrix informed, rsgs;
    Eigen::VectorXd pi, mu;
};

CrossChains cross_chains(int d, bool short_rule = false) {
    CrossChains out{cross_setup({d, -1.0, short_rule}), {}, {}, {}, {}};
    auto& c = out.c;
    out.informed = induce_matrix(c.kernels, c.informed, c.uninformed, spec_of(Variant::Alg1), c.target);
    out.rsgs = induce_matrix(c.kernels, c.informed, c.uninformed, spec_of(Variant::Hybrid), c.target);
    out.pi = pi_of(c.target, out.informed);
    out.mu = delta(out.informed.size(), out.informed.local(c.start));
    return out;
}

std::vector<std::size_t> taus(const TransitionMatrix& P, const CrossChains& cc) {
    std::vector<std::size_t> r;
    for (double e : {0.25, 0.1, 0.01, 0.001}) r.push_back(mixing_time(cc.mu, P, cc.pi, e, 1000000, 1));
    return r;
}

} // namespace

TEST_CASE("transition matrix construction") {
    Eigen::MatrixXd m(2, 2);
    m << 0.5, 0.5 + 1e-15, 1e-15, 1.0 - 1e-15;
    auto T = TransitionMatrix::from_dense(m);
    CHECK(T.size() == 2);
    Eigen::MatrixXd bad(2, 2);
    bad << 0.5, 0.4, 0.0, 1.0;
    CHECK_THROWS_AS(TransitionMatrix::from_dense(bad), NotStochastic);
    Eigen::MatrixXd neg(2, 2);
    neg << 1.1, -0.1, 0.0, 1.0;
    CHECK_THROWS_AS(TransitionMatrix::from_dense(neg), NotStochastic);
    auto I = TransitionMatrix::identity(4);
    CHECK((I.dense() - Eigen::MatrixXd::Identity(4, 4)).norm() == 0.0);
    CHECK_THROWS_AS(TransitionMatrix::identity(kDenseCap + 1).dense(), SpaceTooLarge);
}

TEST_CASE("induced three-state hybrid matrix equals the closed form") {
    auto ts = three_state_setup(0.2);
    auto H = induce_matrix(ts.kernels, WeightFunction<Idx>::constant(ts.uninformed), ts.uninformed,
                           spec_of(Variant::Hybrid), ts.target);
    CHECK((H.dense() - three_state_uninformed_closed(0.2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("induced small hypercube alg1 matrix is reversible") {
    HypercubeSpec hs{3, 2, 0.0};
    auto t = hypercube_target(hs);
    auto M = induce_matrix(gibbs_collection(t), hypercube_weights(hs), SimplexWeights::uniform(2),
                           spec_of(Variant::Alg1), t);
    CHECK(M.size() == 5);
    CHECK(check_detailed_balance(M, pi_of(t, M)) < 1e-12);
}

TEST_CASE("single identity kernel induces the identity") {
    DiscreteTarget t(DiscreteSpace({4}), {0.25, 0.25, 0.25, 0.25});
    KernelCollection<Idx> P;
    Kernel<Idx> k;
    k.move = [](const Idx& x, RngStream&) { return x; };
    k.enumerate = [](const Idx& x) { return std::vector<Transition<Idx>>{{x, 1.0}}; };
    P.kernels = {k};
    auto w = SimplexWeights::uniform(1);
    for (auto v : {Variant::Alg1, Variant::Hybrid}) {
        auto M = induce_matrix(P, WeightFunction<Idx>::constant(w), w, spec_of(v), t).dense();
        CHECK((M - Eigen::MatrixXd::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("induce respects the state cap") {
    auto t = hypercube_target({4, 3, 0.1});
    InduceOptions o;
    o.cap = 10;
    CHECK_THROWS_AS(induce_matrix(gibbs_collection(t), hypercube_weights({4, 3, 0.1}), SimplexWeights::uniform(3),
                                  spec_of(Variant::Alg1), t, o),
                    SpaceTooLarge);
}

TEST_CASE("detailed balance checker") {
    Eigen::MatrixXd S(3, 3);
    S << 0.5, 0.25, 0.25, 0.25, 0.5, 0.25, 0.25, 0.25, 0.5;
    Eigen::VectorXd u = Eigen::VectorXd::Constant(3, 1.0 / 3);
    CHECK(check_detailed_balance(S, u) < 1e-17);
    for (double p : {0.1, 0.25, 0.4}) {
        Eigen::Vector3d pi((1 - p) / 2, (1 - p) / 2, p);
        CHECK(check_detailed_balance(Eigen::MatrixXd(three_state_informed_closed(p)), pi) < 1e-12);
        CHECK(check_detailed_balance(Eigen::MatrixXd(three_state_uninformed_closed(p)), pi) < 1e-12);
    }
    Eigen::MatrixXd Q = S;
    Q(0, 1) += 1e-6;
    Q(0, 2) -= 1e-6;
    CHECK(check_detailed_balance(Q, u) == doctest::Approx(1e-6 / 3).epsilon(1e-6));
}

TEST_CASE("tv curves") {
    auto ts = three_state_setup(0.1);
    auto M = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg2), ts.target);
    auto pi = pi_of(ts.target, M);
    for (double v : tv_curve(pi, M, pi, 50)) CHECK(v < 1e-12);
    CHECK(mixing_time(pi, M, pi, 0.01) == 0);
    auto c = tv_curve(delta(3, 2), M, pi, 60);
    CHECK(c.size() == 61);
    for (std::size_t t = 1; t < c.size(); ++t) CHECK(c[t] <= c[t - 1] + 1e-12);

    // an aperiodic but slow chain runs past a tiny horizon
    Eigen::MatrixXd slow(2, 2);
    slow << 1 - 1e-6, 1e-6, 1e-6, 1 - 1e-6;
    Eigen::VectorXd u = Eigen::VectorXd::Constant(2, 0.5);
    CHECK_THROWS_AS(mixing_time(delta(2, 0), TransitionMatrix::from_dense(slow), u, 0.01, 100), NoConvergence);
}

TEST_CASE("tv curve crossing on the sparse hypercube") {
    HypercubeSpec hs{10, 2, 0.1};
    auto t = hypercube_target(hs);
    auto P = gibbs_collection(t);
    auto wc = SimplexWeights::uniform(2);
    auto I = induce_matrix(P, hypercube_weights(hs), wc, spec_of(Variant::Alg1), t);
    auto R = induce_matrix(P, hypercube_weights(hs), wc, spec_of(Variant::Hybrid), t);
    auto pi = pi_of(t, I);
    auto start = I.local(t.space().encode({0, 0}));
    auto ci = tv_curve(delta(I.size(), start), I, pi, 4000);
    auto cr = tv_curve(delta(R.size(), R.local(t.space().encode({0, 0}))), R, pi, 4000);
    // both chains leave the extremity identically, then the informed one falls behind
    CHECK(std::abs(ci[1] - cr[1]) < 1e-12);
    std::size_t first_above = 0;
    for (std::size_t k = 1; k < ci.size() && !first_above; ++k)
        if (ci[k] > cr[k] + 1e-12) first_above = k;
    CHECK(first_above > 0);
    CHECK(first_above < 10);
}

TEST_CASE("cross mixing times") {
    auto c5 = cross_chains(5);
    CHECK(taus(c5.informed, c5) == std::vector<std::size_t>{4, 6, 11, 16});
    CHECK(taus(c5.rsgs, c5) == std::vector<std::size_t>{5, 9, 17, 25});
    auto c8 = cross_chains(8);
    CHECK(mixing_time(c8.mu, c8.rsgs, c8.pi, 0.001, 1000000, 1) == 42);
    CHECK(taus(c8.informed, c8) == std::vector<std::size_t>{5, 8, 14, 21});
    // d = 2 needs the short index-range reading of the hyperplanes
    auto c2 = cross_chains(2, true);
    CHECK(mixing_time(c2.mu, c2.informed, c2.pi, 0.01, 1000000, 1) == 5);
}

TEST_CASE("spectral gaps") {
    auto g = [](double p, bool informed) {
        auto ts = three_state_setup(p);
        auto w = informed ? ts.informed : WeightFunction<Idx>::constant(ts.uninformed);
        return spectral_gap(induce_matrix(ts.kernels, w, ts.uninformed,
                                          spec_of(informed ? Variant::Alg2 : Variant::Hybrid), ts.target));
    };
    CHECK(g(0.25, false) == doctest::Approx(2.0 / 3).epsilon(1e-12));
    CHECK(g(0.25, true) == doctest::Approx(7.0 / 15).epsilon(1e-12));
    CHECK(spectral_gap(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3))) == 0.0);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Constant(2, 2, 0.6);
    CHECK_THROWS_AS(spectral_gap(bad), NotStochastic);
    // periodic chain: eigenvalue -1 leaves a zero gap
    Eigen::MatrixXd flip(2, 2);
    flip << 0, 1, 1, 0;
    CHECK(std::abs(spectral_gap(flip)) < 1e-12);
}

TEST_CASE("tv decays inside the spectral envelope") {
    auto ts = three_state_setup(0.1);
    auto M = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg2), ts.target);
    auto pi = pi_of(ts.target, M);
    double rate = 1.0 - spectral_gap(M);
    // for a reversible chain: TV(delta_x P^t, pi) <= 0.5 sqrt((1 - pi_x)/pi_x) rate^t
    for (Idx x = 0; x < 3; ++x) {
        double C = 0.5 * std::sqrt((1 - pi(Eigen::Index(x))) / pi(Eigen::Index(x)));
        auto c = tv_curve(delta(3, x), M, pi, 40);
        for (std::size_t t = 0; t < c.size(); ++t) CHECK(c[t] <= C * std::pow(rate, double(t)) + 1e-12);
    }
}

TEST_CASE("stationary distribution") {
    auto ts = three_state_setup(0.3);
    auto M = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg1), ts.target);
    auto s = stationary_distribution(M);
    CHECK((s - pi_of(ts.target, M)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("exact asymptotic variance") {
    auto ts = three_state_setup(0.1);
    auto M = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg2), ts.target).dense();
    Eigen::Vector3d pi(0.45, 0.45, 0.1);
    CHECK(std::abs(exact_asymptotic_variance(M, pi, Eigen::Vector3d::Constant(2.5))) < 1e-14);
    Eigen::MatrixXd iid = Eigen::VectorXd::Ones(3) * pi.transpose();
    Eigen::Vector3d f(1.0, -2.0, 4.0);
    double mean = pi.dot(f);
    double var = pi.dot((f.array() - mean).square().matrix());
    CHECK(exact_asymptotic_variance(iid, pi, f) == doctest::Approx(var).epsilon(1e-12));

    Eigen::Vector3d ind(0, 0, 1);
    auto H = induce_matrix(ts.kernels, WeightFunction<Idx>::constant(ts.uninformed), ts.uninformed,
                           spec_of(Variant::Hybrid), ts.target)
                 .dense();
    for (const Eigen::MatrixXd* P : {&M, &H}) {
        double v = exact_asymptotic_variance(*P, pi, ind);
        double oracle = truncated_autocov_variance(*P, pi, ind, 10000);
        CHECK(std::abs(v - oracle) < 1e-8);
    }
    Eigen::MatrixXd red = Eigen::MatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(exact_asymptotic_variance(red, pi, f), SingularSystem);
}

TEST_CASE("expected hitting times") {
    Eigen::MatrixXd rw(3, 3);
    rw << 0.5, 0.5, 0, 0.25, 0.5, 0.25, 0, 0.5, 0.5;
    auto h = expected_hitting_times(rw, {2});
    // h0 = 1 + h0/2 + h1/2, h1 = 1 + h0/4 + h1/2  ->  h0 = 8, h1 = 6
    CHECK(h(0) == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(h(1) == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(h(2) == 0.0);
    Eigen::MatrixXd split = Eigen::MatrixXd::Identity(3, 3);
    split.row(1) << 0, 0.5, 0.5;
    CHECK_THROWS_AS(expected_hitting_times(split, {2}), Unreachable);

    for (bool informed : {false, true}) {
        auto Q = folded_rate_matrix(4, 10, informed);
        double ht = expected_hitting_times(Q, {4})(0);
        CHECK(ht == doctest::Approx(informed ? 76.0 : 152.0).epsilon(1e-12));
    }
    CHECK(hitting_time_rsgs(4, 10) == 152.0);
    CHECK(hitting_time_informed(4, 10) == 76.0);
}

TEST_CASE("folding maps") {
    for (std::size_t d : {2u, 3u, 5u})
        for (std::size_t n : {3u, 4u, 10u}) {
            auto f = build_folding_maps(d, n);
            CHECK(f.gamma.rows() == Eigen::Index(2 * d + 1));
            CHECK(f.gamma.cols() == Eigen::Index((n - 1) * d + 1));
            auto I = Eigen::MatrixXd::Identity(Eigen::Index(2 * d + 1), Eigen::Index(2 * d + 1));
            CHECK((f.gamma * f.omega - I).cwiseAbs().maxCoeff() < 1e-14);
            for (Eigen::Index r = 0; r < f.omega.rows(); ++r) CHECK(f.omega.row(r).sum() == 1.0);
            for (std::size_t k = 0; k <= d; ++k) {
                Eigen::Index vrow = Eigen::Index(k * (n - 1));
                CHECK(f.omega(vrow, Eigen::Index(2 * k)) == 1.0);
                CHECK(f.omega.row(vrow).sum() == 1.0);
            }
            for (std::size_t k = 0; k < d; ++k)
                for (std::size_t s = 1; s < n - 1; ++s) {
                    CHECK(f.gamma(Eigen::Index(2 * k + 1), Eigen::Index(k * (n - 1) + s)) ==
                          doctest::Approx(1.0 / double(n - 2)).epsilon(1e-15));
                }
        }
}

TEST_CASE("folded RSGS chain has the stated rates") {
    const std::size_t d = 3, n = 10;
    auto P = filament_chain(int(d), int(n), false);
    auto f = build_folding_maps(d, n);
    auto fu = fold_unfold(P, f);
    CHECK((fu.folded - folded_rate_matrix(d, n, false)).cwiseAbs().maxCoeff() < 1e-12);
    const double alpha = 1.0 / double(d * n), beta = (1.0 - 2.0 / double(n)) / double(d);
    // alpha: edge class to either vertex, beta: vertex to an adjacent edge class
    CHECK(fu.folded(1, 0) == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(fu.folded(1, 2) == doctest::Approx(alpha).epsilon(1e-12));
    CHECK(fu.folded(0, 1) == doctest::Approx(beta).epsilon(1e-12));
    CHECK(fu.folded(2, 1) == doctest::Approx(beta).epsilon(1e-12));
    CHECK(fu.folded(2, 3) == doctest::Approx(beta).epsilon(1e-12));
    for (Eigen::Index r = 0; r < fu.unfolded.rows(); ++r) CHECK(std::abs(fu.unfolded.row(r).sum() - 1) < 1e-12);
    CHECK(spectrum_union_deviation(fu.unfolded, fu.folded, (n - 3) * d) < 1e-9);

    auto Pi = filament_chain(int(d), int(n), true);
    auto fi = fold_unfold(Pi, f);
    CHECK((fi.folded - folded_rate_matrix(d, n, true)).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(fold_unfold(Eigen::MatrixXd::Identity(5, 5), f), DimensionMismatch);
}

TEST_CASE("vertex-started laws agree on the filament and its unfolded chain") {
    const std::size_t d = 4, n = 6;
    auto f = build_folding_maps(d, n);
    for (bool informed : {false, true}) {
        auto P = filament_chain(int(d), int(n), informed);
        auto Pbar = fold_unfold(P, f).unfolded;
        for (std::size_t k = 0; k <= d; ++k) {
            Eigen::RowVectorXd a = Eigen::RowVectorXd::Zero(P.rows());
            a(Eigen::Index(k * (n - 1))) = 1.0;
            Eigen::RowVectorXd b = a;
            double dev = 0;
            for (int t = 0; t < 50; ++t) {
                a = a * P;
                b = b * Pbar;
                dev = std::max(dev, (a - b).cwiseAbs().maxCoeff());
            }
            CHECK(dev < 1e-10);
        }
    }
}

TEST_CASE("reflection coupling") {
    auto Q = folded_rate_matrix(4, 10, false);
    RngStream rng(1, 0);
    // d = 0 style degenerate: both chains start on the same state
    Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 1);
    CHECK(reflection_coupling(one, 0, rng, 10) == 0);
    CHECK_THROWS_AS(reflection_coupling(Q, 4, rng, 1), Timeout);

    // marginal of each coupled chain at t = 20
    const int R = 100000;
    Eigen::VectorXd ey = Eigen::VectorXd::Zero(9), ey2 = Eigen::VectorXd::Zero(9);
    for (int r = 0; r < R; ++r) {
        RngStream s = rng.child(std::uint64_t(r));
        auto [a, b] = reflection_coupling_at(Q, 4, s, 20);
        ey(Eigen::Index(a)) += 1.0 / R;
        ey2(Eigen::Index(b)) += 1.0 / R;
    }
    Eigen::RowVectorXd m0 = Eigen::RowVectorXd::Zero(9), m8 = m0;
    m0(0) = 1;
    m8(8) = 1;
    for (int t = 0; t < 20; ++t) {
        m0 = m0 * Q;
        m8 = m8 * Q;
    }
    CHECK(tv_distance(ey, m0.transpose()) < 0.02);
    CHECK(tv_distance(ey2, m8.transpose()) < 0.02);
}

TEST_CASE("lemma suite") {
    for (auto [d, n] : {std::pair<std::size_t, std::size_t>{4, 10}, {6, 4}, {2, 4}}) {
        auto rep = verify_lemma_suite(filament_chain(int(d), int(n), false), filament_chain(int(d), int(n), true), d, n);
        CHECK(rep.gap_folded_dev < 1e-9);
        CHECK(rep.gap_unfold_rsgs_dev < 1e-9);
        CHECK(rep.gap_unfold_delayed_dev < 1e-9);
        CHECK(rep.gamma_omega_dev < 1e-14);
        CHECK(rep.spectrum_union_dev < 1e-9);
        CHECK(rep.hit_rsgs_dev < 1e-9);
        CHECK(rep.hit_informed_dev < 1e-9);
        CHECK(rep.max_deviation() < 1e-9);
    }
}
