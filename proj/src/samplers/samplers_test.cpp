#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "lim/core/errors.hpp"
#include "lim/discrete_exact/analysis.hpp"
#include "lim/discrete_exact/induce.hpp"
#include "lim/model_zoo/cross.hpp"
#include "lim/model_zoo/discrete_kernels.hpp"
#include "lim/model_zoo/hypercube.hpp"
#include "lim/model_zoo/mixture.hpp"
#include "lim/model_zoo/three_state.hpp"
#include "lim/samplers/steps.hpp"
#include "lim/samplers/trace_io.hpp"
#include "lim/samplers/weights.hpp"

using namespace lim;
using Idx = std::size_t;

namespace {

Eigen::VectorXd pi_of(const DiscreteTarget& t, const TransitionMatrix& P) {
    Eigen::VectorXd pi(Eigen::Index(P.size()));
    for (std::size_t k = 0; k < P.size(); ++k) pi(Eigen::Index(k)) = t.prob(P.label(k));
    return pi;
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

// Empirical one-step transition matrix of a step function on a small space.
Eigen::MatrixXd empirical_matrix(const StepFn<Idx>& step, Idx n, int draws, RngStream& rng) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
    for (Idx x = 0; x < n; ++x)
        for (int k = 0; k < draws; ++k) {
            auto r = step(x, std::nan(""), 0, rng);
            M(Eigen::Index(x), Eigen::Index(r.state)) += 1.0 / draws;
        }
    return M;
}

VariantSpec spec_of(Variant v) {
    VariantSpec s;
    s.variant = v;
    return s;
}

} // namespace

TEST_CASE("alg1 with constant weights induces exactly the hybrid matrix") {
    auto ts = three_state_setup(0.2);
    auto wc = WeightFunction<Idx>::constant(ts.uninformed);
    auto A = induce_matrix(ts.kernels, wc, ts.uninformed, spec_of(Variant::Alg1), ts.target).dense();
    auto H = induce_matrix(ts.kernels, wc, ts.uninformed, spec_of(Variant::Hybrid), ts.target).dense();
    CHECK(max_abs_diff(A, H) <= 1e-14);

    CrossSetup cs = cross_setup({3});
    auto wcc = WeightFunction<Idx>::constant(cs.uninformed);
    auto A2 = induce_matrix(cs.kernels, wcc, cs.uninformed, spec_of(Variant::Alg1), cs.target).dense();
    auto H2 = induce_matrix(cs.kernels, wcc, cs.uninformed, spec_of(Variant::Hybrid), cs.target).dense();
    CHECK(max_abs_diff(A2, H2) <= 1e-14);
}

TEST_CASE("alg1 rejects a move into a state where the chosen weight vanishes") {
    // two states, one kernel that always swaps; weight of kernel 0 is zero at state 1
    KernelCollection<Idx> P;
    Kernel<Idx> k;
    k.name = "swap";
    k.move = [](const Idx& x, RngStream&) { return 1 - x; };
    k.enumerate = [](const Idx& x) { return std::vector<Transition<Idx>>{{1 - x, 1.0}}; };
    P.kernels = {k, k};
    auto w = WeightFunction<Idx>::closed_form(
        2, [](const Idx& x) { return x == 0 ? SimplexWeights({1.0, 0.0}) : SimplexWeights({0.0, 1.0}); });
    RngStream rng(1, 0);
    for (int t = 0; t < 1000; ++t) {
        auto r = step_alg1(P, w, Idx(0), std::nan(""), rng);
        CHECK(r.state == 0);
        CHECK(r.kernel == 0);  // index recorded even when rejected
        CHECK_FALSE(r.accepted);
    }
}

TEST_CASE("alg1 on the hypercube filament walk is reversible") {
    HypercubeSpec hs{10, 3, 0.0};
    auto t = hypercube_target(hs);
    auto P = gibbs_collection(t);
    auto w = hypercube_weights(hs);
    auto M = induce_matrix(P, w, SimplexWeights::uniform(3), spec_of(Variant::Alg1), t);
    CHECK(check_detailed_balance(M, pi_of(t, M)) < 1e-12);
}

TEST_CASE("alg1 sampled transitions match the induced matrix") {
    auto ts = three_state_setup(0.1);
    auto M = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg1), ts.target).dense();
    RngStream rng(2, 0);
    auto E = empirical_matrix(make_alg1(ts.kernels, ts.informed), 3, 200000, rng);
    CHECK(max_abs_diff(M, E) < 5e-3);
}

TEST_CASE("alg2 needs Metropolis-Hastings kernels") {
    auto cs = cross_setup({3});
    RngStream rng(3, 0);
    CHECK_THROWS_AS(step_alg2(cs.kernels, cs.informed, cs.start, std::nan(""), rng), KernelTagMismatch);
    CHECK_THROWS_AS(induce_matrix(cs.kernels, cs.informed, cs.uninformed, spec_of(Variant::Alg2), cs.target),
                    KernelTagMismatch);
}

TEST_CASE("alg2 with one kernel and constant weights is plain MH") {
    DiscreteTarget t(DiscreteSpace({4}), {0.1, 0.2, 0.3, 0.4});
    auto P = mh_coordinate_collection(t);
    REQUIRE(P.size() == 1);
    auto w = WeightFunction<Idx>::constant(SimplexWeights::uniform(1));
    auto M = induce_matrix(P, w, SimplexWeights::uniform(1), spec_of(Variant::Alg2), t).dense();
    Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(4, 4);
    for (int x = 0; x < 4; ++x) {
        for (int y = 0; y < 4; ++y)
            if (y != x) ref(x, y) = 0.25 * std::min(1.0, t.prob(Idx(y)) / t.prob(Idx(x)));
        ref(x, x) = 1.0 - ref.row(x).sum();
    }
    CHECK(max_abs_diff(M, ref) < 1e-14);
    RngStream a(4, 0), b(4, 0);
    auto E = empirical_matrix(make_alg2(P, w), 4, 100000, a);
    CHECK(max_abs_diff(E, ref) < 6e-3);
}

TEST_CASE("combined acceptance dominates the factored one pointwise") {
    RngStream rng(5, 0);
    for (int k = 0; k < 10000; ++k) {
        // a = pi and proposal ratio, b = weight ratio
        double a = std::exp(4.0 * (rng.uniform() - 0.5) * 3.0);
        double b = std::exp(4.0 * (rng.uniform() - 0.5) * 3.0);
        double factored = std::min(1.0, a) * std::min(1.0, b);
        double combined = std::min(1.0, a * b);
        CHECK(combined >= factored - 1e-15);
    }
}

TEST_CASE("three-state matrices match the printed closed forms") {
    auto ts = three_state_setup(0.1);
    auto Pstar = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg2), ts.target).dense();
    CHECK(max_abs_diff(Pstar, three_state_informed_closed(0.1)) < 1e-12);
    auto t2 = three_state_setup(0.2);
    auto wc = WeightFunction<Idx>::constant(t2.uninformed);
    auto H = induce_matrix(t2.kernels, wc, t2.uninformed, spec_of(Variant::Hybrid), t2.target).dense();
    CHECK(max_abs_diff(H, three_state_uninformed_closed(0.2)) < 1e-12);
    double s = 0;
    for (int i = 0; i < 3; ++i) s = std::max(s, std::abs(H.row(i).sum() - 1.0));
    CHECK(s < 1e-12);
}

TEST_CASE("hybrid with uniform weights over Gibbs kernels is the random-scan Gibbs sampler") {
    auto cs = cross_setup({3});
    auto wc = WeightFunction<Idx>::constant(cs.uninformed);
    auto H = induce_matrix(cs.kernels, wc, cs.uninformed, spec_of(Variant::Hybrid), cs.target);
    // RSGS row: (1/d) sum_i pi(y | x_{-i}) over the slice through x
    const auto& sp = cs.target.space();
    double dev = 0;
    for (Idx a = 0; a < H.size(); ++a) {
        Idx x = H.label(a);
        std::map<Idx, double> row;
        for (Idx i = 0; i < sp.dim(); ++i) {
            double z = 0;
            for (int v = 0; v < sp.card(i); ++v) z += cs.target.prob(sp.with_coord(x, i, v));
            for (int v = 0; v < sp.card(i); ++v) {
                Idx y = sp.with_coord(x, i, v);
                row[y] += cs.target.prob(y) / z / double(sp.dim());
            }
        }
        for (auto [y, p] : row) dev = std::max(dev, std::abs(H(a, H.local(y)) - p));
    }
    CHECK(dev < 1e-14);
}

TEST_CASE("hybrid with a single kernel is that kernel") {
    DiscreteTarget t(DiscreteSpace({5}), {0.1, 0.1, 0.2, 0.3, 0.3});
    auto P = gibbs_collection(t);
    auto w1 = SimplexWeights::uniform(1);
    auto H = induce_matrix(P, WeightFunction<Idx>::constant(w1), w1, spec_of(Variant::Hybrid), t).dense();
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) CHECK(H(x, y) == doctest::Approx(t.prob(Idx(y))).epsilon(1e-14));
}

TEST_CASE("delayed step") {
    auto ts = three_state_setup(0.1);
    auto inner = make_alg2(ts.kernels, ts.informed);
    RngStream a(6, 0), b(6, 0);
    auto d1 = make_delayed(inner, 1.0);
    auto ta = run_chain(inner, Idx(0), 500, a);
    auto tb = run_chain(d1, Idx(0), 500, b);
    CHECK(ta.states == tb.states);
    CHECK_THROWS_AS(make_delayed(inner, 0.0)(Idx(0), std::nan(""), 0, a), BadLambda);
    CHECK_THROWS_AS(make_delayed(inner, 1.5)(Idx(0), std::nan(""), 0, a), BadLambda);

    VariantSpec v{Variant::Delayed, Variant::Alg2, 0.3, 1.0};
    auto D = induce_matrix(ts.kernels, ts.informed, ts.uninformed, v, ts.target).dense();
    auto Ps = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg2), ts.target).dense();
    CHECK(max_abs_diff(D, 0.3 * Ps + 0.7 * Eigen::MatrixXd::Identity(3, 3)) < 1e-15);
    RngStream c(7, 0);
    auto E = empirical_matrix(make_step(v, ts.kernels, ts.informed, ts.uninformed), 3, 200000, c);
    CHECK(max_abs_diff(E, D) < 5e-3);
}

TEST_CASE("mixed step") {
    auto ts = three_state_setup(0.1);
    auto inf = make_alg2(ts.kernels, ts.informed);
    auto unf = make_hybrid(ts.kernels, ts.uninformed);
    for (double varpi : {0.0, 1.0}) {
        RngStream a(8, 0), b(8, 0);
        auto ref = run_chain(varpi == 1.0 ? inf : unf, Idx(2), 500, a);
        auto got = run_chain(make_mixed(inf, unf, varpi), Idx(2), 500, b);
        CHECK(ref.states == got.states);
    }
    VariantSpec v{Variant::Mixed, Variant::Alg2, 1.0, 0.4};
    auto M = induce_matrix(ts.kernels, ts.informed, ts.uninformed, v, ts.target);
    auto A = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Alg2), ts.target).dense();
    auto H = induce_matrix(ts.kernels, ts.informed, ts.uninformed, spec_of(Variant::Hybrid), ts.target).dense();
    CHECK(max_abs_diff(M.dense(), 0.4 * A + 0.6 * H) < 1e-15);
    CHECK(check_detailed_balance(M, pi_of(ts.target, M)) < 1e-12);
    RngStream r(1, 1);
    CHECK_THROWS_AS(make_mixed(inf, unf, 1.2)(Idx(0), std::nan(""), 0, r), InvalidArgument);
}

TEST_CASE("extended chain of alg1 preserves weight times target") {
    auto ts = three_state_setup(0.1);
    std::vector<Idx> order{0, 1, 2};
    auto J = induce_joint_alg1(ts.kernels, ts.informed, ts.target, order);
    Eigen::RowVectorXd pibar(6);
    for (Idx x = 0; x < 3; ++x) {
        auto w = ts.informed(x);
        for (Idx i = 0; i < 2; ++i) pibar(Eigen::Index(x * 2 + i)) = w[i] * ts.target.prob(x);
    }
    CHECK((pibar * J - pibar).cwiseAbs().maxCoeff() < 1e-14);
    for (Eigen::Index r = 0; r < 6; ++r) CHECK(std::abs(J.row(r).sum() - 1.0) < 1e-14);
}

TEST_CASE("particle weights") {
    // identical point-mass proposals give uniform weights
    KernelCollection<double> P;
    P.log_target = [](const double& x) { return -0.5 * x * x; };
    for (int i = 0; i < 3; ++i) {
        Kernel<double> k;
        k.tag = KernelTag::MetropolisHastings;
        k.mh.propose = [](const double& x, RngStream&) { return x + 1.0; };
        k.mh.log_q = [](const double&, const double&) { return 0.0; };
        k.mh.log_target = P.log_target;
        P.kernels.push_back(k);
    }
    RngStream rng(9, 0);
    auto w = particle_weights(P, 0.3, 5, rng);
    for (Idx i = 0; i < 3; ++i) CHECK(w[i] == doctest::Approx(1.0 / 3).epsilon(1e-14));
    // every particle at zero density falls back to uniform
    KernelCollection<double> Z = P;
    Z.log_target = [](const double&) { return -INFINITY; };
    auto wz = particle_weights(Z, 0.0, 4, rng);
    for (Idx i = 0; i < 3; ++i) CHECK(wz[i] == doctest::Approx(1.0 / 3));
    CHECK_THROWS_AS(particle_weights(P, 0.0, 0, rng), InvalidArgument);
}

TEST_CASE("particle weight variance scales like 1/L") {
    auto ms = mixture_setup({100.0});
    Vec x = mixture_means(100.0)[0];
    RngStream rng(10, 0);
    auto var_at = [&](std::size_t L) {
        const int reps = 400;
        double s = 0, s2 = 0;
        for (int r = 0; r < reps; ++r) {
            double v = particle_weights(ms.kernels, x, L, rng)[0];
            s += v;
            s2 += v * v;
        }
        double m = s / reps;
        return s2 / reps - m * m;
    };
    double v10 = var_at(10), v160 = var_at(160);
    double slope = std::log(v160 / v10) / std::log(16.0);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.25));
}

// Kernel k (large scale) and 3 + k (small scale) both move along direction k.
// Mid-edge the particle estimate prefers the small step along the edge (a large
// step keeps only exp(t^2/4)/sqrt(2) of the density at offset t*sqrt(theta)),
// so there the direction of the argmax is compared; far along the edge the
// full kernel index must agree.
TEST_CASE("particle weights pick the edge-direction kernels") {
    MixtureSpec s{1000.0};
    auto ms = mixture_setup(s);
    auto mu = mixture_means(s.theta);
    auto arg = [](const SimplexWeights& w) {
        Idx a = 0;
        for (Idx i = 1; i < w.size(); ++i)
            if (w[i] > w[a]) a = i;
        return a;
    };
    auto run = [&](double lo, double hi, bool full_index, std::uint64_t seed) {
        RngStream rng(seed, 0);
        int agree = 0;
        for (int k = 0; k < 1000; ++k) {
            Idx c = Idx(rng.below(3));
            Vec x = mu[c];
            double t = lo + (hi - lo) * rng.uniform();
            if (rng.uniform() < 0.5) t = -t;
            for (Eigen::Index j = 0; j < 3; ++j)
                x(j) += Eigen::Index(c) == j ? std::sqrt(s.theta) * t : 0.5 * rng.normal();
            Idx ip = arg(particle_weights(ms.kernels, x, 100, rng)), ic = arg(mixture_weights_at(s, x));
            agree += full_index ? ip == ic : ip % 3 == ic % 3;
        }
        return agree;
    };
    CHECK(run(0.0, 1.0, false, 11) >= 900);
    CHECK(run(2.0, 3.0, true, 12) >= 900);
}

TEST_CASE("particle-weighted alg2 leaves a Gaussian target invariant") {
    // two random-walk scales on N(0,1); exogenous noise shared between x and the proposal
    KernelCollection<double> P;
    P.log_target = [](const double& x) { return -0.5 * x * x; };
    for (double sig : {0.3, 3.0}) {
        Kernel<double> k;
        k.tag = KernelTag::MetropolisHastings;
        k.mh.propose = [sig](const double& x, RngStream& r) { return x + sig * r.normal(); };
        k.mh.log_q = [sig](const double& a, const double& b) { return -0.5 * (b - a) * (b - a) / (sig * sig); };
        k.mh.log_target = P.log_target;
        P.kernels.push_back(k);
    }
    auto step = make_alg2(P, particle_weight_function(P, 3));
    RngStream rng(12, 0);
    const std::size_t T = 200000;
    double s = 0, s2 = 0, s4 = 0;
    run_chain_visit(step, 0.0, T, rng, [&](std::size_t, const StepResult<double>& r) {
        s += r.state;
        s2 += r.state * r.state;
        s4 += std::pow(r.state, 4);
    });
    CHECK(std::abs(s / T) < 0.03);
    CHECK(std::abs(s2 / T - 1.0) < 0.04);
    CHECK(std::abs(s4 / T - 3.0) < 0.25);
}

TEST_CASE("run_chain plumbing") {
    auto ts = three_state_setup(0.3);
    auto step = make_alg1(ts.kernels, ts.informed);
    RngStream r0(13, 2);
    auto t0 = run_chain(step, Idx(1), 0, r0);
    CHECK(t0.size() == 1);
    CHECK(t0.states[0] == 1);
    RngStream a(13, 2), b(13, 2);
    auto ta = run_chain(step, Idx(1), 1000, a), tb = run_chain(step, Idx(1), 1000, b);
    CHECK(ta.states == tb.states);
    CHECK(ta.kernel_indices == tb.kernel_indices);
    CHECK(ta.accept_flags == tb.accept_flags);
    CHECK(ta.kernel_indices.size() == ta.size());
    CHECK(ta.accept_flags.size() == ta.size());
    for (auto k : ta.kernel_indices) CHECK(k < 2);
    CHECK(ta.seed == 13);
    CHECK(ta.stream == 2);
    CHECK_THROWS_AS(make_alternating(std::vector<StepFn<Idx>>{}), InvalidArgument);
}

TEST_CASE("empirical law of the cross chain at t=25 matches the exact one") {
    auto cs = cross_setup({5});
    auto wc = WeightFunction<Idx>::constant(cs.uninformed);
    auto M = induce_matrix(cs.kernels, cs.informed, cs.uninformed, spec_of(Variant::Alg1), cs.target);
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(Eigen::Index(M.size()));
    mu(Eigen::Index(M.local(cs.start))) = 1.0;
    for (int t = 0; t < 25; ++t) mu = M.left_apply(mu);
    auto step = make_alg1(cs.kernels, cs.informed);
    RngStream root(14, 0);
    Eigen::VectorXd emp = Eigen::VectorXd::Zero(mu.size());
    const int R = 100000;
    for (int r = 0; r < R; ++r) {
        RngStream rng = root.child(std::uint64_t(r));
        auto last = run_chain_visit(step, cs.start, 25, rng, [](std::size_t, const StepResult<Idx>&) {});
        emp(Eigen::Index(M.local(last.state))) += 1.0 / R;
    }
    CHECK(tv_distance(emp, mu) < 0.05);
}

TEST_CASE("trace csv") {
    auto ts = three_state_setup(0.3);
    RngStream rng(15, 1);
    auto tr = run_chain(make_hybrid(ts.kernels, ts.uninformed), Idx(0), 3, rng);
    std::ostringstream os;
    write_trace_csv(os, tr);
    std::string s = os.str();
    CHECK(s.rfind("# trace v1", 0) == 0);
    CHECK(s.find("seed=15") != std::string::npos);
    std::istringstream is(s);
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) ++lines;
    CHECK(lines == 2 + 4);  // comment, column header, T+1 rows
    CHECK(fmt_double(0.1) == "0.10000000000000001");
    CHECK(std::stod(fmt_double(1.0 / 3.0)) == 1.0 / 3.0);
}
