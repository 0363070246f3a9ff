#include "lim/cli/experiments.hpp"

#include <algorithm>
#include <boost/version.hpp>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <json.hpp>
#include <map>
#include <sstream>

#include "lim/cli/csv.hpp"
#include "lim/cli/pool.hpp"
#include "lim/diagnostics/diagnostics.hpp"
#include "lim/discrete_exact/analysis.hpp"
#include "lim/discrete_exact/folding.hpp"
#include "lim/discrete_exact/induce.hpp"
#include "lim/model_zoo/cross.hpp"
#include "lim/model_zoo/cylinder.hpp"
#include "lim/model_zoo/discrete_kernels.hpp"
#include "lim/model_zoo/hypercube.hpp"
#include "lim/model_zoo/mixture.hpp"
#include "lim/model_zoo/sinusoid.hpp"
#include "lim/model_zoo/three_state.hpp"
#include "lim/samplers/trace_io.hpp"

namespace lim {

namespace fs = std::filesystem;
using Idx = std::size_t;

inline constexpr const char* kVersion = "1.0.0";

namespace {

// ---- schema helpers ------------------------------------------------------

ParamDef num(ParamKind kind, std::string key, std::string def, std::string doc, double lo = -1e300,
             double hi = 1e300, bool lo_open = false, bool hi_open = false, std::string paper = "") {
    ParamDef d;
    d.key = std::move(key);
    d.kind = kind;
    d.desk = std::move(def);
    d.paper = std::move(paper);
    d.doc = std::move(doc);
    d.lo = lo;
    d.hi = hi;
    d.lo_open = lo_open;
    d.hi_open = hi_open;
    return d;
}

ParamDef count(std::string key, std::string def, std::string doc, double lo = 1, std::string paper = "") {
    return num(ParamKind::Int, std::move(key), std::move(def), std::move(doc), lo, 1e300, false, false,
               std::move(paper));
}

ParamDef choice(std::string key, std::string def, std::vector<std::string> choices, std::string doc) {
    ParamDef d;
    d.key = std::move(key);
    d.kind = ParamKind::Choice;
    d.desk = std::move(def);
    d.doc = std::move(doc);
    d.choices = std::move(choices);
    return d;
}

ParamDef flag(std::string key, std::string def, std::string doc) {
    ParamDef d;
    d.key = std::move(key);
    d.kind = ParamKind::Flag;
    d.desk = std::move(def);
    d.doc = std::move(doc);
    return d;
}

ParamDef text(std::string key, std::string def, std::string doc) {
    ParamDef d;
    d.key = std::move(key);
    d.kind = ParamKind::Text;
    d.desk = std::move(def);
    d.doc = std::move(doc);
    return d;
}

const std::vector<std::string> kIds = {"ex1_coupling", "ex2_tv",  "ex3_gaps", "ex5_mixing", "ex6_kl",      "ex6_var",
                                       "ex7_kl",       "ex7_var", "ex8_kl",   "ex8_var",    "lemma_suite", "custom_chain"};

std::vector<ParamDef> folded_params() {
    return {num(ParamKind::IntList, "folded.d", "2,4,6,8", "number of filament edges (even)", 2, 64),
            num(ParamKind::IntList, "folded.n", "4,10", "states per edge", 3, 1000)};
}

std::vector<ParamDef> sinusoid_params() {
    return {num(ParamKind::Real, "sinusoid.sigma_small", "0.01", "small truncated-Gaussian scale", 0, 1e300, true),
            num(ParamKind::Real, "sinusoid.sigma_large", "1", "large truncated-Gaussian scale", 0, 1e300, true),
            choice("sinusoid.weights", "prose", {"printed", "prose"},
                   "weight equation as printed, or with the edge branches read from the text")};
}

std::vector<ParamDef> mixture_params(ParamKind theta_kind, std::string theta_default) {
    return {num(theta_kind, "mixture.theta", std::move(theta_default), "elongation of the components", 0, 1e300,
                true),
            num(ParamKind::Real, "mixture.eps", "0.01", "off-direction weight", 0, 1, true, false),
            num(ParamKind::Real, "mixture.sigma_large", "-1", "large random-walk scale; negative means sqrt(theta)"),
            num(ParamKind::Real, "mixture.sigma_small", "1", "small random-walk scale", 0, 1e300, true)};
}

std::vector<ParamDef> cylinder_params(ParamKind lambda_kind, std::string lambda_default) {
    return {num(ParamKind::Real, "cylinder.R", "1", "large radius", 0, 1e300, true),
            num(ParamKind::Real, "cylinder.r", "0.05", "small radius (< R)", 0, 1e300, true),
            num(lambda_kind, "cylinder.lambda", std::move(lambda_default), "Laplace noise rate", 0, 1e300, true),
            num(ParamKind::Real, "cylinder.eps", "0.1", "probability of a random-walk proposal", 0, 1),
            num(ParamKind::Real, "cylinder.sigma", "0.1", "random-walk scale", 0, 1e300, true),
            count("cylinder.n", "12", "number of control points", 3)};
}

std::vector<ParamDef> kl_run(std::string reps, std::string reps_paper, std::string iters, std::string every) {
    return {count("run.replicates", std::move(reps), "independent chains per algorithm", 2, std::move(reps_paper)),
            count("run.iterations", std::move(iters), "iterations per chain"),
            count("run.every", std::move(every), "spacing of the KL checkpoints"),
            count("kl.k", "1", "nearest-neighbour order")};
}

std::vector<ParamDef> var_run(std::string reps, std::string reps_paper, std::string iters, std::string iters_paper) {
    return {count("run.replicates", std::move(reps), "independent chains per algorithm, started under pi", 2,
                  std::move(reps_paper)),
            count("run.iterations", std::move(iters), "iterations per chain", 1, std::move(iters_paper)),
            count("run.bootstrap", "1000", "bootstrap resamples for the standard error")};
}

template <class... Vs>
std::vector<ParamDef> join(Vs... vs) {
    std::vector<ParamDef> out;
    (out.insert(out.end(), vs.begin(), vs.end()), ...);
    return out;
}

std::vector<ExperimentInfo> build_catalog() {
    std::vector<ExperimentInfo> c;
    c.push_back({"ex1_coupling", "Figure 15 (folded chains, reflection coupling)",
                 "Mean reflection-coupling time of the folded RSGS and informed chains against the exact and "
                 "closed-form hitting times.",
                 join(folded_params(), std::vector<ParamDef>{
                                           count("run.replicates", "10000", "coupling replicates", 2, "100000"),
                                           count("run.max_steps", "100000000", "timeout per replicate")})});
    c.push_back({"ex2_tv", "Figures 2 and 3",
                 "Exact TV curves of RSGS and the informed chain on the hypercube from the filament extremity.",
                 {count("hypercube.m", "10", "states per coordinate", 3),
                  count("hypercube.d", "2", "dimension", 2),
                  num(ParamKind::RealList, "hypercube.p", "0.1", "mass off the filament", 0, 1, false, true),
                  choice("sampler.informed", "alg1", {"alg1", "alg2"},
                         "informed variant (alg1 on Gibbs kernels, alg2 on MH kernels)"),
                  count("run.horizon", "1000", "length of the TV curves"),
                  num(ParamKind::Real, "run.eps", "1e-5", "TV level for the iteration counts", 0, 1, true, true)}});
    c.push_back({"ex3_gaps", "Example 3 spectral gaps",
                 "Spectral gaps of the induced three-state matrices against their closed forms.",
                 {num(ParamKind::RealList, "three_state.p", "0.05,0.1,0.15,0.2,0.25,0.3,0.4,0.45",
                      "mass of the third state", 0, 1, true, true)}});
    c.push_back({"ex5_mixing", "Table 1 and Figure 5",
                 "Exact mixing times and TV curves of RSGS and the informed chain on the cross.",
                 {num(ParamKind::IntList, "cross.d", "2,5,8", "dimension", 2, 10),
                  num(ParamKind::RealList, "cross.eps", "0.25,0.1,0.01,0.001", "TV levels", 0, 1, true, true),
                  flag("cross.short_range_rule", "false", "read the d=2 hyperplanes with 1-based index ranges"),
                  count("run.count_from", "1", "iteration number given to the initial law", 0),
                  count("run.curve_steps", "60", "length of the TV curves")}});
    c.push_back({"ex6_kl", "Figure 7", "KL convergence of RSGS, Alg. 1 and Alg. 2 on the sinusoid target.",
                 join(sinusoid_params(), kl_run("2000", "20000", "1000", "10"))});
    c.push_back({"ex6_var", "Table 2", "Asymptotic variances of RSGS, Alg. 1 and Alg. 2 on the sinusoid target.",
                 join(sinusoid_params(), var_run("2000", "20000", "5000", "5000"))});
    c.push_back({"ex7_kl", "Figures 10 and 14", "KL convergence of RSGS and Alg. 2 on the Gaussian mixture.",
                 join(mixture_params(ParamKind::RealList, "10,100,500,1000"), kl_run("1000", "1000", "2000", "20"),
                      std::vector<ParamDef>{count("sampler.particles", "0",
                                                  "particles for a particle-weighted Alg. 2 chain; 0 disables", 0)})});
    c.push_back({"ex7_var", "Table 3", "Asymptotic variances of RSGS and Alg. 2 on the Gaussian mixture.",
                 join(mixture_params(ParamKind::RealList, "1000,100,10"), var_run("2000", "20000", "5000", "5000"))});
    c.push_back({"ex8_kl", "Figure 13", "KL convergence of RSGS and Alg. 2 on the noisy cylinders.",
                 join(cylinder_params(ParamKind::RealList, "10,50,500,1000"), kl_run("100", "1000", "200", "10"))});
    c.push_back({"ex8_var", "Table 4", "Asymptotic variances of RSGS and Alg. 2 on the noisy cylinders.",
                 join(cylinder_params(ParamKind::RealList, "1000,100,10"), var_run("20", "2000", "500", "5000"))});
    c.push_back({"lemma_suite", "Figure 15 (folding identities)",
                 "Deviations of the folded/unfolded spectra, mapping matrices and hitting times.",
                 folded_params()});
    c.push_back({"custom_chain", "ad hoc run", "Runs any sampler variant on any example and writes traces.",
                 join(std::vector<ParamDef>{
                          choice("model", "three_state", {"three_state", "hypercube", "cross", "sinusoid", "mixture",
                                                          "cylinder"},
                                 "example target"),
                          choice("sampler.variant", "alg2", {"alg1", "alg2", "hybrid", "delayed", "mixed"},
                                 "sampler variant"),
                          choice("sampler.inner", "alg1", {"alg1", "alg2", "hybrid"},
                                 "variant wrapped by delayed / mixed"),
                          num(ParamKind::Real, "sampler.lambda", "1", "delayed-move probability", 0, 1, true),
                          num(ParamKind::Real, "sampler.varpi", "1", "mixed: probability of the informed move", 0, 1),
                          choice("sampler.kernels", "mh", {"gibbs", "mh"}, "kernel family for hypercube and cross"),
                          count("run.iterations", "1000", "iterations per chain"),
                          count("run.chains", "1", "number of chains"),
                          num(ParamKind::Real, "three_state.p", "0.1", "mass of the third state", 0, 1, true, true),
                          count("hypercube.m", "10", "states per coordinate", 3),
                          count("hypercube.d", "3", "dimension", 2),
                          num(ParamKind::Real, "hypercube.p", "0", "mass off the filament", 0, 1, false, true),
                          num(ParamKind::Int, "cross.d", "3", "dimension", 2, 10)},
                      sinusoid_params(), mixture_params(ParamKind::Real, "100"),
                      cylinder_params(ParamKind::Real, "100"))});
    return c;
}

// ---- run context ---------------------------------------------------------

struct Ctx {
    const Params& p;
    std::string id;
    std::uint64_t seed;
    std::size_t threads;
    fs::path dir;
    std::vector<std::string> files;

    CsvWriter csv(const std::string& name, std::vector<std::string> cols) {
        files.push_back(name);
        return CsvWriter((dir / name).string(), id + "/" + name, std::move(cols));
    }
    RngStream rng(const std::string& label) const { return RngStream(seed, stream_tag(id + "/" + label)); }
};

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

VariantSpec simple(Variant v) {
    VariantSpec s;
    s.variant = v;
    return s;
}

Variant parse_variant(const std::string& s) {
    if (s == "alg1") return Variant::Alg1;
    if (s == "alg2") return Variant::Alg2;
    if (s == "hybrid") return Variant::Hybrid;
    if (s == "delayed") return Variant::Delayed;
    return Variant::Mixed;
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / double(v.size());
}

double se_of(const std::vector<double>& v) {
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / double(v.size() - 1) / double(v.size()));
}

std::string label_num(const std::string& name, double v) { return name + "=" + fmt_double(v); }

// ---- discrete experiments ------------------------------------------------

void run_ex1(Ctx& c) {
    auto reps = c.p.count("run.replicates");
    auto max_t = c.p.count("run.max_steps");
    auto out = c.csv("coupling.csv", {"d", "n", "replicates", "mean_rsgs", "se_rsgs", "mean_informed", "se_informed",
                                      "ratio", "ratio_se", "half_d", "hit_rsgs_exact", "hit_informed_exact",
                                      "hit_rsgs_closed", "hit_informed_closed"});
    for (auto d : c.p.integers("folded.d"))
        for (auto n : c.p.integers("folded.n")) {
            std::vector<double> means(2), ses(2), hits(2);
            for (int informed = 0; informed < 2; ++informed) {
                Eigen::MatrixXd Q = folded_rate_matrix(Idx(d), Idx(n), informed == 1);
                RngStream base = c.rng("d=" + std::to_string(d) + "/n=" + std::to_string(n) +
                                       (informed ? "/informed" : "/rsgs"));
                auto taus = parallel_map<double>(reps, c.threads, [&](std::size_t r) {
                    RngStream rng = base.child(r);
                    return double(reflection_coupling(Q, Idx(d), rng, max_t));
                });
                means[informed] = mean_of(taus);
                ses[informed] = se_of(taus);
                hits[informed] = expected_hitting_times(Q, {Idx(d)})(0);
            }
            double ratio = means[0] / means[1];
            double ratio_se = ratio * std::hypot(ses[0] / means[0], ses[1] / means[1]);
            out << d << n << reps << means[0] << ses[0] << means[1] << ses[1] << ratio << ratio_se << double(d) / 2
                << hits[0] << hits[1] << hitting_time_rsgs(Idx(d), Idx(n)) << hitting_time_informed(Idx(d), Idx(n));
            out.end_row();
        }
    out.close();
}

void run_ex2(Ctx& c) {
    HypercubeSpec hs;
    hs.m = int(c.p.integer("hypercube.m"));
    hs.d = int(c.p.integer("hypercube.d"));
    bool alg2 = c.p.str("sampler.informed") == "alg2";
    auto horizon = c.p.count("run.horizon");
    double eps = c.p.real("run.eps");
    auto curves = c.csv("tv.csv", {"p", "t", "tv_rsgs", "tv_informed"});
    auto summary = c.csv("summary.csv", {"p", "states", "t_rsgs", "t_informed", "ratio", "first_informed_below",
                                         "first_rsgs_below"});
    for (double p : c.p.reals("hypercube.p")) {
        hs.p = p;
        auto t = hypercube_target(hs);
        auto gibbs = gibbs_collection(t);
        auto wc = SimplexWeights::uniform(std::size_t(hs.d));
        auto w = hypercube_weights(hs);
        auto I = alg2 ? induce_matrix(mh_coordinate_collection(t), w, wc, simple(Variant::Alg2), t)
                      : induce_matrix(gibbs, w, wc, simple(Variant::Alg1), t);
        auto R = induce_matrix(gibbs, w, wc, simple(Variant::Hybrid), t);
        auto pi = pi_of(t, I);
        Idx start = t.space().encode(Coords(std::size_t(hs.d), 0));
        auto mu = delta(I.size(), I.local(start));
        auto ci = tv_curve(mu, I, pi, horizon);
        auto cr = tv_curve(mu, R, pi, horizon);
        long long inf_below = -1, rsgs_below = -1;
        for (std::size_t k = 0; k <= horizon; ++k) {
            curves << p << k << cr[k] << ci[k];
            curves.end_row();
            if (inf_below < 0 && ci[k] < cr[k] - 1e-15) inf_below = (long long)k;
            if (rsgs_below < 0 && cr[k] < ci[k] - 1e-15) rsgs_below = (long long)k;
        }
        auto tr = mixing_time(mu, R, pi, eps);
        auto ti = mixing_time(mu, I, pi, eps);
        summary << p << I.size() << tr << ti << double(ti) / double(tr) << inf_below << rsgs_below;
        summary.end_row();
    }
    curves.close();
    summary.close();
}

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

void run_ex3(Ctx& c) {
    auto out = c.csv("gaps.csv", {"p", "gap_uninformed", "gap_informed", "closed_uninformed", "closed_informed",
                                  "dev_uninformed", "dev_informed", "matrix_dev_uninformed", "matrix_dev_informed"});
    for (double p : c.p.reals("three_state.p")) {
        auto ts = three_state_setup(p);
        Eigen::MatrixXd U =
            induce_matrix(ts.kernels, ts.informed, ts.uninformed, simple(Variant::Hybrid), ts.target).dense();
        Eigen::MatrixXd I =
            induce_matrix(ts.kernels, ts.informed, ts.uninformed, simple(Variant::Alg2), ts.target).dense();
        double gu = spectral_gap(U), gi = spectral_gap(I);
        double cu = three_state_gap_closed(p), ci = three_state_gap_informed_closed(p);
        out << p << gu << gi << cu << ci << std::abs(gu - cu) << std::abs(gi - ci)
            << max_abs_diff(U, three_state_uninformed_closed(p)) << max_abs_diff(I, three_state_informed_closed(p));
        out.end_row();
    }
    out.close();
}

void run_ex5(Ctx& c) {
    bool short_rule = c.p.flag("cross.short_range_rule");
    auto from = c.p.count("run.count_from");
    auto steps = c.p.count("run.curve_steps");
    auto eps_list = c.p.reals("cross.eps");
    auto mix = c.csv("mixing.csv", {"d", "eps", "tau_informed", "tau_rsgs"});
    auto tv = c.csv("tv.csv", {"d", "t", "tv_informed", "tv_rsgs"});
    for (auto d : c.p.integers("cross.d")) {
        CrossSpec cs;
        cs.d = int(d);
        cs.short_range_rule = short_rule;
        auto cx = cross_setup(cs);
        auto I = induce_matrix(cx.kernels, cx.informed, cx.uninformed, simple(Variant::Alg1), cx.target);
        auto R = induce_matrix(cx.kernels, cx.informed, cx.uninformed, simple(Variant::Hybrid), cx.target);
        auto pi = pi_of(cx.target, I);
        auto mu = delta(I.size(), I.local(cx.start));
        for (double e : eps_list) {
            mix << d << e << mixing_time(mu, I, pi, e, 1000000, from) << mixing_time(mu, R, pi, e, 1000000, from);
            mix.end_row();
        }
        auto ci = tv_curve(mu, I, pi, steps), cr = tv_curve(mu, R, pi, steps);
        for (std::size_t k = 0; k <= steps; ++k) {
            tv << d << k + from << ci[k] << cr[k];
            tv.end_row();
        }
    }
    mix.close();
    tv.close();
}

void run_lemma(Ctx& c) {
    auto out = c.csv("lemma.csv", {"d", "n", "gap_folded_rsgs", "gap_folded_delayed", "gap_folded_dev",
                                   "gap_unfold_rsgs_dev", "gap_unfold_delayed_dev", "gap_filament_dev",
                                   "gamma_omega_dev", "spectrum_union_dev", "hit_rsgs", "hit_informed",
                                   "hit_rsgs_dev", "hit_informed_dev", "max_deviation"});
    for (auto d : c.p.integers("folded.d"))
        for (auto n : c.p.integers("folded.n")) {
            auto r = verify_lemma_suite(filament_chain(int(d), int(n), false), filament_chain(int(d), int(n), true),
                                        Idx(d), Idx(n));
            out << d << n << r.gamma_folded_rsgs << r.gamma_folded_delayed << r.gap_folded_dev
                << r.gap_unfold_rsgs_dev << r.gap_unfold_delayed_dev << r.gap_filament_dev << r.gamma_omega_dev
                << r.spectrum_union_dev << r.hit_rsgs << r.hit_informed << r.hit_rsgs_dev << r.hit_informed_dev
                << r.max_deviation();
            out.end_row();
        }
    out.close();
}

// ---- continuous experiments ----------------------------------------------

struct NamedStep {
    std::string name;
    StepFn<Vec> step;
};

using Draw = std::function<Vec(RngStream&)>;

std::vector<std::size_t> checkpoints(std::size_t T, std::size_t every) {
    std::vector<std::size_t> cps;
    for (std::size_t t = 0; t <= T; t += every) cps.push_back(t);
    if (cps.back() != T) cps.push_back(T);
    return cps;
}

// States of R independent chains at each checkpoint, one row per chain.
std::vector<SampleBatch> snapshots(const StepFn<Vec>& step, const Draw& start, Eigen::Index dim, std::size_t R,
                                   const std::vector<std::size_t>& cps, const RngStream& base, std::size_t threads) {
    std::vector<SampleBatch> out(cps.size(), SampleBatch(Eigen::Index(R), dim));
    parallel_for(R, threads, [&](std::size_t r) {
        RngStream rng = base.child(r);
        Vec x = start(rng);
        std::size_t k = 0;
        if (cps[0] == 0) out[k++].row(Eigen::Index(r)) = x.transpose();
        run_chain_visit(step, x, cps.back(), rng, [&](std::size_t t, const StepResult<Vec>& res) {
            if (k < cps.size() && cps[k] == t) out[k++].row(Eigen::Index(r)) = res.state.transpose();
        });
    });
    return out;
}

SampleBatch iid_batch(const Draw& iid, Eigen::Index dim, std::size_t R, RngStream rng) {
    SampleBatch b(Eigen::Index(R), dim);
    for (std::size_t r = 0; r < R; ++r) b.row(Eigen::Index(r)) = iid(rng).transpose();
    return b;
}

// Writes rows (setting..., algorithm, t, kl).
void kl_curves(Ctx& c, CsvWriter& out, const std::vector<double>& setting, const std::string& label,
               const std::vector<NamedStep>& algs, const Draw& start, const Draw& iid, Eigen::Index dim) {
    auto R = c.p.count("run.replicates");
    auto cps = checkpoints(c.p.count("run.iterations"), c.p.count("run.every"));
    KlOptions ko;
    ko.k = c.p.count("kl.k");
    ko.ties = TiePolicy::Jitter;
    SampleBatch ref = iid_batch(iid, dim, R, c.rng(label + "/reference"));
    for (const auto& a : algs) {
        auto snaps = snapshots(a.step, start, dim, R, cps, c.rng(label + "/" + a.name), c.threads);
        auto kl = parallel_map<double>(cps.size(), c.threads, [&](std::size_t k) { return knn_kl(snaps[k], ref, ko); });
        for (std::size_t k = 0; k < cps.size(); ++k) {
            for (double s : setting) out << s;
            out << a.name << cps[k] << kl[k];
            out.end_row();
        }
    }
}

// Writes rows (setting..., algorithm, function, replicates, iterations, mean, variance, bootstrap_se).
void variance_table(Ctx& c, CsvWriter& out, const std::vector<double>& setting, const std::string& label,
                    const std::vector<NamedStep>& algs, const Draw& iid, const std::vector<TestFunction>& tests) {
    auto R = c.p.count("run.replicates");
    auto T = c.p.count("run.iterations");
    auto B = c.p.count("run.bootstrap");
    for (const auto& a : algs) {
        RngStream base = c.rng(label + "/" + a.name);
        auto sums = parallel_map<std::vector<double>>(R, c.threads, [&](std::size_t r) {
            RngStream rng = base.child(r);
            std::vector<double> s(tests.size(), 0.0);
            run_chain_visit(a.step, iid(rng), T, rng, [&](std::size_t, const StepResult<Vec>& res) {
                for (std::size_t f = 0; f < tests.size(); ++f) s[f] += tests[f].f(res.state);
            });
            for (auto& v : s) v /= double(T);
            return s;
        });
        for (std::size_t f = 0; f < tests.size(); ++f) {
            std::vector<double> means(R);
            for (std::size_t r = 0; r < R; ++r) means[r] = sums[r][f];
            auto est = mc_asymptotic_variance_bootstrap(means, T, B, stream_tag(label + "/" + a.name + "/boot"));
            for (double s : setting) out << s;
            out << a.name << tests[f].name << R << T << mean_of(means) << est.value << est.bootstrap_se;
            out.end_row();
        }
    }
}

SinusoidSpec sinusoid_spec(const Params& p) {
    SinusoidSpec s;
    s.sigma_small = p.real("sinusoid.sigma_small");
    s.sigma_large = p.real("sinusoid.sigma_large");
    s.rule = p.str("sinusoid.weights") == "prose" ? SinusoidWeightRule::Prose : SinusoidWeightRule::Printed;
    return s;
}

std::vector<NamedStep> sinusoid_algs(const ContinuousSetup& s) {
    return {{"rsgs", make_hybrid(s.kernels, s.uninformed)},
            {"alg1", make_alg1(s.kernels, s.informed)},
            {"alg2", make_alg2(s.kernels, s.informed)}};
}

MixtureSpec mixture_spec(const Params& p, double theta) {
    MixtureSpec m;
    m.theta = theta;
    m.eps = p.real("mixture.eps");
    m.sigma_large = p.real("mixture.sigma_large");
    m.sigma_small = p.real("mixture.sigma_small");
    return m;
}

CylinderSpec cylinder_spec(const Params& p, double lambda) {
    CylinderSpec s;
    s.R = p.real("cylinder.R");
    s.r = p.real("cylinder.r");
    s.lambda = lambda;
    s.eps = p.real("cylinder.eps");
    s.sigma = p.real("cylinder.sigma");
    s.n = int(p.integer("cylinder.n"));
    return s;
}

std::vector<std::string> with_setting(std::vector<std::string> setting, std::vector<std::string> rest) {
    setting.insert(setting.end(), rest.begin(), rest.end());
    return setting;
}

const std::vector<std::string> kKlCols = {"algorithm", "t", "kl"};
const std::vector<std::string> kVarCols = {"algorithm", "function",          "replicates",  "iterations",
                                           "mean",      "asymptotic_variance", "bootstrap_se"};

void run_ex6_kl(Ctx& c) {
    auto s = sinusoid_setup(sinusoid_spec(c.p));
    auto out = c.csv("kl.csv", kKlCols);
    kl_curves(c, out, {}, "sinusoid", sinusoid_algs(s), s.start, s.iid, 2);
    out.close();
}

void run_ex6_var(Ctx& c) {
    auto s = sinusoid_setup(sinusoid_spec(c.p));
    auto out = c.csv("variance.csv", kVarCols);
    variance_table(c, out, {}, "sinusoid", sinusoid_algs(s), s.iid, s.tests);
    out.close();
}

void run_ex7_kl(Ctx& c) {
    auto L = c.p.count("sampler.particles");
    auto out = c.csv("kl.csv", with_setting({"theta"}, kKlCols));
    for (double theta : c.p.reals("mixture.theta")) {
        auto s = mixture_setup(mixture_spec(c.p, theta));
        std::vector<NamedStep> algs = {{"rsgs", make_hybrid(s.kernels, s.uninformed)},
                                       {"alg2", make_alg2(s.kernels, s.informed)}};
        if (L > 0) algs.push_back({"alg2_particles", make_alg2(s.kernels, particle_weight_function(s.kernels, L))});
        kl_curves(c, out, {theta}, label_num("theta", theta), algs, s.start, s.iid, 3);
    }
    out.close();
}

void run_ex7_var(Ctx& c) {
    auto out = c.csv("variance.csv", with_setting({"theta"}, kVarCols));
    for (double theta : c.p.reals("mixture.theta")) {
        auto s = mixture_setup(mixture_spec(c.p, theta));
        std::vector<NamedStep> algs = {{"rsgs", make_hybrid(s.kernels, s.uninformed)},
                                       {"alg2", make_alg2(s.kernels, s.informed)}};
        variance_table(c, out, {theta}, label_num("theta", theta), algs, s.iid, s.tests);
    }
    out.close();
}

std::vector<NamedStep> cylinder_algs(const CylinderSetup& s) {
    return {{"rsgs", cylinder_step(s, simple(Variant::Hybrid))}, {"alg2", cylinder_step(s, simple(Variant::Alg2))}};
}

void run_ex8_kl(Ctx& c) {
    auto out = c.csv("kl.csv", with_setting({"lambda"}, kKlCols));
    for (double lambda : c.p.reals("cylinder.lambda")) {
        auto s = cylinder_setup(cylinder_spec(c.p, lambda));
        kl_curves(c, out, {lambda}, label_num("lambda", lambda), cylinder_algs(s), s.start, s.iid, 3);
    }
    out.close();
}

void run_ex8_var(Ctx& c) {
    auto out = c.csv("variance.csv", with_setting({"lambda"}, kVarCols));
    for (double lambda : c.p.reals("cylinder.lambda")) {
        auto s = cylinder_setup(cylinder_spec(c.p, lambda));
        variance_table(c, out, {lambda}, label_num("lambda", lambda), cylinder_algs(s), s.iid, s.tests);
    }
    out.close();
}

// ---- custom chain --------------------------------------------------------

VariantSpec variant_spec(const Params& p) {
    VariantSpec v;
    v.variant = parse_variant(p.str("sampler.variant"));
    v.inner = parse_variant(p.str("sampler.inner"));
    v.lambda = p.real("sampler.lambda");
    v.varpi = p.real("sampler.varpi");
    return v;
}

bool uses_alg2(const VariantSpec& v) {
    return v.variant == Variant::Alg2 ||
           ((v.variant == Variant::Delayed || v.variant == Variant::Mixed) && v.inner == Variant::Alg2);
}

void run_custom(Ctx& c) {
    const std::string model = c.p.str("model");
    const auto v = variant_spec(c.p);
    const auto T = c.p.count("run.iterations");
    const auto chains = c.p.count("run.chains");
    auto summary = c.csv("summary.csv", {"chain", "iterations", "acceptance_rate"});
    auto record = [&](std::size_t k, std::size_t accepted) {
        summary << k << T << double(accepted) / double(std::max<std::size_t>(T, 1));
        summary.end_row();
    };
    auto name = [](std::size_t k) { return "trace_" + std::to_string(k) + ".csv"; };

    if (model == "three_state" || model == "hypercube" || model == "cross") {
        DiscreteTarget target;
        KernelCollection<Idx> kernels;
        WeightFunction<Idx> w;
        SimplexWeights wc;
        Idx start = 0;
        if (model == "three_state") {
            auto ts = three_state_setup(c.p.real("three_state.p"));
            target = ts.target;
            kernels = ts.kernels;
            w = ts.informed;
            wc = ts.uninformed;
        } else if (model == "hypercube") {
            HypercubeSpec hs{int(c.p.integer("hypercube.m")), int(c.p.integer("hypercube.d")),
                             c.p.real("hypercube.p")};
            target = hypercube_target(hs);
            kernels = c.p.str("sampler.kernels") == "gibbs" ? gibbs_collection(target)
                                                             : mh_coordinate_collection(target);
            w = hypercube_weights(hs);
            wc = SimplexWeights::uniform(std::size_t(hs.d));
            start = target.space().encode(Coords(std::size_t(hs.d), 0));
        } else {
            CrossSpec cs;
            cs.d = int(c.p.integer("cross.d"));
            auto cx = cross_setup(cs);
            target = cx.target;
            kernels = c.p.str("sampler.kernels") == "gibbs" ? cx.kernels : mh_coordinate_collection(target);
            w = cx.informed;
            wc = cx.uninformed;
            start = cx.start;
        }
        auto step = make_step(v, kernels, w, wc);
        for (std::size_t k = 0; k < chains; ++k) {
            RngStream rng = c.rng("chain/" + std::to_string(k));
            auto tr = run_chain(step, start, T, rng);
            c.files.push_back(name(k));
            std::ofstream os(c.dir / name(k), std::ios::binary);
            write_trace_csv(os, tr, model == "three_state" ? nullptr : &target.space());
            std::size_t acc = 0;
            for (auto f : tr.accept_flags) acc += f;
            record(k, acc);
        }
    } else {
        StepFn<Vec> step;
        Draw start;
        if (model == "sinusoid") {
            auto s = sinusoid_setup(sinusoid_spec(c.p));
            step = make_step(v, s.kernels, s.informed, s.uninformed);
            start = s.start;
        } else if (model == "mixture") {
            auto s = mixture_setup(mixture_spec(c.p, c.p.real("mixture.theta")));
            step = make_step(v, s.kernels, s.informed, s.uninformed);
            start = s.start;
        } else {
            auto s = cylinder_setup(cylinder_spec(c.p, c.p.real("cylinder.lambda")));
            step = cylinder_step(s, v);
            start = s.start;
        }
        for (std::size_t k = 0; k < chains; ++k) {
            RngStream rng = c.rng("chain/" + std::to_string(k));
            Vec x0 = start(rng);
            auto tr = run_chain(step, x0, T, rng);
            c.files.push_back(name(k));
            std::ofstream os(c.dir / name(k), std::ios::binary);
            write_trace_csv(os, tr);
            std::size_t acc = 0;
            for (auto f : tr.accept_flags) acc += f;
            record(k, acc);
        }
    }
    summary.close();
}

// ---- validation ----------------------------------------------------------

void semantic_checks(const std::string& id, const Params& p, std::vector<Diagnostic>& out) {
    auto add = [&](const std::string& key, const std::string& msg) { out.push_back({p.line(key), key, msg}); };
    if (id == "ex1_coupling" || id == "lemma_suite")
        for (auto d : p.integers("folded.d"))
            if (d % 2) add("folded.d", "folded chains need an even number of edges, got " + std::to_string(d));
    auto check_cube = [&](long long m, long long d) {
        double states = std::pow(double(m), double(d));
        if (states > double(kInduceCap))
            add("hypercube.d", "state space m^d = " + fmt_double(states) + " exceeds the cap of " +
                                   std::to_string(kInduceCap));
    };
    if (id == "ex2_tv") check_cube(p.integer("hypercube.m"), p.integer("hypercube.d"));
    if (id == "ex6_kl" || id == "ex7_kl" || id == "ex8_kl") {
        if (p.count("run.every") > p.count("run.iterations")) add("run.every", "must not exceed run.iterations");
        if (p.count("run.replicates") <= p.count("kl.k")) add("run.replicates", "must exceed kl.k");
    }
    if (id == "ex8_kl" || id == "ex8_var" || id == "custom_chain")
        if (p.real("cylinder.r") >= p.real("cylinder.R")) add("cylinder.r", "must be smaller than cylinder.R");
    if (id == "custom_chain") {
        auto model = p.str("model");
        auto v = variant_spec(p);
        if ((v.variant == Variant::Delayed || v.variant == Variant::Mixed) &&
            !(v.inner == Variant::Alg1 || v.inner == Variant::Alg2 || v.inner == Variant::Hybrid))
            add("sampler.inner", "must be alg1, alg2 or hybrid");
        if (uses_alg2(v) && (model == "hypercube" || model == "cross") && p.str("sampler.kernels") == "gibbs")
            add("sampler.kernels", "kernel tag mismatch: alg2 needs Metropolis-Hastings kernels but the gibbs "
                                   "collection holds general reversible kernels");
        if (model == "hypercube") check_cube(p.integer("hypercube.m"), p.integer("hypercube.d"));
    }
}

std::string utc_now() {
    auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

using Runner = void (*)(Ctx&);

Runner runner_for(const std::string& id) {
    static const std::map<std::string, Runner> m = {
        {"ex1_coupling", run_ex1}, {"ex2_tv", run_ex2},         {"ex3_gaps", run_ex3},   {"ex5_mixing", run_ex5},
        {"ex6_kl", run_ex6_kl},    {"ex6_var", run_ex6_var},    {"ex7_kl", run_ex7_kl},  {"ex7_var", run_ex7_var},
        {"ex8_kl", run_ex8_kl},    {"ex8_var", run_ex8_var},    {"lemma_suite", run_lemma},
        {"custom_chain", run_custom}};
    return m.at(id);
}

std::string kind_name(ParamKind k) {
    switch (k) {
    case ParamKind::Int: return "int";
    case ParamKind::Real: return "real";
    case ParamKind::IntList: return "int list";
    case ParamKind::RealList: return "real list";
    case ParamKind::Choice: return "choice";
    case ParamKind::Flag: return "flag";
    case ParamKind::Text: return "text";
    }
    return "";
}

} // namespace

std::uint64_t stream_tag(const std::string& label) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : label) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

const std::vector<ExperimentInfo>& catalog() {
    static const std::vector<ExperimentInfo> c = build_catalog();
    return c;
}

const ExperimentInfo* find_experiment(const std::string& id) {
    for (const auto& e : catalog())
        if (e.id == id) return &e;
    return nullptr;
}

std::vector<ParamDef> full_schema(const ExperimentInfo& e) {
    std::vector<ParamDef> s = {choice("experiment", e.id, kIds, "experiment id"),
                               num(ParamKind::Int, "seed", "1", "master seed", 0, 1.8e19),
                               text("output", "results/" + e.id, "output directory")};
    s.insert(s.end(), e.params.begin(), e.params.end());
    return s;
}

void print_catalog(std::ostream& os) {
    for (const auto& e : catalog()) {
        os << e.id << "  [" << e.reproduces << "]\n    " << e.summary << "\n";
        for (const auto& d : e.params) {
            os << "    " << d.key << " = " << d.desk;
            if (!d.paper.empty() && d.paper != d.desk) os << " (paper scale: " << d.paper << ")";
            os << "  # " << d.doc << "\n";
        }
    }
}

std::string config_template(const ExperimentInfo& e) {
    std::ostringstream os;
    os << "# " << e.id << ": " << e.summary << "\n";
    std::string section;
    for (const auto& d : full_schema(e)) {
        auto dot = d.key.find('.');
        std::string sec = dot == std::string::npos ? "" : d.key.substr(0, dot);
        std::string key = dot == std::string::npos ? d.key : d.key.substr(dot + 1);
        if (sec != section) {
            os << "\n[" << sec << "]\n";
            section = sec;
        }
        os << "# " << d.doc << " (" << kind_name(d.kind) << ")\n" << key << " = " << d.desk << "\n";
    }
    return os.str();
}

std::vector<Diagnostic> validate_config(const Config& cfg) {
    if (!cfg.has("experiment")) return {{0, "experiment", "missing key"}};
    const auto& e = cfg.at("experiment");
    const ExperimentInfo* info = find_experiment(e.value);
    if (!info) {
        std::string ids;
        for (const auto& id : kIds) ids += (ids.empty() ? "" : ", ") + id;
        return {{e.line, "experiment", "unknown experiment '" + e.value + "' (known: " + ids + ")"}};
    }
    auto schema = full_schema(*info);
    auto diags = check_params(cfg, schema);
    if (!diags.empty()) return diags;
    Params p(cfg, schema, false);
    semantic_checks(info->id, p, diags);
    return diags;
}

std::vector<Diagnostic> validate_config_text(const std::string& text) {
    try {
        return validate_config(Config::parse_string(text));
    } catch (const ConfigError& e) {
        return {{e.line, e.key, e.what()}};
    }
}

RunReport run_experiment(const Config& cfg, const RunOptions& opt) {
    auto diags = validate_config(cfg);
    if (!diags.empty()) throw ConfigError(diags.front().line, diags.front().key, diags.front().message);
    const ExperimentInfo& info = *find_experiment(cfg.at("experiment").value);
    Params p(cfg, full_schema(info), opt.paper_scale);
    {
        std::vector<Diagnostic> scaled;
        semantic_checks(info.id, p, scaled);
        if (!scaled.empty()) throw ConfigError(scaled.front().line, scaled.front().key, scaled.front().message);
    }

    RunReport rep;
    rep.id = info.id;
    rep.seed = opt.seed ? *opt.seed : std::uint64_t(std::stoull(p.str("seed")));
    rep.out_dir = opt.out_dir ? *opt.out_dir : p.str("output");
    std::error_code ec;
    fs::create_directories(rep.out_dir, ec);
    if (ec || !fs::is_directory(rep.out_dir)) throw Error(info.id + ": cannot create output directory " + rep.out_dir);

    Ctx ctx{p, info.id, rep.seed, opt.threads ? opt.threads : default_threads(), rep.out_dir, {}};
    const std::string started = utc_now();
    auto t0 = std::chrono::steady_clock::now();
    try {
        runner_for(info.id)(ctx);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw Error(info.id + ": " + e.what());
    }
    rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    nlohmann::ordered_json m;
    m["experiment"] = info.id;
    m["reproduces"] = info.reproduces;
    m["seed"] = rep.seed;
    m["threads"] = ctx.threads;
    m["paper_scale"] = opt.paper_scale;
    nlohmann::ordered_json conf = nlohmann::ordered_json::object();
    for (const auto& [k, v] : p.resolved()) conf[k] = v;
    conf["seed"] = std::to_string(rep.seed);
    conf["output"] = rep.out_dir;
    m["config"] = conf;
    m["files"] = ctx.files;
    m["csv_schema"] = kCsvSchema;
    m["versions"] = {{"limcmc", kVersion},
                     {"compiler", __VERSION__},
                     {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                   std::to_string(EIGEN_MINOR_VERSION)},
                     {"boost", BOOST_LIB_VERSION}};
    m["started_utc"] = started;
    m["wall_seconds"] = rep.wall_seconds;
    std::ofstream mf(fs::path(rep.out_dir) / "manifest.json", std::ios::binary);
    mf << m.dump(2) << "\n";
    if (!mf) throw Error(info.id + ": cannot write manifest");

    for (const auto& f : ctx.files) rep.files.push_back((fs::path(rep.out_dir) / f).string());
    rep.files.push_back((fs::path(rep.out_dir) / "manifest.json").string());
    return rep;
}

} // namespace lim
