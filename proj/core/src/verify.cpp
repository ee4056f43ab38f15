#include "dlas/verify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "dlas/channel.hpp"
#include "dlas/io.hpp"

namespace dlas {

namespace {

std::string fmt(double x) { return io::format_double(x); }

// ------------------------------------------------------------------ exact DPs
// Independent route for the example-line atoms: rational random-walk DPs on
// the integer window, no engine code involved.

// P(SRW started at 2 never stands on 0 during steps 0..T-1), absorbing DP.
Rational no_visit_probability(long long lo, long long hi, long long T) {
    std::map<long long, Rational> mass{{2, Rational(1)}};
    for (long long n = 1; n < T; ++n) {
        std::map<long long, Rational> next;
        for (const auto& [p, w] : mass) {
            std::vector<long long> nb;
            if (p > lo) nb.push_back(p - 1);
            if (p < hi) nb.push_back(p + 1);
            Rational share = w / Rational(static_cast<long long>(nb.size()));
            for (long long q : nb)
                if (q != 0) next[q] += share; // standing on 0 is absorbing
        }
        mass = std::move(next);
    }
    Rational q = 0;
    for (const auto& [p, w] : mass) q += w;
    return q;
}

// E sum_{n<T} 1{X_n = 0} for the free walk from 2.
Rational expected_local_time(long long lo, long long hi, long long T) {
    std::map<long long, Rational> mass{{2, Rational(1)}};
    Rational acc = 0;
    for (long long n = 0; n < T; ++n) {
        auto it = mass.find(0);
        if (it != mass.end()) acc += it->second;
        std::map<long long, Rational> next;
        for (const auto& [p, w] : mass) {
            std::vector<long long> nb;
            if (p > lo) nb.push_back(p - 1);
            if (p < hi) nb.push_back(p + 1);
            Rational share = w / Rational(static_cast<long long>(nb.size()));
            for (long long q : nb) next[q] += share;
        }
        mass = std::move(next);
    }
    return acc;
}

// ---------------------------------------------------------------- statistics

double frac_at_zero(const EmpiricalSample& s) { return s.prob_zero(); }

// Rademacher multiplier bootstrap: 99% half-width for the sample mean.
double mean_band99(const std::vector<double>& xs, std::uint64_t seed, int rounds = 400) {
    if (xs.empty()) return 0.0;
    double m = 0;
    for (double v : xs) m += v;
    m /= static_cast<double>(xs.size());
    std::vector<double> devs(static_cast<std::size_t>(rounds));
    for (int b = 0; b < rounds; ++b) {
        double d = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            double g = (rng::key_hash(seed, rng::Tag::bootstrap, static_cast<std::uint64_t>(b), i) & 1)
                           ? 1.0
                           : -1.0;
            d += g * (xs[i] - m);
        }
        devs[static_cast<std::size_t>(b)] = std::abs(d / static_cast<double>(xs.size()));
    }
    std::sort(devs.begin(), devs.end());
    return devs[static_cast<std::size_t>(0.99 * (devs.size() - 1))];
}

ExactDistribution pooled_above(const ExactDistribution& d, long long cap) {
    ExactDistribution out;
    out.cap = cap;
    out.overflow = d.overflow;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        if (d.values[i] >= cap)
            out.overflow += d.probs[i];
        else
            out.add(d.values[i], d.probs[i]);
    }
    out.finalize();
    return out;
}

InitialCondition xi_plus(const InitialCondition& xi0, Vertex x, long long extra) {
    InitialCondition out = xi0;
    out.set(x, out.count(x) + extra);
    return out;
}

// Law of V_T when some sites carry independent initial pmf draws: exact
// mixture over the product of site laws.
ExactDistribution enumerate_with_initial_law(const Graph& g,
                                             const std::vector<std::pair<Vertex, Pmf>>& sites,
                                             long long T, const VertexSet& h,
                                             const EnumerationBudget& budget) {
    ExactDistribution out;
    InitialCondition xi0(g.vertex_count());
    auto rec = [&](auto&& self, std::size_t i, const Rational& w) -> void {
        if (i == sites.size()) {
            ExactDistribution part = enumerate_exact(g, xi0, T, Statistic::occupation, h, budget);
            for (std::size_t k = 0; k < part.values.size(); ++k)
                out.add(part.values[k], part.probs[k] * w);
            return;
        }
        const auto& [v, pmf] = sites[i];
        for (std::size_t k = 0; k < pmf.size(); ++k) {
            xi0.set(v, pmf.values()[k]);
            self(self, i + 1, w * pmf.probs()[k]);
        }
    };
    rec(rec, 0, Rational(1));
    out.finalize();
    return out;
}

// Monte Carlo value of the tracer-system statistic from the real engine.
double mc_tracer_value(std::shared_ptr<const Graph> g, const InitialCondition& xi0, Vertex x,
                       std::uint64_t seed, double T, const VertexSet& h, bool flipped) {
    auto instr = std::make_shared<const Instructions>(seed, g, TimeModel::discrete);
    EngineOptions eopt;
    eopt.asserts = AssertLevel::off;
    Engine eng(g, instr, xi0, flipped ? TracerMode::flipped : TracerMode::tracer, x, eopt);
    int acc = eng.add_accumulator(View::zeta_solo, h);
    eng.advance_to(T);
    return eng.accumulator_value(acc);
}

double mc_plain_value(std::shared_ptr<const Graph> g, const InitialCondition& xi0,
                      std::uint64_t seed, double T, const VertexSet& h) {
    auto instr = std::make_shared<const Instructions>(seed, g, TimeModel::discrete);
    SimulateOptions opt;
    opt.horizon = T;
    opt.occupation_set = h;
    opt.asserts = AssertLevel::off;
    return simulate(g, xi0, instr, opt).v_T;
}

struct Line {
    std::vector<CriterionResult>& out;
    std::ostream& log;
    void add(std::string id, std::string name, bool pass, std::string detail,
             bool violation = false) {
        log << (pass ? "[PASS] " : "[FAIL] ") << id << " " << name << ": " << detail << "\n";
        out.push_back({std::move(id), std::move(name), pass, violation, std::move(detail)});
    }
};

// ---------------------------------------------------------------- criteria 1+2

void criteria_example_line(const VerifyOptions& opt, Line& line, bool want1, bool want2) {
    const long long T = 20, lo = -22, hi = 32;
    const long long N = opt.replicas_large;
    ExampleLineSpec spec;
    spec.T = T;
    spec.window_lo = lo;
    spec.window_hi = hi;
    spec.replicas = N;
    spec.seed = opt.seed;
    spec.workers = opt.workers;

    spec.variant = ExampleVariant::xi;
    EmpiricalSample s_xi = example_line(spec);
    spec.variant = ExampleVariant::xi_prime;
    EmpiricalSample s_xp = example_line(spec);
    spec.variant = ExampleVariant::xi_double_prime;
    EmpiricalSample s_xpp = example_line(spec);

    Rational q = no_visit_probability(lo, hi, T);
    double qd = to_double(q);
    double exact_p1 = 0.5 + qd / 2.0;
    double exact_p2 = 0.75 + qd * qd / 4.0;

    if (want1) {
        bool all_zero = !s_xi.values.empty() && s_xi.values.back() == 0.0;
        line.add("1.xi", "example-line xi: V_T = 0 in every replica", all_zero,
                 "max V over " + std::to_string(N) + " replicas = " +
                     fmt(s_xi.values.empty() ? 0.0 : s_xi.values.back()));

        double p1 = frac_at_zero(s_xp);
        double band1 = 4.0 * std::sqrt(0.25 / static_cast<double>(N));
        bool pass1 = std::abs(p1 - 0.5) <= band1;
        line.add("1.xi_prime", "example-line xi': P(V_T=0) within 1/2 +- 4 sigma", pass1,
                 "measured " + fmt(p1) + " vs stated 0.5 +- " + fmt(band1) +
                     "; exact value is 1/2 + q/2 = " + fmt(exact_p1) +
                     " with q = P(no visit to 0 by T) = " + rational_to_string(q) +
                     " (the stated 1/2 is the mixture weight, attained only as T -> inf)");

        double p2 = frac_at_zero(s_xpp);
        double band2 = 4.0 * std::sqrt(0.1875 / static_cast<double>(N));
        bool pass2 = std::abs(p2 - 0.75) <= band2;
        line.add("1.xi_double_prime", "example-line xi'': P(V_T=0) within 3/4 +- 4 sigma", pass2,
                 "measured " + fmt(p2) + " vs stated 0.75 +- " + fmt(band2) +
                     "; exact value is 3/4 + q^2/4 = " + fmt(exact_p2));

        double band1e = 4.0 * std::sqrt(exact_p1 * (1 - exact_p1) / static_cast<double>(N));
        line.add("1s.xi_prime_vs_dp", "supplementary: xi' atom matches the exact hitting DP",
                 std::abs(p1 - exact_p1) <= band1e,
                 "measured " + fmt(p1) + " vs exact " + fmt(exact_p1) + " +- " + fmt(band1e));
        double band2e = 4.0 * std::sqrt(exact_p2 * (1 - exact_p2) / static_cast<double>(N));
        line.add("1s.xi_double_prime_vs_dp",
                 "supplementary: xi'' atom matches the exact hitting DP",
                 std::abs(p2 - exact_p2) <= band2e,
                 "measured " + fmt(p2) + " vs exact " + fmt(exact_p2) + " +- " + fmt(band2e));
    }
    if (want2) {
        double m1 = s_xp.mean(), m2 = s_xpp.mean();
        double b1 = mean_band99(s_xp.values, opt.seed ^ 0xA1);
        double b2 = mean_band99(s_xpp.values, opt.seed ^ 0xA2);
        double joint = std::sqrt(b1 * b1 + b2 * b2);
        bool mean_lt = m1 - b1 > 0.0; // E V(xi) is identically 0
        bool means_eq = std::abs(m1 - m2) <= joint;
        double exact_mean = to_double(expected_local_time(lo, hi, T)) / 2.0;
        line.add("2.means", "example-line means: E V < E V' and E V' = E V''",
                 mean_lt && means_eq,
                 "E V = 0, E V' = " + fmt(m1) + " (99% band " + fmt(b1) + "), E V'' = " +
                     fmt(m2) + " (band " + fmt(b2) + "), |diff| = " + fmt(std::abs(m1 - m2)) +
                     " <= joint " + fmt(joint) + "; exact E V' = E L_T / 2 = " + fmt(exact_mean));
    }
}

// ---------------------------------------------------------------- criterion 3

void criterion_coupling(const VerifyOptions& opt, Line& line) {
    CouplingSweepSpec spec;
    spec.runs = opt.sweep_runs;
    spec.seed = opt.seed;
    spec.workers = opt.workers;
    spec.invert_tracer_priority = opt.invert_tracer_priority;
    SweepReport rep = coupling_sweep(spec);
    double denom = static_cast<double>(rep.runs);
    double fdx = rep.strict_dx / denom, fdy = rep.strict_dy / denom, fe = rep.strict_e / denom,
           fl = rep.strict_life / denom;
    bool strict_ok = fdx >= 0.01 && fdy >= 0.01 && fe >= 0.01 && fl >= 0.01;
    bool pass = rep.ok() && strict_ok;
    std::string detail = std::to_string(rep.runs) + " coupled runs, " +
                         std::to_string(rep.violations) + " violations, " +
                         std::to_string(rep.checks_run) + " event checks; strict fractions: " +
                         "Phi^X>Phi " + fmt(fdx) + ", Phi^Y>Phi " + fmt(fdy) + ", (e) " + fmt(fe) +
                         ", life " + fmt(fl);
    if (!rep.ok()) detail += "; first violation: " + rep.first_violation + " " + rep.first_replay;
    line.add("3.coupling", "pathwise coupling suite (def (d),(e), identities, life, closed forms)",
             pass, detail, !rep.ok());
}

// ---------------------------------------------------------------- criterion 4

struct SmallInstance {
    std::shared_ptr<const Graph> graph;
    InitialCondition xi0;
    Vertex x;
    long long T;
    VertexSet h;
};

std::vector<SmallInstance> small_instances() {
    std::vector<SmallInstance> out;
    auto add = [&](Graph&& g, std::vector<std::pair<Vertex, long long>> counts, Vertex x,
                   long long T, bool h_all, Vertex h0 = 0) {
        SmallInstance inst;
        inst.graph = std::make_shared<const Graph>(std::move(g));
        InitialCondition xi0(inst.graph->vertex_count());
        for (auto [v, c] : counts) xi0.set(v, c);
        inst.xi0 = xi0;
        inst.x = x;
        inst.T = T;
        inst.h = h_all ? VertexSet::all(inst.graph->vertex_count()) : VertexSet({h0});
        out.push_back(std::move(inst));
    };
    add(build_interval(0, 2), {{1, -1}}, 0, 3, true);
    add(build_interval(0, 2), {{1, -1}}, 0, 3, false, 2);
    add(build_interval(0, 2), {{0, 1}, {2, -1}}, 2, 3, true);
    add(build_interval(0, 2), {{1, -2}}, 1, 3, false, 0);
    add(build_interval(0, 3), {{1, -1}}, 0, 3, true);
    add(build_interval(0, 3), {{1, -1}, {3, 1}}, 0, 3, false, 0);
    add(build_interval(0, 3), {{2, -2}}, 3, 3, true);
    add(build_interval(0, 3), {{0, -1}, {2, -1}}, 1, 3, false, 3);
    add(build_interval(0, 4), {{2, -1}}, 0, 2, true);
    add(build_interval(0, 4), {{1, -1}, {3, -1}}, 2, 2, false, 0);
    add(build_star(3), {{1, -1}}, 0, 3, true);
    add(build_star(3), {{0, -2}}, 1, 3, false, 0);
    add(build_star(3), {{1, 1}, {2, -1}}, 0, 3, true);
    add(build_star(4), {{1, -1}}, 0, 2, false, 2);
    add(build_star(4), {{0, -1}, {1, -1}}, 0, 2, true);
    add(build_lattice_box({2, 2}), {{1, -1}}, 0, 3, true);
    add(build_lattice_box({2, 2}), {{3, -1}, {1, 1}}, 0, 3, false, 3);
    add(build_lattice_box({2, 2}), {{0, -2}}, 3, 3, true);
    add(build_interval(0, 2), {}, 1, 4, true);
    add(build_interval(0, 3), {{1, -1}, {2, -1}}, 0, 4, false, 3);
    add(build_star(3), {{1, -1}, {2, -1}, {3, -1}}, 0, 3, true);
    add(build_interval(0, 4), {{1, -2}, {3, -1}}, 0, 2, true);
    return out;
}

void criterion_distributional(const VerifyOptions& opt, Line& line) {
    EnumerationBudget budget;
    auto instances = small_instances();
    long long bad = 0;
    std::string first_bad;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const auto& inst = instances[i];
        auto d_direct1 = enumerate_exact(*inst.graph, xi_plus(inst.xi0, inst.x, 1), inst.T,
                                         Statistic::occupation, inst.h, budget);
        auto d_vx = enumerate_tracer_exact(*inst.graph, inst.xi0, inst.x, inst.T,
                                           TracerStatistic::v_solo, inst.h, false, budget);
        auto d_vy = enumerate_tracer_exact(*inst.graph, inst.xi0, inst.x, inst.T,
                                           TracerStatistic::v_solo, inst.h, true, budget);
        auto d_direct2 = enumerate_exact(*inst.graph, xi_plus(inst.xi0, inst.x, 2), inst.T,
                                         Statistic::occupation, inst.h, budget);
        auto d_vxy = enumerate_tracer_exact(*inst.graph, inst.xi0, inst.x, inst.T,
                                            TracerStatistic::v_pair, inst.h, false, budget);
        bool ok = (d_vx == d_direct1) && (d_vy == d_direct1) && (d_vxy == d_direct2);
        if (!ok) {
            ++bad;
            if (first_bad.empty()) first_bad = "instance " + std::to_string(i);
        }
    }
    line.add("4.exact_laws",
             "zeta^X / zeta-hat^Y / zeta^{X,Y} laws equal direct xi^x and xi^{x,x} laws (exact)",
             bad == 0,
             std::to_string(instances.size()) + " budgeted instances, " + std::to_string(bad) +
                 " mismatches" + (first_bad.empty() ? "" : "; first at " + first_bad));

    // engine vs oracle: empirical atom frequencies of the real tracer engines
    // against the exact law, a dual-route check of the dynamics
    long long atom_bad = 0;
    const long long n_mc = 4000;
    for (std::size_t i = 0; i < 4; ++i) {
        const auto& inst = instances[i];
        auto d_vx = enumerate_tracer_exact(*inst.graph, inst.xi0, inst.x, inst.T,
                                           TracerStatistic::v_solo, inst.h, false, budget);
        for (bool flipped : {false, true}) {
            std::map<long long, long long> freq;
            for (long long r = 0; r < n_mc; ++r) {
                std::uint64_t s =
                    rng::derive_seed(opt.seed ^ (i * 16 + flipped), rng::Tag::replica,
                                     static_cast<std::uint64_t>(r));
                double v = mc_tracer_value(inst.graph, inst.xi0, inst.x, s,
                                           static_cast<double>(inst.T), inst.h, flipped);
                ++freq[static_cast<long long>(std::llround(v))];
            }
            for (std::size_t k = 0; k < d_vx.values.size(); ++k) {
                double p = to_double(d_vx.probs[k]);
                double phat = static_cast<double>(freq[d_vx.values[k]]) / n_mc;
                double band = 5.0 * std::sqrt(p * (1 - p) / n_mc) + 1.0 / n_mc;
                if (std::abs(phat - p) > band) ++atom_bad;
            }
        }
    }
    line.add("4.engine_vs_oracle",
             "tracer and flipped engines reproduce the exact law atom by atom", atom_bad == 0,
             "4 instances x 2 engines at " + std::to_string(n_mc) +
                 " runs; atom band violations: " + std::to_string(atom_bad));

    // larger scale: paired two-sample KS tests
    auto g = std::make_shared<const Graph>(build_interval(0, 5));
    InitialCondition xi0(g->vertex_count());
    xi0.set(1, -1);
    xi0.set(3, 1);
    Vertex x = 2;
    VertexSet h = VertexSet::all(g->vertex_count());
    const long long E = opt.ks_experiments, NK = opt.ks_replicas;
    long long ok_count = 0;
    for (long long e = 0; e < E; ++e) {
        std::vector<double> direct, vx, vy;
        for (long long r = 0; r < NK; ++r) {
            std::uint64_t s1 = rng::key_hash(opt.seed, rng::Tag::replica,
                                             static_cast<std::uint64_t>(e) * 1000003 + 1,
                                             static_cast<std::uint64_t>(r));
            std::uint64_t s2 = rng::key_hash(opt.seed, rng::Tag::replica,
                                             static_cast<std::uint64_t>(e) * 1000003 + 2,
                                             static_cast<std::uint64_t>(r));
            std::uint64_t s3 = rng::key_hash(opt.seed, rng::Tag::replica,
                                             static_cast<std::uint64_t>(e) * 1000003 + 3,
                                             static_cast<std::uint64_t>(r));
            direct.push_back(mc_plain_value(g, xi_plus(xi0, x, 1), s1, 6.0, h));
            vx.push_back(mc_tracer_value(g, xi0, x, s2, 6.0, h, false));
            vy.push_back(mc_tracer_value(g, xi0, x, s3, 6.0, h, true));
        }
        auto sd = EmpiricalSample::from(std::move(direct), 0);
        auto sx = EmpiricalSample::from(std::move(vx), 0);
        auto sy = EmpiricalSample::from(std::move(vy), 0);
        auto r1 = two_sample_equal(sx, sd, 0.01);
        auto r2 = two_sample_equal(sy, sd, 0.01);
        if (!r1.reject && !r2.reject) ++ok_count;
    }
    bool ks_ok = ok_count >= (E * 95) / 100;
    line.add("4.two_sample_ks", "KS equality not rejected at 1% in >= 95% of paired experiments",
             ks_ok, std::to_string(ok_count) + "/" + std::to_string(E) + " non-rejections");
}

// ---------------------------------------------------------------- criterion 5

void criterion_convexity(const VerifyOptions&, Line& line) {
    EnumerationBudget budget;
    auto instances = small_instances();
    // reuse the first ten as h-curve bases
    long long rows_checked = 0, bad = 0;
    std::string first_bad;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto& inst = instances[i];
        struct Phi {
            PhiKind kind;
            Rational a;
        };
        std::vector<Phi> phis = {{PhiKind::identity, 0},
                                 {PhiKind::square, 0},
                                 {PhiKind::stop_loss, 1},
                                 {PhiKind::stop_loss, 2},
                                 {PhiKind::stop_loss, 4}};
        for (const auto& phi : phis) {
            auto rows = exact_h_curve(*inst.graph, inst.xi0, inst.x, -2, 2, phi.kind, phi.a,
                                      inst.T, inst.h, budget);
            for (const auto& row : rows) {
                ++rows_checked;
                if (row.dh < 0 || row.d2h < 0) {
                    ++bad;
                    if (first_bad.empty())
                        first_bad = "instance " + std::to_string(i) + " k=" +
                                    std::to_string(row.k);
                }
            }
        }
    }
    line.add("5.convexity", "Dh(k) >= 0 and D^2h(k) >= 0 for every phi and k in {-2..2}",
             bad == 0,
             std::to_string(rows_checked) + " (instance, phi, k) rows, " + std::to_string(bad) +
                 " sign violations" + (first_bad.empty() ? "" : "; first at " + first_bad));
}

// ---------------------------------------------------------------- criterion 6

void criterion_icx_monotonicity(const VerifyOptions& opt, Line& line) {
    // exact mode on a budgeted miniature
    {
        EnumerationBudget budget;
        Graph g = build_interval(0, 2);
        Pmf two_point = Pmf::from_entries({{1, Rational(1, 2)}, {-1, Rational(1, 2)}});
        Pmf spread = Pmf::from_entries(
            {{0, Rational(1, 2)}, {2, Rational(1, 4)}, {-2, Rational(1, 4)}});
        std::vector<std::pair<Vertex, Pmf>> sx, sy;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            sx.emplace_back(v, two_point);
            sy.emplace_back(v, spread);
        }
        VertexSet h({1});
        auto dx = enumerate_with_initial_law(g, sx, 2, h, budget);
        auto dy = enumerate_with_initial_law(g, sy, 2, h, budget);
        auto verdict = icx_dominates(Distribution(dx), Distribution(dy));
        line.add("6.exact", "minimal-config icx dominance, exact oracle mode (3-path, T=2)",
                 verdict.verdict == Verdict::holds,
                 std::string("verdict ") + verdict_name(verdict.verdict) + ", worst gap " +
                     fmt(verdict.witness_gap) + " at a=" + fmt(verdict.witness_a));
    }
    // statistical mode at scale on the 5-path and the depth-3 binary tree
    Pmf half02 = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    auto run_arena = [&](const Graph& g, VertexSet h, const std::string& id,
                         const std::string& name) {
        MinimalConfigPreset preset;
        preset.spec.p.assign(static_cast<std::size_t>(g.vertex_count()), 0.5);
        preset.spec.alpha = half02;
        preset.spec.beta = half02;
        preset.T = 6;
        preset.h = std::move(h);
        preset.replicas = opt.replicas_large;
        preset.seed = opt.seed ^ 0xC6;
        preset.workers = opt.workers;
        MinimalConfigRun run = minimal_config(g, preset);
        auto verdict = icx_dominates(Distribution(run.v), Distribution(run.v_prime));
        auto panel = consequence_panel(Distribution(run.v), Distribution(run.v_prime));
        bool pass = verdict.verdict != Verdict::fails &&
                    verdict.verdict != Verdict::inconclusive && panel.mean_consistent &&
                    panel.p0_consistent;
        line.add(id, name, pass,
                 std::string("verdict ") + verdict_name(verdict.verdict) + ", worst gap " +
                     fmt(verdict.witness_gap) + "; panel means " + fmt(panel.mean_x) + " <= " +
                     fmt(panel.mean_y) + ", zero atoms " + fmt(panel.p0_x) + " vs " +
                     fmt(panel.p0_y));
    };
    run_arena(build_interval(0, 4), VertexSet({2}), "6.path",
              "minimal-config icx dominance on the 5-path (MC, not falsified)");
    run_arena(build_regular_tree(2, 3, false), VertexSet({0}), "6.tree",
              "minimal-config icx dominance on the depth-3 binary tree (MC, not falsified)");
}

// ---------------------------------------------------------------- criterion 7

void criterion_idla(const VerifyOptions& opt, Line& line) {
    EnumerationBudget budget;
    struct Arena {
        std::shared_ptr<const Graph> g;
        Vertex root;
        std::string name;
    };
    std::vector<Arena> arenas = {
        {std::make_shared<const Graph>(build_interval(0, 3)), 0, "4-path"},
        {std::make_shared<const Graph>(build_star(4)), 0, "5-star"}};
    long long bad = 0;
    std::string detail;
    for (const auto& arena : arenas) {
        for (long long n = 1; n <= 3; ++n) {
            auto d_dlas = enumerate_motion_to_extinction(
                *arena.g, idla_initial(*arena.g, arena.root, n), budget);
            auto d_idla = enumerate_idla_exact(*arena.g, arena.root, n, budget);
            bool eq = pooled_above(d_dlas, budget.step_cap) == pooled_above(d_idla, budget.step_cap);
            if (!eq) {
                ++bad;
                detail += arena.name + " n=" + std::to_string(n) + " mismatch; ";
            }
        }
    }
    line.add("7.exact_equivalence",
             "DLAS aggregate motion law equals sequential IDLA law (exact, zero tolerance)",
             bad == 0,
             bad == 0 ? "6 instance laws equal bucket-for-bucket including overflow mass"
                      : detail);

    auto g = std::make_shared<const Graph>(build_interval(0, 3));
    IdlaPreset pa;
    pa.eta = Pmf::delta(1);
    pa.replicas = opt.replicas_large;
    pa.seed = opt.seed ^ 0xC7;
    pa.workers = opt.workers;
    EmpiricalSample la = idla_via_dlas(*g, 0, pa);
    IdlaPreset pb = pa;
    pb.eta = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    pb.seed = opt.seed ^ 0xC8;
    EmpiricalSample lb = idla_via_dlas(*g, 0, pb);
    auto verdict = icx_dominates(Distribution(la), Distribution(lb));
    line.add("7.icx", "L(eta) <=_icx L(eta') for eta = delta_1, eta' = (0 or 2 evenly)",
             verdict.verdict != Verdict::fails && verdict.verdict != Verdict::inconclusive,
             std::string("verdict ") + verdict_name(verdict.verdict) + ", worst gap " +
                 fmt(verdict.witness_gap));
}

// ---------------------------------------------------------------- criterion 8

void criterion_window(const VerifyOptions& opt, Line& line) {
    WindowConvergenceSpec spec;
    spec.T = 20;
    spec.radii = {40, 80, 160};
    spec.replicas = opt.replicas_window;
    spec.seed = opt.seed ^ 0xC9;
    spec.workers = opt.workers;
    WindowConvergenceReport rep = window_convergence(spec);
    bool pass = rep.final_stabilization >= 0.999;
    std::string detail = "stabilization fractions:";
    for (std::size_t i = 0; i < rep.stabilization.size(); ++i)
        detail += " [" + std::to_string(rep.radii[i]) + "->" + std::to_string(rep.radii[i + 1]) +
                  "] " + fmt(rep.stabilization[i]);
    line.add("8.window", "matched-seed window convergence on the continuous example line", pass,
             detail);
}

// ---------------------------------------------------------------- criterion 9

void criterion_mutation(const VerifyOptions& opt, Line& line) {
    CouplingSweepSpec spec;
    spec.runs = std::min<long long>(opt.sweep_runs, 600);
    spec.seed = opt.seed ^ 0xCA;
    spec.workers = opt.workers;
    spec.invert_tracer_priority = true;
    SweepReport rep = coupling_sweep(spec);
    bool pass = rep.violations > 0;
    std::string kinds;
    for (const auto& [what, count] : rep.violation_kinds)
        kinds += " [" + what + ": " + std::to_string(count) + "]";
    line.add("9.mutation", "inverted tracer priority is caught by the pathwise assertions", pass,
             std::to_string(rep.violations) + "/" + std::to_string(rep.runs) +
                 " runs violated;" + kinds);

    // without the rule-(d) fixpoint check the damage surfaces downstream,
    // in particular through the life-dominance assertion
    CouplingSweepSpec probe = spec;
    probe.skip_coexistence_check = true;
    SweepReport rep2 = coupling_sweep(probe);
    bool life_fired = false;
    std::string kinds2;
    for (const auto& [what, count] : rep2.violation_kinds) {
        kinds2 += " [" + what + ": " + std::to_string(count) + "]";
        if (what.find("life dominance") != std::string::npos) life_fired = true;
    }
    line.add("9.mutation_life", "with the fixpoint check muted, life dominance itself fires",
             rep2.violations > 0 && life_fired,
             std::to_string(rep2.violations) + "/" + std::to_string(rep2.runs) +
                 " runs violated;" + kinds2);
}

} // namespace

std::vector<CriterionResult> run_acceptance_group(const VerifyOptions& opt, std::ostream& log,
                                                  const std::string& group) {
    std::vector<CriterionResult> results;
    Line line{results, log};
    auto want = [&](const char* g) { return group.empty() || group == g; };
    if (want("1") || want("2"))
        criteria_example_line(opt, line, want("1"), want("2"));
    if (want("3")) criterion_coupling(opt, line);
    if (want("4")) criterion_distributional(opt, line);
    if (want("5")) criterion_convexity(opt, line);
    if (want("6")) criterion_icx_monotonicity(opt, line);
    if (want("7")) criterion_idla(opt, line);
    if (want("8")) criterion_window(opt, line);
    if (want("9")) criterion_mutation(opt, line);
    return results;
}

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt, std::ostream& log) {
    return run_acceptance_group(opt, log, "");
}

int exit_code_for(const std::vector<CriterionResult>& results) {
    bool any_violation = false, any_fail = false;
    for (const auto& r : results) {
        if (!r.pass && r.assertion_violation) any_violation = true;
        if (!r.pass) any_fail = true;
    }
    if (any_violation) return 2;
    if (any_fail) return 3;
    return 0;
}

} // namespace dlas
