#include "dlas/experiments.hpp"

#include <algorithm>
#include <cmath>

#include "dlas/channel.hpp"

namespace dlas {

namespace {

std::shared_ptr<const Graph> window_graph(long long lo, long long hi) {
    return std::make_shared<const Graph>(build_interval(lo, hi));
}

void check_example_window(long long lo, long long hi, long long T) {
    if (lo > 0 || hi < 2) throw ConfigError("window must contain {0, 1, 2}");
    if (lo > 2 - T || hi < 2 + T)
        throw ConfigError("window too small: a walk could exit within the horizon");
}

} // namespace

InitialSpec example_line_initial(ExampleVariant variant, const Graph& g) {
    Vertex s1 = g.vertex_at(1), s2 = g.vertex_at(2);
    if (s1 == kNoVertex || s2 == kNoVertex) throw ConfigError("window must contain sites 1 and 2");
    InitialSpec spec;
    Pmf coinB = Pmf::from_entries({{0, Rational(1, 2)}, {-2, Rational(1, 2)}});
    Pmf coinA = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    switch (variant) {
    case ExampleVariant::xi:
        spec.set_deterministic(s1, -1);
        spec.set_deterministic(s2, 1);
        break;
    case ExampleVariant::xi_prime:
        spec.set_pmf(s1, coinB);
        spec.set_deterministic(s2, 1);
        break;
    case ExampleVariant::xi_double_prime:
        spec.set_pmf(s1, coinB);
        spec.set_pmf(s2, coinA);
        break;
    }
    return spec;
}

EmpiricalSample example_line(const ExampleLineSpec& spec) {
    check_example_window(spec.window_lo, spec.window_hi, spec.T);
    auto g = window_graph(spec.window_lo, spec.window_hi);
    InitialSpec init = example_line_initial(spec.variant, *g);
    Vertex h0 = g->vertex_at(0);
    VertexSet h({h0});
    auto job = [&](long long r) -> double {
        std::uint64_t seed_r = rng::derive_seed(spec.seed, rng::Tag::replica, static_cast<std::uint64_t>(r));
        auto instr = std::make_shared<const Instructions>(seed_r, g, spec.time_model);
        InitialCondition xi0 = sample_initial(init, *g, seed_r);
        SimulateOptions opt;
        opt.horizon = static_cast<double>(spec.T);
        opt.occupation_set = h;
        return simulate(g, xi0, instr, opt).v_T;
    };
    auto values = parallel_replicas<double>(spec.replicas, spec.workers, job);
    return EmpiricalSample::from(std::move(values), spec.seed);
}

ExactDistribution example_line_exact(ExampleVariant variant, long long T, long long window_lo,
                                     long long window_hi, const EnumerationBudget& budget) {
    check_example_window(window_lo, window_hi, T);
    auto g = window_graph(window_lo, window_hi);
    Vertex s1 = g->vertex_at(1), s2 = g->vertex_at(2);
    VertexSet h({g->vertex_at(0)});
    // enumerate over the initial coins exactly
    struct Case {
        long long c1, c2;
        Rational p;
    };
    std::vector<Case> cases;
    switch (variant) {
    case ExampleVariant::xi:
        cases = {{-1, 1, Rational(1)}};
        break;
    case ExampleVariant::xi_prime:
        cases = {{0, 1, Rational(1, 2)}, {-2, 1, Rational(1, 2)}};
        break;
    case ExampleVariant::xi_double_prime:
        cases = {{0, 0, Rational(1, 4)},
                 {0, 2, Rational(1, 4)},
                 {-2, 0, Rational(1, 4)},
                 {-2, 2, Rational(1, 4)}};
        break;
    }
    ExactDistribution out;
    for (const auto& c : cases) {
        InitialCondition xi0(g->vertex_count());
        xi0.set(s1, c.c1);
        xi0.set(s2, c.c2);
        ExactDistribution part = enumerate_exact(*g, xi0, T, Statistic::occupation, h, budget);
        for (std::size_t i = 0; i < part.values.size(); ++i)
            out.add(part.values[i], part.probs[i] * c.p);
    }
    out.finalize();
    return out;
}

MinimalConfigRun minimal_config(const Graph& g, const MinimalConfigPreset& preset) {
    preset.spec.validate(g);
    auto gp = std::make_shared<const Graph>(g);
    auto job = [&](long long r) -> std::pair<double, double> {
        std::uint64_t seed_r =
            rng::derive_seed(preset.seed, rng::Tag::replica, static_cast<std::uint64_t>(r));
        auto instr = std::make_shared<const Instructions>(seed_r, gp, preset.time_model);
        auto [xi, xip] = sample_minimal_pair(preset.spec, *gp, seed_r);
        SimulateOptions opt;
        opt.horizon = preset.T;
        opt.occupation_set = preset.h;
        double v = simulate(gp, xi, instr, opt).v_T;
        double vp = simulate(gp, xip, instr, opt).v_T;
        return {v, vp};
    };
    auto pairs = parallel_replicas<std::pair<double, double>>(preset.replicas, preset.workers, job);
    std::vector<double> v, vp;
    v.reserve(pairs.size());
    vp.reserve(pairs.size());
    for (auto& [a, b] : pairs) {
        v.push_back(a);
        vp.push_back(b);
    }
    MinimalConfigRun run{EmpiricalSample::from(std::move(v), preset.seed),
                         EmpiricalSample::from(std::move(vp), preset.seed)};
    return run;
}

EmpiricalSample parking_root_count(const ParkingPreset& preset) {
    if (preset.eta.min_value() < 0) throw ConfigError("eta must be a nonnegative-integer pmf");
    auto job = [&](long long r) -> double {
        std::uint64_t seed_r =
            rng::derive_seed(preset.seed, rng::Tag::replica, static_cast<std::uint64_t>(r));
        std::shared_ptr<const Graph> g;
        if (preset.tree.regular_arity) {
            g = std::make_shared<const Graph>(
                build_regular_tree(*preset.tree.regular_arity, preset.tree.depth, true));
        } else if (preset.tree.offspring) {
            g = std::make_shared<const Graph>(
                sample_galton_watson(*preset.tree.offspring, preset.tree.depth, seed_r, true));
        } else {
            throw ConfigError("tree spec needs an arity or an offspring pmf");
        }
        auto instr = std::make_shared<const Instructions>(seed_r, g, TimeModel::discrete);
        InitialCondition xi0(g->vertex_count());
        for (Vertex v = 0; v < g->vertex_count(); ++v) {
            double u = rng::uniform01(
                rng::key_hash(seed_r, rng::Tag::initial, g->stream_label(v), 7));
            xi0.set(v, preset.eta.sample(u) - 1); // one B per site, overlap cancelled
        }
        EngineOptions eopt;
        Engine eng(g, instr, xi0, TracerMode::none, kNoVertex, eopt);
        run_to_quiescence(eng);
        long long initial_root = std::max(xi0.count(*g->root()), 0LL);
        return static_cast<double>(initial_root + eng.root_arrivals());
    };
    auto values = parallel_replicas<double>(preset.replicas, preset.workers, job);
    return EmpiricalSample::from(std::move(values), preset.seed);
}

InitialCondition idla_initial(const Graph& g, Vertex root, long long n) {
    if (!g.valid_vertex(root)) throw ConfigError("root not in graph");
    if (n > g.vertex_count())
        throw ConfigError("n exceeds the vertex count: the last walker could never settle");
    InitialCondition xi0(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) xi0.set(v, -1);
    xi0.set(root, n - 1); // the root B-particle cancels one arrival
    return xi0;
}

EmpiricalSample idla_via_dlas(const Graph& g, Vertex root, const IdlaPreset& preset) {
    auto gp = std::make_shared<const Graph>(g);
    auto job = [&](long long r) -> double {
        std::uint64_t seed_r =
            rng::derive_seed(preset.seed, rng::Tag::replica, static_cast<std::uint64_t>(r));
        long long n;
        if (preset.n) {
            n = *preset.n;
        } else if (preset.eta) {
            double u = rng::uniform01(rng::key_hash(seed_r, rng::Tag::initial, 0, 11));
            n = preset.eta->sample(u);
        } else {
            throw ConfigError("idla preset needs n or eta");
        }
        InitialCondition xi0 = idla_initial(*gp, root, n);
        auto instr = std::make_shared<const Instructions>(seed_r, gp, TimeModel::discrete);
        EngineOptions eopt;
        Engine eng(gp, instr, xi0, TracerMode::none, kNoVertex, eopt);
        int acc = eng.add_accumulator(View::counts, VertexSet::all(gp->vertex_count()));
        run_to_quiescence(eng);
        return eng.accumulator_value(acc);
    };
    auto values = parallel_replicas<double>(preset.replicas, preset.workers, job);
    return EmpiricalSample::from(std::move(values), preset.seed);
}

EmpiricalSample sequential_idla(const Graph& g, Vertex root, long long n, long long replicas,
                                std::uint64_t seed, int workers) {
    auto job = [&](long long r) -> double {
        std::uint64_t seed_r = rng::derive_seed(seed, rng::Tag::replica, static_cast<std::uint64_t>(r));
        return static_cast<double>(sequential_idla_sample(g, root, n, seed_r));
    };
    auto values = parallel_replicas<double>(replicas, workers, job);
    return EmpiricalSample::from(std::move(values), seed);
}

namespace {

struct SweepInstance {
    std::shared_ptr<const Graph> graph;
    InitialCondition xi0;
    Vertex x;
    double T;
    VertexSet h;
    TimeModel tm;
};

SweepInstance make_instance(const CouplingSweepSpec& spec, long long r) {
    std::uint64_t s = rng::derive_seed(spec.seed, rng::Tag::family, static_cast<std::uint64_t>(r));
    auto u = [&](int slot) { return rng::uniform01(rng::key_hash(s, rng::Tag::family, slot)); };
    SweepInstance inst;

    bool example = spec.include_example_arena && (r % 7 == 0);
    if (example) {
        inst.graph = std::make_shared<const Graph>(build_interval(-10, 12));
        InitialCondition xi0(inst.graph->vertex_count());
        xi0.set(inst.graph->vertex_at(1), -1);
        xi0.set(inst.graph->vertex_at(2), 1);
        inst.xi0 = xi0;
        inst.x = inst.graph->vertex_at(2);
        inst.h = VertexSet({inst.graph->vertex_at(0)});
    } else {
        int shape = static_cast<int>(u(0) * 4);
        int n = 3 + static_cast<int>(u(1) * (spec.max_vertices - 2));
        n = std::min(n, spec.max_vertices);
        Graph g = [&] {
            switch (shape) {
            case 0:
                return build_interval(0, n - 1);
            case 1: { // cycle
                Graph::Builder b(n);
                for (int v = 0; v < n; ++v) b.add_edge(v, (v + 1) % n);
                return std::move(b).build();
            }
            case 2:
                return build_star(std::max(2, n - 1));
            default: {
                int a = 2, bdim = std::max(2, n / 2);
                return build_lattice_box({a, bdim});
            }
            }
        }();
        inst.graph = std::make_shared<const Graph>(std::move(g));
        InitialCondition xi0(inst.graph->vertex_count());
        for (Vertex v = 0; v < inst.graph->vertex_count(); ++v) {
            double uv = rng::uniform01(rng::key_hash(s, rng::Tag::family, 100 + v));
            long long c = 0;
            if (uv < 0.18)
                c = -2;
            else if (uv < 0.42)
                c = -1;
            else if (uv < 0.62)
                c = 0;
            else if (uv < 0.85)
                c = 1;
            else
                c = 2;
            xi0.set(v, c);
        }
        inst.xi0 = xi0;
        inst.x = static_cast<Vertex>(u(2) * inst.graph->vertex_count());
        if (!inst.graph->valid_vertex(inst.x)) inst.x = 0;
        // H: everything, or a random nonempty subset
        if (u(3) < 0.5) {
            inst.h = VertexSet::all(inst.graph->vertex_count());
        } else {
            std::vector<Vertex> hs;
            for (Vertex v = 0; v < inst.graph->vertex_count(); ++v)
                if (rng::uniform01(rng::key_hash(s, rng::Tag::family, 200 + v)) < 0.4)
                    hs.push_back(v);
            if (hs.empty()) hs.push_back(inst.x);
            inst.h = VertexSet(std::move(hs));
        }
    }
    int k = spec.k_lo + static_cast<int>(static_cast<long long>(r) %
                                         (spec.k_hi - spec.k_lo + 1));
    inst.xi0.set(inst.x, k);
    inst.tm = (u(4) < spec.continuous_fraction) ? TimeModel::continuous : TimeModel::discrete;
    inst.T = (inst.tm == TimeModel::discrete) ? 4 + 2 * static_cast<int>(u(5) * 3)
                                              : 3.0 + 2.0 * u(5);
    return inst;
}

} // namespace

SweepReport coupling_sweep(const CouplingSweepSpec& spec) {
    struct RunResult {
        bool violated = false;
        std::string message, replay;
        bool sdx = false, sdy = false, se = false, slife = false;
        long long checks = 0;
        SweepRow row{};
        std::vector<std::array<double, 5>> curve;
    };
    auto job = [&](long long r) -> RunResult {
        SweepInstance inst = make_instance(spec, r);
        std::uint64_t seed_r =
            rng::derive_seed(spec.seed, rng::Tag::replica, static_cast<std::uint64_t>(r));
        auto instr = std::make_shared<const Instructions>(seed_r, inst.graph, inst.tm);
        CoupledOptions copt;
        copt.horizon = inst.T;
        copt.h = inst.h;
        copt.asserts = AssertLevel::full;
        copt.invert_tracer_priority = spec.invert_tracer_priority;
        copt.skip_coexistence_check = spec.skip_coexistence_check;
        copt.collect_life_curve = r < spec.life_curve_runs;
        RunResult res;
        try {
            CouplingOutcome out = run_coupled(inst.graph, inst.xi0, inst.x, instr, copt);
            res.sdx = out.strict_dx;
            res.sdy = out.strict_dy;
            res.se = out.strict_e;
            res.slife = out.strict_life;
            res.checks = out.checks_run;
            res.row = {r,          out.phi,    out.phi_x,  out.phi_y,
                       out.phi_xy, out.life_x, out.life_y, out.life_y_hat};
            res.curve = std::move(out.life_curve);
        } catch (const CouplingViolation& v) {
            res.violated = true;
            res.message = v.what();
            res.replay = v.replay + " run=" + std::to_string(r);
        }
        return res;
    };
    auto results = parallel_replicas<RunResult>(spec.runs, spec.workers, job);
    SweepReport rep;
    rep.runs = spec.runs;
    for (const auto& r : results) {
        if (r.violated) {
            ++rep.violations;
            ++rep.violation_kinds[r.message];
            if (rep.first_violation.empty()) {
                rep.first_violation = r.message;
                rep.first_replay = r.replay;
            }
        } else if (spec.collect_rows) {
            rep.rows.push_back(r.row);
            if (!r.curve.empty()) rep.life_curves.emplace_back(r.row.run, r.curve);
        }
        rep.strict_dx += r.sdx;
        rep.strict_dy += r.sdy;
        rep.strict_e += r.se;
        rep.strict_life += r.slife;
        rep.checks_run += r.checks;
    }
    return rep;
}

WindowConvergenceReport window_convergence(const WindowConvergenceSpec& spec) {
    if (spec.radii.size() < 2) throw ConfigError("window convergence needs at least two radii");
    for (std::size_t i = 1; i < spec.radii.size(); ++i)
        if (spec.radii[i] <= spec.radii[i - 1]) throw ConfigError("radii must increase");

    std::vector<std::vector<double>> per_radius;
    for (long long radius : spec.radii) {
        ExampleLineSpec es;
        es.variant = spec.variant;
        es.T = spec.T;
        es.window_lo = -radius;
        es.window_hi = radius + 2;
        es.replicas = spec.replicas;
        es.seed = spec.seed;
        es.time_model = spec.time_model;
        es.workers = spec.workers;
        // deliberately no walk-cannot-exit refusal here: detecting unstable
        // under-windowed runs is the point of this probe
        if (radius < 3) throw ConfigError("radius must cover the initial sites");
        auto g = window_graph(es.window_lo, es.window_hi);
        InitialSpec init = example_line_initial(es.variant, *g);
        VertexSet h({g->vertex_at(0)});
        auto job = [&](long long r) -> double {
            std::uint64_t seed_r =
                rng::derive_seed(es.seed, rng::Tag::replica, static_cast<std::uint64_t>(r));
            auto instr = std::make_shared<const Instructions>(seed_r, g, es.time_model);
            InitialCondition xi0 = sample_initial(init, *g, seed_r);
            SimulateOptions opt;
            opt.horizon = static_cast<double>(es.T);
            opt.occupation_set = h;
            return simulate(g, xi0, instr, opt).v_T;
        };
        per_radius.push_back(parallel_replicas<double>(es.replicas, es.workers, job));
    }
    WindowConvergenceReport rep;
    rep.radii = spec.radii;
    for (std::size_t i = 1; i < per_radius.size(); ++i) {
        long long stable = 0;
        for (std::size_t r = 0; r < per_radius[i].size(); ++r)
            if (per_radius[i][r] == per_radius[i - 1][r]) ++stable;
        rep.stabilization.push_back(static_cast<double>(stable) /
                                    static_cast<double>(per_radius[i].size()));
    }
    rep.final_stabilization = rep.stabilization.back();
    return rep;
}

void run_to_quiescence(Engine& eng, double step_guard) {
    while (!eng.quiescent()) {
        double e = eng.next_event_time();
        if (e == Engine::kNever) break;
        if (e > step_guard)
            throw SimulationError("quiescence not reached within the step guard");
        eng.advance_to(e);
    }
}

} // namespace dlas
