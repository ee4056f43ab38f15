#include "dlas/runconfig.hpp"

#include <set>

#include <json.hpp>

#include "dlas/experiments.hpp"
#include "dlas/io.hpp"
#include "dlas/orders.hpp"

namespace dlas {

using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

void strict_keys(const json& j, const std::set<std::string>& allowed, const std::string& ctx) {
    if (!j.is_object()) throw ConfigError(ctx + " must be an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown field '" + it.key() + "' in " + ctx);
}

std::uint64_t parse_seed(const json& j, const std::string& ctx) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer()) {
        auto v = j.get<long long>();
        if (v < 0) throw ConfigError(ctx + ": seed must be nonnegative");
        return static_cast<std::uint64_t>(v);
    }
    if (j.is_string()) return std::stoull(j.get<std::string>());
    throw ConfigError(ctx + ": seed must be an integer or string");
}

Rational parse_prob(const json& j, const std::string& ctx) {
    if (j.is_string()) return rational_from_decimal(j.get<std::string>());
    if (j.is_number()) return rational_from_double(j.get<double>());
    throw ConfigError(ctx + ": probability must be a decimal string or number");
}

Pmf parse_pmf(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty())
        throw ConfigError(ctx + ": pmf must be a nonempty array of [value, prob] pairs");
    std::vector<std::pair<long long, Rational>> entries;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2)
            throw ConfigError(ctx + ": pmf entries are [value, prob] pairs");
        entries.emplace_back(e[0].get<long long>(), parse_prob(e[1], ctx));
    }
    return Pmf::from_entries(std::move(entries));
}

std::shared_ptr<const Graph> parse_graph(const json& j, std::uint64_t seed) {
    strict_keys(j, {"type", "lo", "hi", "dims", "leaves", "arity", "depth", "directed",
                    "offspring", "tree_seed"},
                "graph");
    std::string type = j.at("type").get<std::string>();
    if (type == "interval")
        return std::make_shared<const Graph>(
            build_interval(j.at("lo").get<long long>(), j.at("hi").get<long long>()));
    if (type == "box")
        return std::make_shared<const Graph>(build_lattice_box(j.at("dims").get<std::vector<int>>()));
    if (type == "star")
        return std::make_shared<const Graph>(build_star(j.at("leaves").get<int>()));
    if (type == "regular_tree")
        return std::make_shared<const Graph>(build_regular_tree(
            j.at("arity").get<int>(), j.at("depth").get<int>(), j.value("directed", false)));
    if (type == "galton_watson") {
        std::uint64_t ts = j.contains("tree_seed") ? parse_seed(j.at("tree_seed"), "graph") : seed;
        return std::make_shared<const Graph>(
            sample_galton_watson(parse_pmf(j.at("offspring"), "graph.offspring"),
                                 j.at("depth").get<int>(), ts, j.value("directed", true)));
    }
    throw ConfigError("unknown graph type '" + type + "'");
}

Vertex resolve_site(const Graph& g, long long key) {
    Vertex v = g.vertex_at(key);
    if (v == kNoVertex) throw ConfigError("no vertex with coordinate " + std::to_string(key));
    return v;
}

VertexSet parse_vertex_set(const Graph& g, const json& j, const std::string& ctx) {
    if (j.is_string() && j.get<std::string>() == "all") return VertexSet::all(g.vertex_count());
    if (!j.is_array()) throw ConfigError(ctx + " must be a coordinate array or \"all\"");
    std::vector<Vertex> vs;
    for (const auto& e : j) vs.push_back(resolve_site(g, e.get<long long>()));
    return VertexSet(std::move(vs));
}

InitialCondition parse_initial(const Graph& g, const json& j) {
    if (!j.is_object()) throw ConfigError("xi0 must map coordinates to signed counts");
    InitialCondition xi0(g.vertex_count());
    for (auto it = j.begin(); it != j.end(); ++it)
        xi0.set(resolve_site(g, std::stoll(it.key())), it.value().get<long long>());
    return xi0;
}

TimeModel parse_time_model(const json& j) {
    std::string s = j.get<std::string>();
    if (s == "discrete") return TimeModel::discrete;
    if (s == "continuous") return TimeModel::continuous;
    throw ConfigError("time_model must be 'discrete' or 'continuous'");
}

EnumerationBudget parse_budget(const json& j) {
    EnumerationBudget b;
    if (j.is_null()) return b;
    strict_keys(j, {"max_states", "max_worlds", "step_cap", "max_time"}, "budget");
    if (j.contains("max_states")) b.max_states = j.at("max_states").get<long long>();
    if (j.contains("max_worlds")) b.max_worlds = j.at("max_worlds").get<long long>();
    if (j.contains("step_cap")) b.step_cap = j.at("step_cap").get<long long>();
    if (j.contains("max_time")) b.max_time = j.at("max_time").get<long long>();
    return b;
}

// ---------------------------------------------------------------- outputs

std::string sample_csv(const std::vector<std::pair<std::string, const EmpiricalSample*>>& cols) {
    io::CsvWriter w;
    std::vector<std::string> header{"replica"};
    for (const auto& [name, _] : cols) header.push_back(name);
    w.header(header);
    std::size_t n = cols.empty() ? 0 : cols.front().second->values.size();
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::string> row{std::to_string(i)};
        for (const auto& [_, s] : cols) row.push_back(io::format_double(s->values[i]));
        w.row(row);
    }
    return w.text();
}

std::string stoploss_tsv(const std::vector<std::pair<std::string, const EmpiricalSample*>>& cols) {
    io::CsvWriter w('\t');
    std::vector<std::string> header{"a"};
    for (const auto& [name, _] : cols) header.push_back("stop_loss_" + name);
    w.header(header);
    if (cols.empty()) return w.text();
    std::vector<double> grid;
    for (const auto& [_, s] : cols) {
        if (s->values.empty()) continue;
        for (int q = 0; q <= 20; ++q) {
            std::size_t i = std::min(s->values.size() - 1,
                                     static_cast<std::size_t>(q * (s->values.size() - 1) / 20));
            grid.push_back(s->values[i]);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    for (double a : grid) {
        std::vector<std::string> row{io::format_double(a)};
        for (const auto& [_, s] : cols) row.push_back(io::format_double(s->stop_loss(a)));
        w.row(row);
    }
    return w.text();
}

void write_bundle(const RunConfig& cfg, const json& summary_in, const std::string& replicas_csv,
                  const std::string& sl_tsv, long long replicas) {
    std::filesystem::path dir(cfg.out_dir);
    // the manifest alone reproduces the run: it embeds the whole config
    json manifest{
        {"schema_version", cfg.schema_version},
        {"preset", cfg.preset},
        {"master_seed", cfg.seed},
        {"workers", cfg.workers},
        {"config", json::parse(cfg.raw)},
        {"config_hash", io::fnv1a(cfg.raw)},
        {"version", kVersion},
        {"replicas", replicas},
        {"outputs", json::array({"summary.json", "replicas.csv", "stoploss.tsv"})},
    };
    json summary = summary_in;
    summary["master_seed"] = cfg.seed;
    summary["config_hash"] = io::fnv1a(cfg.raw);
    io::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    io::write_text_file(dir / "replicas.csv", replicas_csv);
    io::write_text_file(dir / "stoploss.tsv", sl_tsv);
    io::write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

json verdict_json(const OrderVerdict& v) {
    json gaps = json::array();
    for (const auto& g : v.gaps)
        gaps.push_back({{"a", g.a}, {"gap", g.gap}, {"lo", g.lo}, {"hi", g.hi}});
    return json{{"relation", v.relation == Relation::icx ? "icx" : "sd"},
                {"verdict", verdict_name(v.verdict)},
                {"exact", v.exact},
                {"witness_a", v.witness_a},
                {"witness_gap", v.witness_gap},
                {"gaps", gaps}};
}

// ---------------------------------------------------------------- presets

int preset_example_line(const RunConfig& cfg, const json& block) {
    strict_keys(block,
                {"variant", "T", "window", "replicas", "time_model", "trace_replica",
                 "checkpoints"},
                "example_line");
    ExampleLineSpec spec;
    std::string v = block.value("variant", "xi");
    if (v == "xi")
        spec.variant = ExampleVariant::xi;
    else if (v == "xi_prime")
        spec.variant = ExampleVariant::xi_prime;
    else if (v == "xi_double_prime")
        spec.variant = ExampleVariant::xi_double_prime;
    else
        throw ConfigError("variant must be xi | xi_prime | xi_double_prime");
    spec.T = block.value("T", 20LL);
    if (block.contains("window")) {
        spec.window_lo = block.at("window").at(0).get<long long>();
        spec.window_hi = block.at("window").at(1).get<long long>();
    } else {
        spec.window_lo = -(spec.T + 2);
        spec.window_hi = spec.T + 12;
    }
    spec.replicas = block.value("replicas", 100000LL);
    spec.seed = cfg.seed;
    spec.workers = cfg.workers;
    if (block.contains("time_model")) spec.time_model = parse_time_model(block.at("time_model"));
    EmpiricalSample s = example_line(spec);
    json summary{{"preset", "example-line"},
                 {"variant", v},
                 {"T", spec.T},
                 {"window", {spec.window_lo, spec.window_hi}},
                 {"mean", s.mean()},
                 {"variance", s.variance()},
                 {"p_zero", s.prob_zero()},
                 {"max", s.values.empty() ? 0.0 : s.values.back()}};
    write_bundle(cfg, summary, sample_csv({{"v_T", &s}}), stoploss_tsv({{"v_T", &s}}),
                 spec.replicas);

    // optional per-replica artifacts: event-log CSV and checkpointed V_T
    if (block.contains("trace_replica") || block.contains("checkpoints")) {
        long long r = block.value("trace_replica", 0LL);
        auto g = std::make_shared<const Graph>(build_interval(spec.window_lo, spec.window_hi));
        InitialSpec init = example_line_initial(spec.variant, *g);
        std::uint64_t seed_r = rng::derive_seed(cfg.seed, rng::Tag::replica,
                                                static_cast<std::uint64_t>(r));
        auto instr = std::make_shared<const Instructions>(seed_r, g, spec.time_model);
        SimulateOptions sopt;
        sopt.horizon = static_cast<double>(spec.T);
        sopt.occupation_set = VertexSet({g->vertex_at(0)});
        sopt.log_events = block.contains("trace_replica");
        if (block.contains("checkpoints"))
            sopt.checkpoints = block.at("checkpoints").get<std::vector<double>>();
        Trajectory traj = simulate(g, sample_initial(init, *g, seed_r), instr, sopt);
        if (sopt.log_events) {
            io::CsvWriter w;
            w.header({"time", "vertex", "delta", "species"});
            for (const auto& ev : traj.events)
                w.row({io::format_double(ev.time), std::to_string(g->coordinate(ev.vertex)),
                       std::to_string(ev.delta), std::string(1, ev.species)});
            io::write_text_file(std::filesystem::path(cfg.out_dir) / "events.csv", w.text());
        }
        if (!sopt.checkpoints.empty()) {
            io::CsvWriter w;
            w.header({"replica", "T", "value"});
            for (const auto& [t, value] : traj.checkpoint_values)
                w.row({std::to_string(r), io::format_double(t), io::format_double(value)});
            io::write_text_file(std::filesystem::path(cfg.out_dir) / "checkpoints.csv", w.text());
        }
    }
    return 0;
}

int preset_minimal_config(const RunConfig& cfg, const json& block) {
    strict_keys(block, {"graph", "p", "alpha", "beta", "T", "h", "replicas", "time_model"},
                "minimal_config");
    auto g = parse_graph(block.at("graph"), cfg.seed);
    MinimalConfigPreset preset;
    if (block.at("p").is_number()) {
        preset.spec.p.assign(static_cast<std::size_t>(g->vertex_count()),
                             block.at("p").get<double>());
    } else {
        preset.spec.p = block.at("p").get<std::vector<double>>();
    }
    preset.spec.alpha = parse_pmf(block.at("alpha"), "alpha");
    preset.spec.beta = parse_pmf(block.at("beta"), "beta");
    preset.T = block.value("T", 6.0);
    preset.h = parse_vertex_set(*g, block.at("h"), "h");
    preset.replicas = block.value("replicas", 100000LL);
    preset.seed = cfg.seed;
    preset.workers = cfg.workers;
    if (block.contains("time_model"))
        preset.time_model = parse_time_model(block.at("time_model"));
    MinimalConfigRun run = minimal_config(*g, preset);
    OrderOptions oopt;
    oopt.significance = cfg.significance;
    auto verdict = icx_dominates(Distribution(run.v), Distribution(run.v_prime), oopt);
    auto panel = consequence_panel(Distribution(run.v), Distribution(run.v_prime), oopt);
    json summary{{"preset", "minimal-config"},
                 {"mean_v", run.v.mean()},
                 {"mean_v_prime", run.v_prime.mean()},
                 {"icx", verdict_json(verdict)},
                 {"panel",
                  {{"mean_consistent", panel.mean_consistent},
                   {"var_consistent", panel.var_consistent},
                   {"p0_consistent", panel.p0_consistent}}}};
    write_bundle(cfg, summary, sample_csv({{"v", &run.v}, {"v_prime", &run.v_prime}}),
                 stoploss_tsv({{"v", &run.v}, {"v_prime", &run.v_prime}}), preset.replicas);
    return verdict.verdict == Verdict::fails ? 3 : 0;
}

int preset_parking(const RunConfig& cfg, const json& block) {
    strict_keys(block, {"tree", "eta", "replicas"}, "parking");
    ParkingPreset preset;
    const json& tree = block.at("tree");
    strict_keys(tree, {"arity", "offspring", "depth"}, "parking.tree");
    if (tree.contains("arity")) preset.tree.regular_arity = tree.at("arity").get<int>();
    if (tree.contains("offspring"))
        preset.tree.offspring = parse_pmf(tree.at("offspring"), "parking.tree.offspring");
    preset.tree.depth = tree.value("depth", 3);
    preset.eta = parse_pmf(block.at("eta"), "eta");
    preset.replicas = block.value("replicas", 100000LL);
    preset.seed = cfg.seed;
    preset.workers = cfg.workers;
    EmpiricalSample s = parking_root_count(preset);
    json summary{{"preset", "parking"},
                 {"depth", preset.tree.depth},
                 {"mean_root_arrivals", s.mean()},
                 {"p_zero", s.prob_zero()},
                 {"max", s.values.empty() ? 0.0 : s.values.back()}};
    write_bundle(cfg, summary, sample_csv({{"root_arrivals", &s}}),
                 stoploss_tsv({{"root_arrivals", &s}}), preset.replicas);
    return 0;
}

int preset_idla(const RunConfig& cfg, const json& block) {
    strict_keys(block, {"graph", "root", "n", "eta", "eta_prime", "replicas"}, "idla");
    auto g = parse_graph(block.at("graph"), cfg.seed);
    Vertex root = resolve_site(*g, block.value("root", 0LL));
    IdlaPreset preset;
    if (block.contains("n")) preset.n = block.at("n").get<long long>();
    if (block.contains("eta")) preset.eta = parse_pmf(block.at("eta"), "eta");
    preset.replicas = block.value("replicas", 100000LL);
    preset.seed = cfg.seed;
    preset.workers = cfg.workers;
    EmpiricalSample s = idla_via_dlas(*g, root, preset);
    json summary{{"preset", "idla"},
                 {"mean_motion_time", s.mean()},
                 {"max", s.values.empty() ? 0.0 : s.values.back()}};
    int code = 0;
    if (block.contains("eta_prime")) {
        IdlaPreset other = preset;
        other.n.reset();
        other.eta = parse_pmf(block.at("eta_prime"), "eta_prime");
        other.seed = cfg.seed ^ 0x1d1aULL;
        EmpiricalSample sp = idla_via_dlas(*g, root, other);
        OrderOptions oopt;
        oopt.significance = cfg.significance;
        auto verdict = icx_dominates(Distribution(s), Distribution(sp), oopt);
        summary["icx"] = verdict_json(verdict);
        if (verdict.verdict == Verdict::fails) code = 3;
        write_bundle(cfg, summary, sample_csv({{"motion", &s}, {"motion_prime", &sp}}),
                     stoploss_tsv({{"motion", &s}, {"motion_prime", &sp}}), preset.replicas);
        return code;
    }
    write_bundle(cfg, summary, sample_csv({{"motion", &s}}), stoploss_tsv({{"motion", &s}}),
                 preset.replicas);
    return code;
}

int preset_coupling_sweep(const RunConfig& cfg, const json& block) {
    strict_keys(block,
                {"runs", "k_lo", "k_hi", "max_vertices", "include_example_arena",
                 "continuous_fraction", "life_curve_runs"},
                "coupling_sweep");
    CouplingSweepSpec spec;
    spec.runs = block.value("runs", 10000LL);
    spec.k_lo = block.value("k_lo", -2);
    spec.k_hi = block.value("k_hi", 2);
    spec.max_vertices = block.value("max_vertices", 8);
    spec.include_example_arena = block.value("include_example_arena", true);
    spec.continuous_fraction = block.value("continuous_fraction", 0.2);
    spec.seed = cfg.seed;
    spec.workers = cfg.workers;
    spec.invert_tracer_priority = cfg.invert_tracer_priority;
    spec.collect_rows = true;
    spec.life_curve_runs = block.value("life_curve_runs", 0LL);
    SweepReport rep = coupling_sweep(spec);
    if (spec.life_curve_runs > 0) {
        io::CsvWriter lc('\t');
        lc.header({"replica", "t", "life_x", "life_y", "life_x_hat", "life_y_hat"});
        for (const auto& [run, curve] : rep.life_curves)
            for (const auto& row : curve)
                lc.row({std::to_string(run), io::format_double(row[0]),
                        io::format_double(row[1]), io::format_double(row[2]),
                        io::format_double(row[3]), io::format_double(row[4])});
        io::write_text_file(std::filesystem::path(cfg.out_dir) / "lifecurves.tsv", lc.text());
    }
    io::CsvWriter w;
    w.header({"replica", "phi", "phi_x", "phi_y", "phi_xy", "life_x", "life_y", "life_y_hat"});
    for (const auto& r : rep.rows)
        w.row({std::to_string(r.run), io::format_double(r.phi), io::format_double(r.phi_x),
               io::format_double(r.phi_y), io::format_double(r.phi_xy),
               io::format_double(r.life_x), io::format_double(r.life_y),
               io::format_double(r.life_y_hat)});
    json summary{{"preset", "coupling-sweep"},
                 {"runs", rep.runs},
                 {"violations", rep.violations},
                 {"first_violation", rep.first_violation},
                 {"first_replay", rep.first_replay},
                 {"checks_run", rep.checks_run},
                 {"strict_dx", rep.strict_dx},
                 {"strict_dy", rep.strict_dy},
                 {"strict_e", rep.strict_e},
                 {"strict_life", rep.strict_life}};
    write_bundle(cfg, summary, w.text(), "a\n", spec.runs);
    return rep.ok() ? 0 : 2;
}

int preset_h_curve(const RunConfig& cfg, const json& block) {
    strict_keys(block, {"graph", "xi0", "x", "k_lo", "k_hi", "phi", "a", "T", "h", "budget"},
                "h_curve");
    auto g = parse_graph(block.at("graph"), cfg.seed);
    InitialCondition xi0 =
        block.contains("xi0") ? parse_initial(*g, block.at("xi0")) : InitialCondition(g->vertex_count());
    Vertex x = resolve_site(*g, block.at("x").get<long long>());
    std::string phi_s = block.value("phi", "identity");
    PhiKind phi = PhiKind::identity;
    if (phi_s == "square")
        phi = PhiKind::square;
    else if (phi_s == "stop_loss")
        phi = PhiKind::stop_loss;
    else if (phi_s != "identity")
        throw ConfigError("phi must be identity | square | stop_loss");
    Rational a = block.contains("a") ? parse_prob(block.at("a"), "a") : Rational(0);
    EnumerationBudget budget = parse_budget(block.contains("budget") ? block.at("budget") : json());
    auto rows = exact_h_curve(*g, xi0, x, block.value("k_lo", -2LL), block.value("k_hi", 2LL), phi,
                              a, block.value("T", 3LL), parse_vertex_set(*g, block.at("h"), "h"),
                              budget);
    io::CsvWriter w;
    w.header({"k", "h", "dh", "d2h", "h_exact", "dh_exact", "d2h_exact"});
    bool monotone = true, convex = true;
    for (const auto& r : rows) {
        w.row({std::to_string(r.k), io::format_double(to_double(r.h)),
               io::format_double(to_double(r.dh)), io::format_double(to_double(r.d2h)),
               rational_to_string(r.h), rational_to_string(r.dh), rational_to_string(r.d2h)});
        monotone = monotone && r.dh >= 0;
        convex = convex && r.d2h >= 0;
    }
    json summary{{"preset", "h-curve"},
                 {"phi", phi_s},
                 {"monotone", monotone},
                 {"convex", convex},
                 {"rows", rows.size()}};
    write_bundle(cfg, summary, w.text(), "a\n", static_cast<long long>(rows.size()));
    return (monotone && convex) ? 0 : 3;
}

int preset_window_convergence(const RunConfig& cfg, const json& block) {
    strict_keys(block, {"variant", "T", "radii", "replicas", "time_model"}, "window_convergence");
    WindowConvergenceSpec spec;
    std::string v = block.value("variant", "xi_prime");
    if (v == "xi")
        spec.variant = ExampleVariant::xi;
    else if (v == "xi_prime")
        spec.variant = ExampleVariant::xi_prime;
    else if (v == "xi_double_prime")
        spec.variant = ExampleVariant::xi_double_prime;
    else
        throw ConfigError("variant must be xi | xi_prime | xi_double_prime");
    spec.T = block.value("T", 20LL);
    if (block.contains("radii")) spec.radii = block.at("radii").get<std::vector<long long>>();
    spec.replicas = block.value("replicas", 2000LL);
    if (block.contains("time_model")) spec.time_model = parse_time_model(block.at("time_model"));
    spec.seed = cfg.seed;
    spec.workers = cfg.workers;
    WindowConvergenceReport rep = window_convergence(spec);
    io::CsvWriter w;
    w.header({"radius_from", "radius_to", "stabilization"});
    for (std::size_t i = 0; i < rep.stabilization.size(); ++i)
        w.row({std::to_string(rep.radii[i]), std::to_string(rep.radii[i + 1]),
               io::format_double(rep.stabilization[i])});
    json summary{{"preset", "window-convergence"},
                 {"final_stabilization", rep.final_stabilization},
                 {"radii", rep.radii}};
    write_bundle(cfg, summary, w.text(), "a\n", spec.replicas);
    return 0;
}

} // namespace

RunConfig parse_run_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    strict_keys(j,
                {"schema_version", "preset", "seed", "workers", "assert", "significance",
                 "out_dir", "debug", "example_line", "minimal_config", "parking", "idla",
                 "coupling_sweep", "h_curve", "window_convergence", "enumerate"},
                "config");
    RunConfig cfg;
    cfg.raw = text;
    cfg.schema_version = j.value("schema_version", 1);
    if (cfg.schema_version != 1) throw ConfigError("unsupported schema_version");
    cfg.preset = j.value("preset", "");
    if (j.contains("seed")) cfg.seed = parse_seed(j.at("seed"), "config");
    cfg.workers = j.value("workers", 1);
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    std::string al = j.value("assert", "invariants");
    if (al == "off")
        cfg.asserts = AssertLevel::off;
    else if (al == "invariants")
        cfg.asserts = AssertLevel::invariants;
    else if (al == "full")
        cfg.asserts = AssertLevel::full;
    else
        throw ConfigError("assert must be off | invariants | full");
    cfg.significance = j.value("significance", 0.01);
    if (cfg.significance <= 0 || cfg.significance > 0.1)
        throw ConfigError("significance must lie in (0, 0.1]");
    if (j.contains("out_dir")) cfg.out_dir = j.at("out_dir").get<std::string>();
    if (j.contains("debug")) {
        strict_keys(j.at("debug"), {"invert_tracer_priority"}, "debug");
        cfg.invert_tracer_priority = j.at("debug").value("invert_tracer_priority", false);
    }
    std::string block_key = cfg.preset;
    for (auto& c : block_key)
        if (c == '-') c = '_';
    if (!cfg.preset.empty() && j.contains(block_key)) cfg.preset_json = j.at(block_key).dump();
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    return parse_run_config(io::read_text_file(path));
}

void apply_overrides(RunConfig& cfg, const CliOverrides& o) {
    if (o.seed) cfg.seed = *o.seed;
    if (o.workers) cfg.workers = *o.workers;
    if (o.assert_level) {
        if (*o.assert_level == "off")
            cfg.asserts = AssertLevel::off;
        else if (*o.assert_level == "invariants")
            cfg.asserts = AssertLevel::invariants;
        else if (*o.assert_level == "full")
            cfg.asserts = AssertLevel::full;
        else
            throw ConfigError("--assert must be off | invariants | full");
    }
    if (o.out_dir) cfg.out_dir = *o.out_dir;
}

int run_preset(const RunConfig& cfg) {
    json block = cfg.preset_json.empty() ? json::object() : json::parse(cfg.preset_json);
    if (cfg.preset == "example-line") return preset_example_line(cfg, block);
    if (cfg.preset == "minimal-config") return preset_minimal_config(cfg, block);
    if (cfg.preset == "parking") return preset_parking(cfg, block);
    if (cfg.preset == "idla") return preset_idla(cfg, block);
    if (cfg.preset == "coupling-sweep") return preset_coupling_sweep(cfg, block);
    if (cfg.preset == "h-curve") return preset_h_curve(cfg, block);
    if (cfg.preset == "window-convergence") return preset_window_convergence(cfg, block);
    throw ConfigError("unknown preset '" + cfg.preset + "'");
}

int run_enumerate(const RunConfig& cfg) {
    json block = cfg.preset_json.empty() ? json::object() : json::parse(cfg.preset_json);
    strict_keys(block, {"graph", "xi0", "T", "statistic", "h", "x", "budget", "export_graph"},
                "enumerate");
    auto g = parse_graph(block.at("graph"), cfg.seed);
    if (block.value("export_graph", false)) {
        io::CsvWriter w;
        w.header({"from", "to"});
        for (auto [a, b] : g->edges())
            w.row({std::to_string(g->coordinate(a)), std::to_string(g->coordinate(b))});
        io::write_text_file(std::filesystem::path(cfg.out_dir) / "graph.csv", w.text());
    }
    InitialCondition xi0 =
        block.contains("xi0") ? parse_initial(*g, block.at("xi0")) : InitialCondition(g->vertex_count());
    long long T = block.value("T", 3LL);
    EnumerationBudget budget = parse_budget(block.contains("budget") ? block.at("budget") : json());
    std::string stat = block.value("statistic", "occupation");
    VertexSet h = block.contains("h") ? parse_vertex_set(*g, block.at("h"), "h")
                                      : VertexSet::all(g->vertex_count());
    json summary{{"statistic", stat}, {"T", T}};
    io::CsvWriter w;
    if (stat == "quadruple") {
        Vertex x = resolve_site(*g, block.at("x").get<long long>());
        auto atoms = enumerate_quadruple(*g, xi0, x, T, h, budget);
        w.header({"phi", "phi_x", "phi_y", "phi_xy", "numerator", "denominator"});
        for (const auto& atom : atoms)
            w.row({std::to_string(atom.value[0]), std::to_string(atom.value[1]),
                   std::to_string(atom.value[2]), std::to_string(atom.value[3]),
                   rational_to_string(Rational(boost::multiprecision::numerator(atom.prob))),
                   rational_to_string(Rational(boost::multiprecision::denominator(atom.prob)))});
        summary["atoms"] = atoms.size();
    } else {
        ExactDistribution d;
        if (stat == "occupation")
            d = enumerate_exact(*g, xi0, T, Statistic::occupation, h, budget);
        else if (stat == "motion")
            d = enumerate_exact(*g, xi0, T, Statistic::motion, h, budget);
        else if (stat == "root_arrivals")
            d = enumerate_exact(*g, xi0, T, Statistic::root_arrivals, h, budget);
        else if (stat == "motion_to_extinction")
            d = enumerate_motion_to_extinction(*g, xi0, budget);
        else
            throw ConfigError("unknown statistic '" + stat + "'");
        w.header({"value", "numerator", "denominator"});
        for (std::size_t i = 0; i < d.values.size(); ++i)
            w.row({std::to_string(d.values[i]),
                   rational_to_string(Rational(boost::multiprecision::numerator(d.probs[i]))),
                   rational_to_string(Rational(boost::multiprecision::denominator(d.probs[i])))});
        summary["atoms"] = d.values.size();
        summary["overflow"] = rational_to_string(d.overflow);
        if (d.overflow == 0) summary["mean"] = to_double(d.mean());
    }
    std::filesystem::path dir(cfg.out_dir);
    io::write_text_file(dir / "distribution.csv", w.text());
    io::write_text_file(dir / "summary.json", summary.dump(2) + "\n");
    return 0;
}

} // namespace dlas
