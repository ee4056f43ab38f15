#include <doctest.h>

#include <cmath>
#include <functional>
#include <map>

#include "dlas/experiments.hpp"
#include "dlas/oracle.hpp"

using namespace dlas;

TEST_CASE("example-line refuses windows a walk could exit") {
    ExampleLineSpec spec;
    spec.T = 20;
    spec.window_lo = -5; // needs lo <= 2 - T
    spec.window_hi = 32;
    spec.replicas = 10;
    CHECK_THROWS_AS(example_line(spec), ConfigError);
}

TEST_CASE("example-line xi is identically zero") {
    ExampleLineSpec spec;
    spec.variant = ExampleVariant::xi;
    spec.T = 12;
    spec.window_lo = -14;
    spec.window_hi = 24;
    spec.replicas = 1500;
    spec.seed = 3;
    EmpiricalSample s = example_line(spec);
    CHECK(s.values.back() == 0.0);
}

TEST_CASE("minimal-config with alpha = beta = delta_1 collapses the pair") {
    Graph g = build_interval(0, 4);
    MinimalConfigPreset preset;
    preset.spec.p.assign(5, 0.5);
    preset.spec.alpha = Pmf::delta(1);
    preset.spec.beta = Pmf::delta(1);
    preset.T = 5;
    preset.h = VertexSet({2});
    preset.replicas = 400;
    preset.seed = 9;
    MinimalConfigRun run = minimal_config(g, preset);
    REQUIRE(run.v.size() == run.v_prime.size());
    // identical initial conditions and shared instructions: equal pathwise
    CHECK(run.v.values == run.v_prime.values);
}

TEST_CASE("minimal-config sanity regime with A-particles only") {
    Graph g = build_interval(0, 4);
    MinimalConfigPreset preset;
    preset.spec.p.assign(5, 1.0); // no B-particles anywhere
    preset.spec.alpha = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    preset.spec.beta = preset.spec.alpha;
    preset.T = 5;
    preset.h = VertexSet({2});
    preset.replicas = 4000;
    preset.seed = 10;
    MinimalConfigRun run = minimal_config(g, preset);
    auto v = icx_dominates(Distribution(run.v), Distribution(run.v_prime));
    CHECK(v.verdict == Verdict::not_falsified);
}

TEST_CASE("parking trivial regimes") {
    ParkingPreset preset;
    preset.tree.regular_arity = 2;
    preset.tree.depth = 3;
    preset.replicas = 300;
    preset.seed = 4;
    SUBCASE("eta = delta_0 never moves anything") {
        preset.eta = Pmf::delta(0);
        EmpiricalSample s = parking_root_count(preset);
        CHECK(s.values.back() == 0.0);
    }
    SUBCASE("eta = delta_1 cancels out everywhere") {
        preset.eta = Pmf::delta(1);
        EmpiricalSample s = parking_root_count(preset);
        CHECK(s.values.back() == 0.0);
    }
}

TEST_CASE("parking distribution matches the exact mixture on a depth-2 tree") {
    // directed dynamics are deterministic, so the law is a finite mixture
    // over the per-site eta draws; enumerate it directly
    Graph g = build_regular_tree(2, 2, true);
    const int n = g.vertex_count(); // 7
    Pmf eta = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    std::map<long long, Rational> expected;
    EnumerationBudget budget;
    std::vector<long long> draw(static_cast<std::size_t>(n));
    std::function<void(int, Rational)> rec = [&](int v, Rational p) {
        if (v == n) {
            InitialCondition xi0(n);
            for (Vertex z = 0; z < n; ++z) xi0.set(z, draw[static_cast<std::size_t>(z)] - 1);
            auto d = enumerate_exact(g, xi0, 3, Statistic::root_arrivals, VertexSet({0}), budget);
            REQUIRE(d.values.size() == 1); // deterministic rootward dynamics
            long long total = d.values[0] + std::max(xi0.count(0), 0LL);
            expected[total] += p;
            return;
        }
        for (std::size_t k = 0; k < eta.size(); ++k) {
            draw[static_cast<std::size_t>(v)] = eta.values()[k];
            rec(v + 1, p * eta.probs()[k]);
        }
    };
    rec(0, Rational(1));

    ParkingPreset preset;
    preset.tree.regular_arity = 2;
    preset.tree.depth = 2;
    preset.eta = eta;
    preset.replicas = 30000;
    preset.seed = 5;
    EmpiricalSample s = parking_root_count(preset);
    for (const auto& [value, prob] : expected) {
        double p = to_double(prob);
        double phat = s.prob_geq(static_cast<double>(value)) -
                      s.prob_geq(static_cast<double>(value) + 0.5);
        CHECK(std::abs(phat - p) <=
              4.0 * std::sqrt(p * (1 - p) / static_cast<double>(preset.replicas)) + 1e-4);
    }
}

TEST_CASE("idla presets") {
    Graph g = build_interval(0, 3);
    SUBCASE("n = 0 gives the zero law") {
        IdlaPreset preset;
        preset.n = 0;
        preset.replicas = 200;
        preset.seed = 6;
        EmpiricalSample s = idla_via_dlas(g, 0, preset);
        CHECK(s.values.back() == 0.0);
    }
    SUBCASE("n = 2 on the 4-path is deterministic") {
        IdlaPreset preset;
        preset.n = 2;
        preset.replicas = 500;
        preset.seed = 6;
        EmpiricalSample s = idla_via_dlas(g, 0, preset);
        CHECK(s.values.front() == 1.0);
        CHECK(s.values.back() == 1.0);
    }
    SUBCASE("over-filling is refused") {
        IdlaPreset preset;
        preset.n = 5;
        preset.replicas = 10;
        CHECK_THROWS_AS(idla_via_dlas(g, 0, preset), ConfigError);
    }
    SUBCASE("eta variant respects the icx order at small scale") {
        IdlaPreset a;
        a.eta = Pmf::delta(1);
        a.replicas = 5000;
        a.seed = 61;
        IdlaPreset b;
        b.eta = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
        b.replicas = 5000;
        b.seed = 62;
        auto sa = idla_via_dlas(g, 0, a);
        auto sb = idla_via_dlas(g, 0, b);
        CHECK(icx_dominates(Distribution(sa), Distribution(sb)).verdict ==
              Verdict::not_falsified);
    }
}

TEST_CASE("sequential idla preset matches the DLAS route in distribution") {
    Graph g = build_interval(0, 3);
    IdlaPreset preset;
    preset.n = 3;
    preset.replicas = 8000;
    preset.seed = 66;
    EmpiricalSample via_dlas = idla_via_dlas(g, 0, preset);
    EmpiricalSample direct = sequential_idla(g, 0, 3, 8000, 67, 1);
    auto r = two_sample_equal(via_dlas, direct, 0.01);
    CHECK(!r.reject);
}

TEST_CASE("window convergence stabilizes exactly for discrete walks") {
    WindowConvergenceSpec spec;
    spec.variant = ExampleVariant::xi_prime;
    spec.T = 20;
    spec.radii = {22, 44};
    spec.replicas = 400;
    spec.seed = 8;
    spec.time_model = TimeModel::discrete;
    WindowConvergenceReport rep = window_convergence(spec);
    CHECK(rep.final_stabilization == 1.0); // finite speed: radius T+2 is exact
}

TEST_CASE("under-windowing is detected") {
    WindowConvergenceSpec spec;
    spec.variant = ExampleVariant::xi_prime;
    spec.T = 20;
    spec.radii = {3, 22, 44};
    spec.replicas = 400;
    spec.seed = 8;
    spec.time_model = TimeModel::discrete;
    WindowConvergenceReport rep = window_convergence(spec);
    CHECK(rep.stabilization[0] < 1.0); // radius 3 clips the walk
    CHECK(rep.stabilization[1] == 1.0);
}

TEST_CASE("matched seeds reproduce presets exactly") {
    ExampleLineSpec spec;
    spec.variant = ExampleVariant::xi_double_prime;
    spec.T = 10;
    spec.window_lo = -12;
    spec.window_hi = 22;
    spec.replicas = 500;
    spec.seed = 123;
    EmpiricalSample a = example_line(spec);
    EmpiricalSample b = example_line(spec);
    CHECK(a.values == b.values);
    spec.workers = 3; // channel-parallel execution must not change results
    EmpiricalSample c = example_line(spec);
    CHECK(a.values == c.values);
}

TEST_CASE("preset initial laws are icx ordered site by site, exactly") {
    // the hypothesis side of the monotonicity checks: the per-site initial
    // pmfs of each compared preset pair are themselves icx ordered
    auto dist = [](std::vector<std::pair<long long, Rational>> atoms) {
        ExactDistribution d;
        for (auto& [v, p] : atoms) d.add(v, p);
        d.finalize();
        return d;
    };
    // example line, site 1 and site 2
    auto site1 = dist({{-1, Rational(1)}});
    auto site1p = dist({{0, Rational(1, 2)}, {-2, Rational(1, 2)}});
    CHECK(icx_dominates(Distribution(site1), Distribution(site1p)).verdict == Verdict::holds);
    auto site2 = dist({{1, Rational(1)}});
    auto site2pp = dist({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    CHECK(icx_dominates(Distribution(site2), Distribution(site2pp)).verdict == Verdict::holds);
    // minimal config with alpha = beta = (0 or 2 evenly), p = 1/2
    auto two_point = dist({{-1, Rational(1, 2)}, {1, Rational(1, 2)}});
    auto spread = dist({{-2, Rational(1, 4)}, {0, Rational(1, 2)}, {2, Rational(1, 4)}});
    CHECK(icx_dominates(Distribution(two_point), Distribution(spread)).verdict ==
          Verdict::holds);
    // idla: eta = delta_1 against the (0 or 2) coin
    auto eta = dist({{1, Rational(1)}});
    auto eta_p = dist({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    CHECK(icx_dominates(Distribution(eta), Distribution(eta_p)).verdict == Verdict::holds);
}
