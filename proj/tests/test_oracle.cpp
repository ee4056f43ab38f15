#include <doctest.h>

#include <functional>
#include <map>

#include "dlas/experiments.hpp"
#include "dlas/oracle.hpp"

using namespace dlas;

namespace {

// Hand-rolled double-entry enumerator: particle-level, explicit path
// recursion and full braveness-permutation averaging. Deliberately naive and
// structured nothing like the count-state oracle it cross-checks.
struct NaiveWorld {
    std::vector<Vertex> pos;   // per A-particle position
    std::vector<bool> alive;
    std::vector<int> rank;     // braveness rank per A-particle (higher = braver)
    std::vector<int> b_count;  // per vertex
};

void naive_resolve(const Graph& g, NaiveWorld& w) {
    for (Vertex z = 0; z < g.vertex_count(); ++z) {
        while (w.b_count[static_cast<std::size_t>(z)] > 0) {
            int best = -1;
            for (std::size_t i = 0; i < w.pos.size(); ++i)
                if (w.alive[i] && w.pos[i] == z && (best < 0 || w.rank[i] > w.rank[static_cast<std::size_t>(best)]))
                    best = static_cast<int>(i);
            if (best < 0) break;
            w.alive[static_cast<std::size_t>(best)] = false;
            --w.b_count[static_cast<std::size_t>(z)];
        }
    }
}

void naive_rec(const Graph& g, NaiveWorld w, long long t, long long T, const VertexSet& h,
               long long acc, const Rational& p, std::map<long long, Rational>& out) {
    if (t == T) {
        out[acc] += p;
        return;
    }
    // occupation rate over [t, t+1)
    for (Vertex z : h) {
        long long c = 0;
        for (std::size_t i = 0; i < w.pos.size(); ++i)
            if (w.alive[i] && w.pos[i] == z) ++c;
        if (w.b_count[static_cast<std::size_t>(z)] == 0) acc += c;
    }
    // enumerate the joint move of every live particle
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < w.pos.size(); ++i)
        if (w.alive[i]) live.push_back(i);
    std::function<void(std::size_t, NaiveWorld&, Rational)> step =
        [&](std::size_t k, NaiveWorld& cur, Rational wp) {
            if (k == live.size()) {
                NaiveWorld next = cur;
                naive_resolve(g, next);
                naive_rec(g, std::move(next), t + 1, T, h, acc, wp, out);
                return;
            }
            std::size_t i = live[k];
            auto nb = g.neighbors(w.pos[i]); // moves are simultaneous: old positions
            for (Vertex dest : nb) {
                NaiveWorld moved = cur;
                moved.pos[i] = dest;
                step(k + 1, moved, wp / Rational(static_cast<long long>(nb.size())));
            }
        };
    NaiveWorld base = w;
    step(0, base, p);
}

std::map<long long, Rational> naive_enumerate(const Graph& g, const InitialCondition& xi0,
                                              long long T, const VertexSet& h) {
    NaiveWorld w;
    w.b_count.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        long long c = xi0.count(v);
        for (long long j = 0; j < c; ++j) {
            w.pos.push_back(v);
            w.alive.push_back(true);
        }
        if (c < 0) w.b_count[static_cast<std::size_t>(v)] = static_cast<int>(-c);
    }
    std::map<long long, Rational> out;
    int n = static_cast<int>(w.pos.size());
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    long long nfact = 1;
    for (int i = 2; i <= n; ++i) nfact *= i;
    do {
        NaiveWorld w0 = w;
        w0.rank = perm;
        naive_resolve(g, w0);
        naive_rec(g, std::move(w0), 0, T, h, 0, Rational(1, nfact), out);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

bool matches(const ExactDistribution& d, const std::map<long long, Rational>& naive) {
    if (d.values.size() != naive.size()) return false;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        auto it = naive.find(d.values[i]);
        if (it == naive.end() || it->second != d.probs[i]) return false;
    }
    return true;
}

} // namespace

TEST_CASE("exact distribution bookkeeping") {
    ExactDistribution d;
    d.add(3, Rational(1, 4));
    d.add(1, Rational(1, 2));
    d.add(3, Rational(1, 4));
    d.finalize();
    CHECK(d.values == std::vector<long long>{1, 3});
    CHECK(d.probs[1] == Rational(1, 2));
    CHECK(d.normalized());
    CHECK(d.mean() == Rational(2));
    CHECK(d.stop_loss(Rational(2)) == Rational(1, 2));
    CHECK(d.prob_geq(2) == Rational(1, 2));
    CHECK(d.prob_of(1) == Rational(1, 2));
    CHECK(d.prob_of(2) == 0);
}

TEST_CASE("free walker occupies everything deterministically") {
    Graph g = build_interval(0, 2);
    InitialCondition xi0(3);
    xi0.set(1, 1);
    EnumerationBudget budget;
    auto d = enumerate_exact(g, xi0, 2, Statistic::occupation, VertexSet::all(3), budget);
    CHECK(d.values == std::vector<long long>{2});
    CHECK(d.probs[0] == Rational(1));
}

TEST_CASE("no A-particles collapse to the zero atom") {
    Graph g = build_interval(0, 2);
    InitialCondition xi0(3);
    xi0.set(1, -2);
    EnumerationBudget budget;
    auto d = enumerate_exact(g, xi0, 3, Statistic::occupation, VertexSet::all(3), budget);
    CHECK(d.values == std::vector<long long>{0});
}

TEST_CASE("double-entry enumeration: oracle vs naive tree walk") {
    EnumerationBudget budget;
    SUBCASE("blocked corridor") {
        Graph g = build_interval(0, 3);
        InitialCondition xi0(4);
        xi0.set(1, -1);
        xi0.set(2, 1);
        auto d = enumerate_exact(g, xi0, 3, Statistic::occupation, VertexSet({0}), budget);
        CHECK(matches(d, naive_enumerate(g, xi0, 3, VertexSet({0}))));
    }
    SUBCASE("two walkers racing for one obstacle") {
        Graph g = build_interval(0, 2);
        InitialCondition xi0(3);
        xi0.set(0, 1);
        xi0.set(2, 1);
        xi0.set(1, -1);
        VertexSet h = VertexSet::all(3);
        auto d = enumerate_exact(g, xi0, 3, Statistic::occupation, h, budget);
        CHECK(matches(d, naive_enumerate(g, xi0, 3, h)));
    }
    SUBCASE("star with a contested hub") {
        Graph g = build_star(3);
        InitialCondition xi0(4);
        xi0.set(1, 1);
        xi0.set(2, 1);
        xi0.set(0, -1);
        VertexSet h({0});
        auto d = enumerate_exact(g, xi0, 3, Statistic::occupation, h, budget);
        CHECK(matches(d, naive_enumerate(g, xi0, 3, h)));
    }
}

TEST_CASE("enumeration agrees with seeded Monte Carlo") {
    auto g = std::make_shared<const Graph>(build_interval(0, 3));
    InitialCondition xi0(4);
    xi0.set(1, -1);
    xi0.set(2, 1);
    xi0.set(3, 1);
    VertexSet h = VertexSet::all(4);
    EnumerationBudget budget;
    auto d = enumerate_exact(*g, xi0, 3, Statistic::occupation, h, budget);
    const long long n = 20000;
    std::map<long long, long long> freq;
    for (long long r = 0; r < n; ++r) {
        auto instr = std::make_shared<const Instructions>(
            rng::derive_seed(4242, rng::Tag::replica, static_cast<std::uint64_t>(r)), g,
            TimeModel::discrete);
        SimulateOptions opt;
        opt.horizon = 3;
        opt.occupation_set = h;
        ++freq[static_cast<long long>(simulate(g, xi0, instr, opt).v_T)];
    }
    Rational total_checked = 0;
    for (std::size_t i = 0; i < d.values.size(); ++i) {
        double p = to_double(d.probs[i]);
        double phat = static_cast<double>(freq[d.values[i]]) / static_cast<double>(n);
        CHECK(std::abs(phat - p) <= 5.0 * std::sqrt(p * (1 - p) / n) + 1.0 / n);
        total_checked += d.probs[i];
    }
    CHECK(total_checked == 1);
}

TEST_CASE("h-curves: free walkers give h(k) = max(k,0) T") {
    Graph g = build_interval(0, 2);
    InitialCondition xi0(3);
    EnumerationBudget budget;
    auto rows = exact_h_curve(g, xi0, 1, -2, 2, PhiKind::identity, 0, 3, VertexSet::all(3), budget);
    REQUIRE(rows.size() == 5);
    for (const auto& r : rows) {
        CHECK(r.h == Rational(std::max(r.k, 0LL) * 3));
        CHECK(r.dh >= 0);
        CHECK(r.d2h >= 0);
    }
}

TEST_CASE("h-curves stay monotone and convex with an obstacle") {
    Graph g = build_interval(0, 3);
    InitialCondition xi0(4);
    xi0.set(1, -1);
    EnumerationBudget budget;
    for (PhiKind phi : {PhiKind::identity, PhiKind::square}) {
        auto rows = exact_h_curve(g, xi0, 0, -2, 2, phi, 0, 3, VertexSet::all(4), budget);
        for (const auto& r : rows) {
            CHECK(r.dh >= 0);
            CHECK(r.d2h >= 0);
        }
    }
}

TEST_CASE("sequential IDLA frozen laws") {
    EnumerationBudget budget;
    SUBCASE("n = 0 and n = 1 are degenerate") {
        Graph g = build_interval(0, 3);
        auto d0 = enumerate_idla_exact(g, 0, 0, budget);
        CHECK(d0.values == std::vector<long long>{0});
        auto d1 = enumerate_idla_exact(g, 0, 1, budget);
        CHECK(d1.values == std::vector<long long>{0}); // root starts unoccupied
    }
    SUBCASE("4-path laws by hand") {
        Graph g = build_interval(0, 3);
        auto d2 = enumerate_idla_exact(g, 0, 2, budget);
        CHECK(d2.values == std::vector<long long>{1});
        auto d3 = enumerate_idla_exact(g, 0, 3, budget);
        CHECK(d3.prob_of(3) == Rational(1, 2));
        CHECK(d3.prob_of(5) == Rational(1, 4));
        CHECK(d3.prob_of(7) == Rational(1, 8));
        CHECK(d3.normalized()); // geometric tail pooled into the overflow mass
    }
    SUBCASE("5-star laws by hand") {
        Graph g = build_star(4);
        auto d2 = enumerate_idla_exact(g, 0, 2, budget);
        CHECK(d2.values == std::vector<long long>{1});
        auto d3 = enumerate_idla_exact(g, 0, 3, budget);
        CHECK(d3.prob_of(2) == Rational(3, 4));
        CHECK(d3.prob_of(4) == Rational(3, 16));
        CHECK(d3.prob_of(6) == Rational(3, 64));
    }
    SUBCASE("Monte Carlo sampler matches the exact law") {
        Graph g = build_interval(0, 3);
        auto d = enumerate_idla_exact(g, 0, 3, budget);
        const long long n = 20000;
        std::map<long long, long long> freq;
        for (long long r = 0; r < n; ++r)
            ++freq[sequential_idla_sample(g, 0, 3, rng::derive_seed(11, rng::Tag::replica,
                                                                    static_cast<std::uint64_t>(r)))];
        for (long long v : {3LL, 5LL, 7LL}) {
            double p = to_double(d.prob_of(v));
            double phat = static_cast<double>(freq[v]) / static_cast<double>(n);
            CHECK(std::abs(phat - p) <= 5.0 * std::sqrt(p * (1 - p) / n) + 1.0 / n);
        }
    }
}

TEST_CASE("IDLA equals DLAS aggregate motion, exactly") {
    EnumerationBudget budget;
    for (long long n = 1; n <= 3; ++n) {
        Graph g = build_interval(0, 3);
        auto lhs = enumerate_motion_to_extinction(g, idla_initial(g, 0, n), budget);
        auto rhs = enumerate_idla_exact(g, 0, n, budget);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("tracer-system law equals the one-extra-particle law") {
    EnumerationBudget budget;
    Graph g = build_interval(0, 3);
    InitialCondition xi0(4);
    xi0.set(1, -1);
    VertexSet h = VertexSet::all(4);
    auto direct = [&](long long extra) {
        InitialCondition xi = xi0;
        xi.set(0, xi.count(0) + extra);
        return enumerate_exact(g, xi, 3, Statistic::occupation, h, budget);
    };
    auto vx = enumerate_tracer_exact(g, xi0, 0, 3, TracerStatistic::v_solo, h, false, budget);
    CHECK(vx == direct(1));
    auto vxy = enumerate_tracer_exact(g, xi0, 0, 3, TracerStatistic::v_pair, h, false, budget);
    CHECK(vxy == direct(2));
}

TEST_CASE("quadruple law is consistent with its marginals and pathwise laws") {
    EnumerationBudget budget;
    Graph g = build_interval(0, 2);
    InitialCondition xi0(3);
    xi0.set(1, -1);
    VertexSet h = VertexSet::all(3);
    auto atoms = enumerate_quadruple(g, xi0, 0, 2, h, budget);
    Rational total = 0;
    ExactDistribution phi_m, phix_m, phiy_m, phixy_m;
    for (const auto& atom : atoms) {
        total += atom.prob;
        // pathwise: conditions (d) and (e) hold on every atom of the joint law
        CHECK(atom.value[1] >= atom.value[0]);
        CHECK(atom.value[2] >= atom.value[0]);
        CHECK(atom.value[3] - atom.value[1] - atom.value[2] + atom.value[0] >= 0);
        phi_m.add(atom.value[0], atom.prob);
        phix_m.add(atom.value[1], atom.prob);
        phiy_m.add(atom.value[2], atom.prob);
        phixy_m.add(atom.value[3], atom.prob);
    }
    CHECK(total == 1);
    phi_m.finalize();
    phix_m.finalize();
    phiy_m.finalize();
    phixy_m.finalize();
    auto base = enumerate_exact(g, xi0, 2, Statistic::occupation, h, budget);
    CHECK(phi_m == base);
    InitialCondition xi1 = xi0;
    xi1.set(0, xi1.count(0) + 1);
    auto d1 = enumerate_exact(g, xi1, 2, Statistic::occupation, h, budget);
    CHECK(phix_m == d1);
    CHECK(phiy_m == d1);
    InitialCondition xi2 = xi0;
    xi2.set(0, xi2.count(0) + 2);
    auto d2 = enumerate_exact(g, xi2, 2, Statistic::occupation, h, budget);
    CHECK(phixy_m == d2);
}

TEST_CASE("budgets refuse oversized enumerations") {
    EnumerationBudget tiny;
    tiny.max_states = 3;
    Graph g = build_interval(0, 4);
    InitialCondition xi0(5);
    xi0.set(2, 3);
    CHECK_THROWS_AS(enumerate_exact(g, xi0, 4, Statistic::occupation, VertexSet::all(5), tiny),
                    ConfigError);
    EnumerationBudget short_horizon;
    short_horizon.max_time = 2;
    CHECK_THROWS_AS(enumerate_exact(g, xi0, 3, Statistic::occupation, VertexSet::all(5),
                                    short_horizon),
                    ConfigError);
}

TEST_CASE("root arrival statistic counts walkers reaching the root") {
    // directed 2-level binary tree: all walkers arrive within 2 steps
    Graph g = build_regular_tree(2, 2, true);
    InitialCondition xi0(g.vertex_count());
    for (Vertex v = 1; v < g.vertex_count(); ++v) xi0.set(v, 1); // one A per non-root site
    EnumerationBudget budget;
    auto d = enumerate_exact(g, xi0, 3, Statistic::root_arrivals, VertexSet({0}), budget);
    CHECK(d.values == std::vector<long long>{6});
}

TEST_CASE("tracer laws also match on directed arenas with an absorbing root") {
    Graph g = build_regular_tree(2, 2, true);
    InitialCondition xi0(g.vertex_count());
    xi0.set(1, -1);
    xi0.set(4, 1);
    EnumerationBudget budget;
    VertexSet h({0});
    Vertex x = 3;
    InitialCondition xi1 = xi0;
    xi1.set(x, xi1.count(x) + 1);
    auto direct = enumerate_exact(g, xi1, 4, Statistic::occupation, h, budget);
    auto vx = enumerate_tracer_exact(g, xi0, x, 4, TracerStatistic::v_solo, h, false, budget);
    CHECK(vx == direct);
}
