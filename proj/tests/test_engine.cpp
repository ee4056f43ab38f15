#include <doctest.h>

#include <cmath>

#include "dlas/engine.hpp"

using namespace dlas;

namespace {

Braveness bv(double v) { return Braveness{v, static_cast<std::uint64_t>(v * 1e9), 0}; }

std::shared_ptr<const Graph> path(long long lo, long long hi) {
    return std::make_shared<const Graph>(build_interval(lo, hi));
}

} // namespace

TEST_CASE("resolve_site pairs bravest against bravest") {
    SUBCASE("bravest A wins the pairing") {
        auto r = resolve_site({bv(0.9), bv(0.2)}, {bv(0.5)});
        REQUIRE(r.pairs.size() == 1);
        CHECK(r.pairs[0].first.value == 0.9);
        CHECK(r.pairs[0].second.value == 0.5);
        REQUIRE(r.surviving_a.size() == 1);
        CHECK(r.surviving_a[0].value == 0.2);
        CHECK(r.surviving_b.empty());
    }
    SUBCASE("one side empty means no pairs") {
        auto r = resolve_site({}, {bv(0.3)});
        CHECK(r.pairs.empty());
        CHECK(r.surviving_b.size() == 1);
    }
    SUBCASE("ordered pair list") {
        auto r = resolve_site({bv(0.1), bv(0.2), bv(0.3)}, {bv(0.5), bv(0.6)});
        REQUIRE(r.pairs.size() == 2);
        CHECK(r.pairs[0].first.value == 0.3);
        CHECK(r.pairs[0].second.value == 0.6);
        CHECK(r.pairs[1].first.value == 0.2);
        CHECK(r.pairs[1].second.value == 0.5);
        REQUIRE(r.surviving_a.size() == 1);
        CHECK(r.surviving_a[0].value == 0.1);
    }
}

TEST_CASE("example-line base system never reaches the origin") {
    auto g = path(-10, 12);
    for (std::uint64_t seed = 0; seed < 400; ++seed) {
        auto instr = std::make_shared<const Instructions>(seed, g, TimeModel::discrete);
        InitialCondition xi0(g->vertex_count());
        xi0.set(g->vertex_at(1), -1);
        xi0.set(g->vertex_at(2), 1);
        SimulateOptions opt;
        opt.horizon = 8;
        opt.occupation_set = VertexSet({g->vertex_at(0)});
        CHECK(simulate(g, xi0, instr, opt).v_T == 0.0);
    }
}

TEST_CASE("trivial occupation identities") {
    auto g = path(0, 2);
    auto instr = std::make_shared<const Instructions>(3, g, TimeModel::discrete);

    SUBCASE("empty system") {
        InitialCondition xi0(3);
        SimulateOptions opt;
        opt.horizon = 5;
        opt.occupation_set = VertexSet::all(3);
        Trajectory t = simulate(g, xi0, instr, opt);
        CHECK(t.v_T == 0.0);
        CHECK(t.events.empty());
    }
    SUBCASE("one walker, H everything, unit horizon") {
        InitialCondition xi0(3);
        xi0.set(0, 1);
        SimulateOptions opt;
        opt.horizon = 1;
        opt.occupation_set = VertexSet::all(3);
        CHECK(simulate(g, xi0, instr, opt).v_T == 1.0);
    }
    SUBCASE("n walkers and no obstacles give V = nT") {
        InitialCondition xi0(3);
        xi0.set(0, 2);
        xi0.set(2, 3);
        SimulateOptions opt;
        opt.horizon = 7;
        opt.occupation_set = VertexSet::all(3);
        CHECK(simulate(g, xi0, instr, opt).v_T == 35.0);
    }
}

TEST_CASE("conservation and sign invariants on random instances") {
    auto g = path(0, 5);
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        auto instr = std::make_shared<const Instructions>(seed, g, TimeModel::discrete);
        InitialCondition xi0(g->vertex_count());
        long long a0 = 0, b0 = 0;
        for (Vertex v = 0; v < 6; ++v) {
            long long c = static_cast<long long>(rng::uniform01(rng::key_hash(seed, rng::Tag::family, v)) * 5) - 2;
            xi0.set(v, c);
            if (c > 0) a0 += c;
            if (c < 0) b0 -= c;
        }
        SimulateOptions opt;
        opt.horizon = 6;
        opt.occupation_set = VertexSet::all(6);
        opt.log_events = true;
        Trajectory t = simulate(g, xi0, instr, opt);
        long long a1 = 0, b1 = 0;
        for (Vertex v = 0; v < 6; ++v) {
            CHECK((t.final_a[v] == 0 || t.final_b[v] == 0)); // sign consistency
            a1 += t.final_a[v];
            b1 += t.final_b[v];
        }
        CHECK(a0 - a1 == b0 - b1); // pairwise annihilation conserves the difference

        // replay the event log: it must reproduce the final counts exactly
        std::vector<long long> ra(6, 0), rb(6, 0);
        for (Vertex v = 0; v < 6; ++v) {
            if (xi0.count(v) > 0) ra[v] = xi0.count(v);
            if (xi0.count(v) < 0) rb[v] = -xi0.count(v);
        }
        for (const auto& ev : t.events)
            (ev.species == 'A' ? ra : rb)[static_cast<std::size_t>(ev.vertex)] += ev.delta;
        CHECK(ra == t.final_a);
        CHECK(rb == t.final_b);

        // the replayed occupation integral equals the online accumulator
        CHECK(occupation_time(t, VertexSet::all(6), 6) == t.v_T);
        CHECK(aggregate_motion_time(t, 6) == t.motion_T);
    }
}

TEST_CASE("identical inputs give bit-identical trajectories") {
    auto g = path(0, 4);
    InitialCondition xi0(5);
    xi0.set(0, 2);
    xi0.set(2, -1);
    xi0.set(4, -2);
    for (TimeModel tm : {TimeModel::discrete, TimeModel::continuous}) {
        auto instr = std::make_shared<const Instructions>(99, g, tm);
        SimulateOptions opt;
        opt.horizon = 9;
        opt.occupation_set = VertexSet({2});
        opt.log_events = true;
        Trajectory t1 = simulate(g, xi0, instr, opt);
        Trajectory t2 = simulate(g, xi0, instr, opt);
        CHECK(t1.v_T == t2.v_T);
        CHECK(t1.events.size() == t2.events.size());
        for (std::size_t i = 0; i < t1.events.size(); ++i) {
            CHECK(t1.events[i].time == t2.events[i].time);
            CHECK(t1.events[i].vertex == t2.events[i].vertex);
        }
    }
}

TEST_CASE("continuous mode integrates exactly between events") {
    auto g = path(0, 2);
    auto instr = std::make_shared<const Instructions>(17, g, TimeModel::continuous);
    InitialCondition xi0(3);
    xi0.set(1, 1);
    SimulateOptions opt;
    opt.horizon = 4.5;
    opt.occupation_set = VertexSet::all(3);
    // a lone walker is always somewhere: V = T exactly
    CHECK(simulate(g, xi0, instr, opt).v_T == 4.5);

    // killed walker stops accumulating: V < T with a B in the way
    InitialCondition xib(3);
    xib.set(1, 1);
    xib.set(0, -1);
    xib.set(2, -1);
    double v = simulate(g, xib, instr, opt).v_T;
    CHECK(v < 4.5);
    CHECK(v > 0.0);
}

TEST_CASE("checkpoints sample the accumulator monotonically") {
    auto g = path(0, 3);
    auto instr = std::make_shared<const Instructions>(23, g, TimeModel::discrete);
    InitialCondition xi0(4);
    xi0.set(0, 1);
    SimulateOptions opt;
    opt.horizon = 6;
    opt.occupation_set = VertexSet::all(4);
    opt.checkpoints = {1, 2, 3, 4, 5};
    Trajectory t = simulate(g, xi0, instr, opt);
    REQUIRE(t.checkpoint_values.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(t.checkpoint_values[i].second == static_cast<double>(i + 1));
    }
    CHECK_THROWS_AS(occupation_time(t, VertexSet::all(4), 7.0), SimulationError);
}

TEST_CASE("absorbing root keeps walkers and counts arrivals") {
    Graph::Builder b(3);
    b.add_arc(1, 0).add_arc(2, 1).set_root(0).set_directed_to_root(true);
    auto g = std::make_shared<const Graph>(std::move(b).build());
    auto instr = std::make_shared<const Instructions>(31, g, TimeModel::discrete);
    InitialCondition xi0(3);
    xi0.set(2, 1);
    SimulateOptions opt;
    opt.horizon = 10;
    opt.occupation_set = VertexSet({0});
    Trajectory t = simulate(g, xi0, instr, opt);
    CHECK(t.root_arrivals == 1);
    CHECK(t.v_T == 8.0); // arrives at time 2, occupies the root afterwards
    CHECK(t.final_a[0] == 1);
}

TEST_CASE("negative horizon is rejected") {
    auto g = path(0, 2);
    auto instr = std::make_shared<const Instructions>(1, g, TimeModel::discrete);
    SimulateOptions opt;
    opt.horizon = -1;
    CHECK_THROWS_AS(simulate(g, InitialCondition(3), instr, opt), SimulationError);
}

TEST_CASE("free-walk occupation equals the summed path local times") {
    // xi'' with A-coin heads and B-coin tails: two free walkers from 2,
    // V equals the sum of their path local times at 0, replayed directly
    // from the instruction oracle
    auto g = path(-12, 22);
    Vertex s2 = g->vertex_at(2);
    Vertex origin0 = g->vertex_at(0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        auto instr = std::make_shared<const Instructions>(seed, g, TimeModel::discrete);
        InitialCondition xi0(g->vertex_count());
        xi0.set(s2, 2);
        SimulateOptions opt;
        opt.horizon = 10;
        opt.occupation_set = VertexSet({origin0});
        double v = simulate(g, xi0, instr, opt).v_T;
        double local = 0;
        for (int j = 1; j <= 2; ++j) {
            Vertex at = s2;
            for (int n = 0; n < 10; ++n) {
                if (at == origin0) local += 1;
                at = instr->next_position(s2, j, n, at);
            }
        }
        CHECK(v == local);
    }
}

TEST_CASE("a stranded walker is a hard error") {
    Graph::Builder b(1);
    auto g = std::make_shared<const Graph>(std::move(b).build());
    auto instr = std::make_shared<const Instructions>(1, g, TimeModel::discrete);
    InitialCondition xi0(1);
    xi0.set(0, 1);
    SimulateOptions opt;
    opt.horizon = 2;
    opt.occupation_set = VertexSet::all(1);
    CHECK_THROWS_AS(simulate(g, xi0, instr, opt), SimulationError);
}
