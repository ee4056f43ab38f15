#include <doctest.h>

#include <set>

#include "dlas/graph.hpp"
#include "dlas/rng.hpp"

using namespace dlas;

TEST_CASE("interval graphs") {
    Graph g = build_interval(0, 2);
    CHECK(g.vertex_count() == 3);
    auto es = g.edges();
    REQUIRE(es.size() == 2);
    CHECK(es[0] == std::pair<Vertex, Vertex>{0, 1});
    CHECK(es[1] == std::pair<Vertex, Vertex>{1, 2});

    Graph w = build_interval(-30, 40);
    CHECK(w.vertex_count() == 71);
    CHECK(w.coordinate(0) == -30);
    CHECK(w.vertex_at(0) == 30);
    CHECK(w.vertex_at(41) == kNoVertex);

    CHECK_THROWS_AS(build_interval(5, 5), ConfigError);
    CHECK_THROWS_AS(build_interval(6, 5), ConfigError);
}

TEST_CASE("lattice boxes") {
    Graph line = build_lattice_box({3});
    CHECK(line.vertex_count() == 3);
    CHECK(line.edges().size() == 2);

    Graph square = build_lattice_box({2, 2});
    CHECK(square.vertex_count() == 4);
    CHECK(square.edges().size() == 4); // the 4-cycle
    for (Vertex v = 0; v < 4; ++v) CHECK(square.degree(v) == 2);

    Graph box = build_lattice_box({3, 3});
    CHECK(box.vertex_count() == 9);
    CHECK(box.edges().size() == 12);

    CHECK_THROWS_AS(build_lattice_box({}), ConfigError);
    CHECK_THROWS_AS(build_lattice_box({2, 0}), ConfigError);
}

TEST_CASE("galton-watson sampling is reproducible and truncates") {
    Pmf two = Pmf::delta(2);
    Graph full = sample_galton_watson(two, 2, 9, false);
    CHECK(full.vertex_count() == 7); // complete binary tree

    Pmf die = Pmf::delta(0);
    Graph lone = sample_galton_watson(die, 5, 9, false);
    CHECK(lone.vertex_count() == 1);

    Pmf half = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    Graph a = sample_galton_watson(half, 3, 1234, true);
    Graph b = sample_galton_watson(half, 3, 1234, true);
    CHECK(a.vertex_count() == b.vertex_count());
    CHECK(a.edges() == b.edges());

    // replay oracle: re-derive the population size with the same level-order
    // draws, independently of the sampler
    std::vector<int> depth{0};
    std::size_t head = 0;
    while (head < depth.size()) {
        int d = depth[head];
        std::uint64_t node = head;
        ++head;
        if (d >= 3) continue;
        double u = rng::uniform01(rng::key_hash(1234, rng::Tag::gw_offspring, node));
        long long kids = half.sample(u);
        for (long long c = 0; c < kids; ++c) depth.push_back(d + 1);
    }
    CHECK(a.vertex_count() == static_cast<int>(depth.size()));

    Pmf bad = Pmf::delta(-1);
    CHECK_THROWS_AS(sample_galton_watson(bad, 2, 1, false), ConfigError);
}

TEST_CASE("directed trees expose parents only") {
    Graph t = build_regular_tree(2, 3, true);
    CHECK(t.vertex_count() == 15);
    REQUIRE(t.root().has_value());
    CHECK(t.degree(*t.root()) == 0);
    for (Vertex v = 1; v < t.vertex_count(); ++v) {
        CHECK(t.degree(v) == 1);
        // follow parents to the root within max_depth steps
        Vertex at = v;
        int hops = 0;
        while (at != *t.root() && hops <= 3) {
            at = t.neighbors(at)[0];
            ++hops;
        }
        CHECK(at == *t.root());
        CHECK(hops <= 3);
    }
}

TEST_CASE("balls are induced BFS neighborhoods with label inheritance") {
    Graph path = build_interval(0, 3);
    BallResult b1 = ball(path, VertexSet({0}), 1);
    CHECK(b1.graph.vertex_count() == 2);
    CHECK(b1.original_of == std::vector<Vertex>{0, 1});
    CHECK(b1.graph.stream_label(0) == path.stream_label(0));
    CHECK(b1.graph.stream_label(1) == path.stream_label(1));

    BallResult whole = ball(path, VertexSet({0}), 10);
    CHECK(whole.graph.vertex_count() == 4);

    Graph box = build_lattice_box({3, 3});
    BallResult plus = ball(box, VertexSet({4}), 1); // center of the box
    CHECK(plus.graph.vertex_count() == 5);
    CHECK(plus.graph.edges().size() == 4);

    CHECK_THROWS_AS(ball(path, VertexSet({9}), 1), ConfigError);

    // nesting: ball(R) subset of ball(R+1)
    for (int r = 0; r < 4; ++r) {
        auto small = ball(box, VertexSet({0}), r);
        auto big = ball(box, VertexSet({0}), r + 1);
        std::set<Vertex> big_set(big.original_of.begin(), big.original_of.end());
        for (Vertex v : small.original_of) CHECK(big_set.count(v) == 1);
    }
}

TEST_CASE("vertex sets reject duplicates and support membership") {
    CHECK_THROWS_AS(VertexSet({1, 1}), ConfigError);
    VertexSet s({3, 1, 2});
    CHECK(s.size() == 3);
    CHECK(s.contains(2));
    CHECK(!s.contains(0));
}

TEST_CASE("directed galton-watson trees also walk to the root") {
    Pmf half = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        Graph t = sample_galton_watson(half, 4, seed, true);
        REQUIRE(t.root().has_value());
        for (Vertex v = 0; v < t.vertex_count(); ++v) {
            Vertex at = v;
            int hops = 0;
            while (at != *t.root() && hops <= 4) {
                REQUIRE(t.degree(at) == 1);
                at = t.neighbors(at)[0];
                ++hops;
            }
            CHECK(at == *t.root());
        }
    }
}
