#include <doctest.h>

#include <cmath>

#include "dlas/instructions.hpp"

using namespace dlas;

namespace {
std::shared_ptr<const Graph> tiny() {
    return std::make_shared<const Graph>(build_interval(0, 2));
}
} // namespace

TEST_CASE("paths start at their site and B-particles never move") {
    auto g = tiny();
    Instructions instr(7, g, TimeModel::discrete);
    CHECK(instr.position(1, 1, 0) == 1);
    CHECK(instr.position(2, 3, 0) == 2);
    for (int n = 0; n < 5; ++n) CHECK(instr.next_position(1, -1, n, 1) == 1);
}

TEST_CASE("instruction queries are pure") {
    auto g = tiny();
    Instructions instr(7, g, TimeModel::discrete);
    CHECK(instr.braveness(1, 1) == instr.braveness(1, 1));
    CHECK(instr.position(1, 1, 4) == instr.position(1, 1, 4));
    CHECK(instr.hold(1, 1, 3) == instr.hold(1, 1, 3));
    Instructions other(8, g, TimeModel::discrete);
    CHECK(instr.braveness(1, 1).raw != other.braveness(1, 1).raw);
}

TEST_CASE("one-step frequencies match the uniform kernel") {
    auto g = tiny();
    Instructions instr(7, g, TimeModel::discrete);
    // interior vertex 1 steps to 0 with probability 1/2
    int hits = 0;
    const int n = 100000;
    for (int j = 1; j <= n; ++j)
        if (instr.next_position(1, j, 0, 1) == 0) ++hits;
    double f = static_cast<double>(hits) / n;
    CHECK(std::abs(f - 0.5) < 3 * std::sqrt(0.25 / n));

    // four-way vertex: chi-square on one-step counts
    auto star = std::make_shared<const Graph>(build_star(4));
    Instructions instr4(9, star, TimeModel::discrete);
    int counts[4] = {};
    for (int j = 1; j <= n; ++j) ++counts[instr4.next_position(0, j, 0, 0) - 1];
    double chi2 = 0;
    for (int k = 0; k < 4; ++k) {
        double e = n / 4.0;
        chi2 += (counts[k] - e) * (counts[k] - e) / e;
    }
    CHECK(chi2 < 25.0); // df 3
}

TEST_CASE("braveness values are uniform and totally ordered") {
    auto g = std::make_shared<const Graph>(build_interval(0, 40));
    Instructions instr(11, g, TimeModel::discrete);
    std::vector<double> vals;
    for (Vertex v = 0; v < g->vertex_count(); ++v)
        for (int j = 1; j <= 250; ++j) vals.push_back(instr.braveness(v, j).value);
    std::sort(vals.begin(), vals.end());
    double n = static_cast<double>(vals.size());
    double d = 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        d = std::max(d, std::abs(vals[i] - static_cast<double>(i) / n));
        d = std::max(d, std::abs(vals[i] - static_cast<double>(i + 1) / n));
    }
    CHECK(d < 1.63 / std::sqrt(n)); // KS, 1% level
    // sentinels sit below every generated value
    CHECK(Braveness::tracer_priority() < Braveness{vals.front(), 0, 0});
    CHECK(Braveness::tracer_secondary() < Braveness::tracer_priority());
}

TEST_CASE("coupled systems observe identical instruction streams") {
    auto g = tiny();
    Instructions a(21, g, TimeModel::continuous);
    Instructions b(21, g, TimeModel::continuous);
    Instructions c(21, g, TimeModel::continuous);
    std::vector<QueryRecord> la, lb, lc;
    a.attach_log(&la);
    b.attach_log(&lb);
    c.attach_log(&lc);
    for (const Instructions* instr : {&a, &b, &c}) {
        Vertex at = 2;
        for (int n = 0; n < 6; ++n) at = instr->next_position(2, 1, n, at);
        instr->braveness(1, -1);
        instr->hold(2, 1, 1);
    }
    CHECK(la == lb);
    CHECK(la == lc);
}

TEST_CASE("sample_initial covers deterministic and sampled sites") {
    auto g = tiny();
    InitialSpec det;
    det.set_deterministic(1, -1);
    det.set_deterministic(2, 1);
    InitialCondition xi0 = sample_initial(det, *g, 5);
    CHECK(xi0.count(0) == 0);
    CHECK(xi0.count(1) == -1);
    CHECK(xi0.count(2) == 1);
    CHECK(xi0.total_a() == 1);
    CHECK(xi0.total_b() == 1);

    InitialSpec coin;
    coin.set_pmf(1, Pmf::from_entries({{0, Rational(1, 2)}, {-2, Rational(1, 2)}}));
    int neg = 0;
    const int n = 100000;
    for (int s = 0; s < n; ++s)
        if (sample_initial(coin, *g, s).count(1) == -2) ++neg;
    double f = static_cast<double>(neg) / n;
    CHECK(std::abs(f - 0.5) < 3 * std::sqrt(0.25 / n));

    InitialSpec empty;
    InitialCondition zero = sample_initial(empty, *g, 1);
    for (Vertex v = 0; v < 3; ++v) CHECK(zero.count(v) == 0);
}

TEST_CASE("minimal-config pairs share the site coin") {
    auto g = tiny();
    MinimalConfigSpec spec;
    spec.p = {0.5, 0.5, 0.5};
    spec.alpha = Pmf::delta(1);
    spec.beta = Pmf::delta(1);
    for (int s = 0; s < 50; ++s) {
        auto [xi, xip] = sample_minimal_pair(spec, *g, s);
        for (Vertex v = 0; v < 3; ++v) {
            CHECK(std::abs(xi.count(v)) == 1);
            CHECK(xi.count(v) == xip.count(v)); // alpha = beta = delta_1 collapses the pair
        }
    }
    MinimalConfigSpec bad = spec;
    bad.alpha = Pmf::from_entries({{0, Rational(1, 2)}, {1, Rational(1, 2)}}); // mean 1/2
    CHECK_THROWS_AS(sample_minimal_pair(bad, *g, 1), ConfigError);

    // the shared coin: signs agree between the paired draws
    MinimalConfigSpec mix = spec;
    mix.alpha = Pmf::from_entries({{0, Rational(1, 2)}, {2, Rational(1, 2)}});
    mix.beta = mix.alpha;
    for (int s = 0; s < 200; ++s) {
        auto [xi, xip] = sample_minimal_pair(mix, *g, s);
        for (Vertex v = 0; v < 3; ++v) {
            if (xi.count(v) > 0) CHECK(xip.count(v) >= 0);
            if (xi.count(v) < 0) CHECK(xip.count(v) <= 0);
        }
    }
}

TEST_CASE("walkers without out-neighbors are rejected outside absorbing roots") {
    Graph::Builder b(2);
    b.add_arc(1, 0).set_root(0).set_directed_to_root(true);
    auto g = std::make_shared<const Graph>(std::move(b).build());
    Instructions instr(3, g, TimeModel::discrete);
    CHECK(instr.next_position(1, 1, 0, 1) == 0); // child steps to parent
    CHECK(instr.next_position(1, 1, 1, 0) == 0); // absorbing root holds
}
