#include "dlas/instructions.hpp"

#include <cmath>

namespace dlas {

long long InitialCondition::total_a() const {
    long long s = 0;
    for (long long c : counts_)
        if (c > 0) s += c;
    return s;
}

long long InitialCondition::total_b() const {
    long long s = 0;
    for (long long c : counts_)
        if (c < 0) s -= c;
    return s;
}

InitialCondition sample_initial(const InitialSpec& spec, const Graph& g, std::uint64_t seed) {
    InitialCondition xi(g.vertex_count());
    for (const auto& [v, site] : spec.sites()) {
        if (!g.valid_vertex(v)) throw ConfigError("initial spec references unknown vertex");
        if (const auto* c = std::get_if<long long>(&site)) {
            xi.set(v, *c);
        } else {
            double u = rng::uniform01(rng::key_hash(seed, rng::Tag::initial, g.stream_label(v)));
            xi.set(v, std::get<Pmf>(site).sample(u));
        }
    }
    return xi;
}

void MinimalConfigSpec::validate(const Graph& g) const {
    if (static_cast<int>(p.size()) != g.vertex_count())
        throw ConfigError("minimal-config p vector must cover every vertex");
    for (double px : p)
        if (px < 0.0 || px > 1.0) throw ConfigError("p_x must lie in [0,1]");
    if (alpha.min_value() < 0 || beta.min_value() < 0)
        throw ConfigError("alpha and beta must be supported on nonnegative integers");
    if (alpha.mean() != 1 || beta.mean() != 1)
        throw ConfigError("alpha and beta must have mean exactly 1 (got " +
                          rational_to_string(alpha.mean()) + " and " +
                          rational_to_string(beta.mean()) + ")");
}

std::pair<InitialCondition, InitialCondition>
sample_minimal_pair(const MinimalConfigSpec& spec, const Graph& g, std::uint64_t seed) {
    spec.validate(g);
    InitialCondition xi(g.vertex_count()), xip(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::uint64_t lbl = g.stream_label(v);
        double u = rng::uniform01(rng::key_hash(seed, rng::Tag::initial, lbl, 1));
        double ua = rng::uniform01(rng::key_hash(seed, rng::Tag::initial, lbl, 2));
        double ub = rng::uniform01(rng::key_hash(seed, rng::Tag::initial, lbl, 3));
        bool heads = u <= spec.p[static_cast<std::size_t>(v)];
        xi.set(v, heads ? 1 : -1);
        xip.set(v, heads ? spec.alpha.sample(ua) : -spec.beta.sample(ub));
    }
    return {xi, xip};
}

Instructions::Instructions(std::uint64_t master_seed, std::shared_ptr<const Graph> graph,
                           TimeModel tm)
    : seed_(master_seed), graph_(std::move(graph)), tm_(tm) {
    if (!graph_) throw ConfigError("instructions need a graph");
}

Vertex Instructions::next_position(Vertex origin, int j, int n, Vertex current) const {
    if (j < 0) return current; // B-particles are stationary
    const Graph& g = *graph_;
    int deg = g.degree(current);
    if (deg == 0) {
        if (g.directed_to_root() && g.root() && current == *g.root())
            return current; // absorbing root
        throw SimulationError("walker stranded on a vertex with no out-neighbor");
    }
    std::uint64_t h = rng::key_hash(seed_, rng::Tag::step, g.stream_label(origin),
                                    static_cast<std::uint64_t>(static_cast<std::int64_t>(j)),
                                    static_cast<std::uint64_t>(n));
    int pick = static_cast<int>(rng::uniform01(h) * deg);
    if (pick >= deg) pick = deg - 1;
    Vertex next = g.neighbors(current)[static_cast<std::size_t>(pick)];
    if (log_) log_->push_back({'s', g.stream_label(origin), j, n,
                               static_cast<std::uint64_t>(next)});
    return next;
}

Vertex Instructions::position(Vertex origin, int j, int n) const {
    Vertex at = origin;
    for (int m = 0; m < n; ++m) at = next_position(origin, j, m, at);
    return at;
}

double Instructions::hold(Vertex origin, int j, int n) const {
    std::uint64_t h = rng::key_hash(seed_, rng::Tag::hold, graph_->stream_label(origin),
                                    static_cast<std::uint64_t>(static_cast<std::int64_t>(j)),
                                    static_cast<std::uint64_t>(n));
    if (log_) log_->push_back({'h', graph_->stream_label(origin), j, n, h});
    return rng::exp1(h);
}

Braveness Instructions::braveness(Vertex origin, int j) const {
    std::uint64_t lbl = graph_->stream_label(origin);
    std::uint64_t h = rng::key_hash(seed_, rng::Tag::braveness, lbl,
                                    static_cast<std::uint64_t>(static_cast<std::int64_t>(j)));
    if (log_) log_->push_back({'b', lbl, j, 0, h});
    return Braveness{rng::uniform01(h), h,
                     rng::mix64(lbl ^ static_cast<std::uint64_t>(static_cast<std::int64_t>(j)))};
}

} // namespace dlas
