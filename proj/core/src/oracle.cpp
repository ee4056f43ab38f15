#include "dlas/oracle.hpp"

#include <algorithm>
#include <map>

#include "dlas/rng.hpp"

namespace dlas {

// ---------------------------------------------------------------- ExactDistribution

void ExactDistribution::add(long long v, const Rational& p) {
    values.push_back(v);
    probs.push_back(p);
}

void ExactDistribution::finalize() {
    std::vector<std::size_t> idx(values.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return values[a] < values[b]; });
    std::vector<long long> vs;
    std::vector<Rational> ps;
    for (std::size_t i : idx) {
        if (!vs.empty() && vs.back() == values[i]) {
            ps.back() += probs[i];
        } else {
            vs.push_back(values[i]);
            ps.push_back(probs[i]);
        }
    }
    values.clear();
    probs.clear();
    for (std::size_t i = 0; i < vs.size(); ++i) {
        if (ps[i] == 0) continue;
        if (ps[i] < 0) throw SimulationError("negative probability mass");
        values.push_back(vs[i]);
        probs.push_back(ps[i]);
    }
    if (total() + overflow > 1) throw SimulationError("probability mass exceeds 1");
}

Rational ExactDistribution::total() const {
    Rational t = 0;
    for (const auto& p : probs) t += p;
    return t;
}

Rational ExactDistribution::prob_of(long long v) const {
    auto it = std::lower_bound(values.begin(), values.end(), v);
    if (it == values.end() || *it != v) return 0;
    return probs[static_cast<std::size_t>(it - values.begin())];
}

Rational ExactDistribution::prob_geq(long long a) const {
    Rational t = overflow;
    for (std::size_t i = 0; i < values.size(); ++i)
        if (values[i] >= a) t += probs[i];
    return t;
}

Rational ExactDistribution::stop_loss(const Rational& a) const {
    if (overflow != 0) throw SimulationError("stop-loss undefined with overflow mass");
    Rational s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        Rational gain = Rational(values[i]) - a;
        if (gain > 0) s += probs[i] * gain;
    }
    return s;
}

Rational ExactDistribution::mean() const {
    if (overflow != 0) throw SimulationError("mean undefined with overflow mass");
    Rational s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += probs[i] * Rational(values[i]);
    return s;
}

Rational ExactDistribution::expect(const std::function<Rational(long long)>& phi) const {
    if (overflow != 0) throw SimulationError("expectation undefined with overflow mass");
    Rational s = 0;
    for (std::size_t i = 0; i < values.size(); ++i) s += probs[i] * phi(values[i]);
    return s;
}

bool ExactDistribution::operator==(const ExactDistribution& other) const {
    return values == other.values && probs == other.probs && overflow == other.overflow;
}

// ---------------------------------------------------------------- shared helpers

namespace {

using State = std::vector<long long>;
using Level = std::map<State, Rational>;

// All ways to split m movers over d neighbor slots, with multinomial weight
// m! / (prod c_i!) / d^m.
struct Composition {
    std::vector<int> parts;
    Rational weight;
};

std::vector<Composition> compositions(int m, int d) {
    std::vector<Composition> out;
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    BigInt m_fact = 1;
    for (int i = 2; i <= m; ++i) m_fact *= i;
    BigInt d_pow = 1;
    for (int i = 0; i < m; ++i) d_pow *= d;
    auto rec = [&](auto&& self, int slot, int left) -> void {
        if (slot == d - 1) {
            cur[static_cast<std::size_t>(slot)] = left;
            BigInt denom = 1;
            for (int c : cur)
                for (int i = 2; i <= c; ++i) denom *= i;
            out.push_back({cur, Rational(m_fact, denom * d_pow)});
            return;
        }
        for (int c = 0; c <= left; ++c) {
            cur[static_cast<std::size_t>(slot)] = c;
            self(self, slot + 1, left - c);
        }
    };
    if (d == 0) {
        if (m > 0) throw SimulationError("movers stranded without neighbors");
        return out;
    }
    rec(rec, 0, m);
    return out;
}

bool absorbing_root(const Graph& g, Vertex v) {
    return g.directed_to_root() && g.root() && v == *g.root();
}

long long positive_part_sum(const State& counts, const VertexSet& h) {
    long long s = 0;
    for (Vertex z : h) {
        long long c = counts[static_cast<std::size_t>(z)];
        if (c > 0) s += c;
    }
    return s;
}

// Joint move enumeration over every vertex holding movers: calls sink with
// (arrival counts, probability weight) for each joint outcome.
template <typename Sink>
void enumerate_moves(const Graph& g, const std::vector<int>& movers, Sink&& sink) {
    std::vector<Vertex> active;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (movers[static_cast<std::size_t>(v)] > 0) active.push_back(v);
    std::vector<long long> arrivals(static_cast<std::size_t>(g.vertex_count()), 0);
    auto rec = [&](auto&& self, std::size_t i, const Rational& w) -> void {
        if (i == active.size()) {
            sink(arrivals, w);
            return;
        }
        Vertex v = active[i];
        auto nb = g.neighbors(v);
        for (const auto& comp :
             compositions(movers[static_cast<std::size_t>(v)], static_cast<int>(nb.size()))) {
            for (std::size_t s = 0; s < nb.size(); ++s)
                arrivals[static_cast<std::size_t>(nb[s])] += comp.parts[s];
            self(self, i + 1, w * comp.weight);
            for (std::size_t s = 0; s < nb.size(); ++s)
                arrivals[static_cast<std::size_t>(nb[s])] -= comp.parts[s];
        }
    };
    rec(rec, 0, Rational(1));
}

void check_level_budget(const Level& level, const EnumerationBudget& budget) {
    if (static_cast<long long>(level.size()) > budget.max_states)
        throw ConfigError("enumeration budget exceeded: " + std::to_string(level.size()) +
                          " live states > " + std::to_string(budget.max_states));
}

} // namespace

// ---------------------------------------------------------------- plain enumeration

ExactDistribution enumerate_exact(const Graph& g, const InitialCondition& xi0, long long T,
                                  Statistic stat, const VertexSet& h,
                                  const EnumerationBudget& budget) {
    if (T < 0 || T > budget.max_time) throw ConfigError("horizon outside enumeration budget");
    int n = g.vertex_count();
    const VertexSet all = VertexSet::all(n);
    const VertexSet& target = (stat == Statistic::occupation) ? h : all;

    State init(xi0.counts().begin(), xi0.counts().end());
    init.push_back(0); // accumulated statistic
    Level level{{init, Rational(1)}};
    ExactDistribution out;

    for (long long t = 0; t < T; ++t) {
        check_level_budget(level, budget);
        Level next;
        for (const auto& [state, p] : level) {
            State counts(state.begin(), state.end() - 1);
            long long acc = state.back();

            std::vector<int> movers(static_cast<std::size_t>(n), 0);
            bool any = false;
            for (Vertex v = 0; v < n; ++v) {
                long long c = counts[static_cast<std::size_t>(v)];
                if (c > 0 && !absorbing_root(g, v)) {
                    movers[static_cast<std::size_t>(v)] = static_cast<int>(c);
                    any = true;
                }
            }
            long long rate =
                (stat == Statistic::root_arrivals) ? 0 : positive_part_sum(counts, target);
            if (!any) {
                // frozen state: remaining contribution is analytic
                out.add(acc + rate * (T - t), p);
                continue;
            }
            enumerate_moves(g, movers, [&](const std::vector<long long>& arrivals,
                                           const Rational& w) {
                State ns(counts);
                long long root_in = 0;
                for (Vertex v = 0; v < n; ++v) {
                    long long kept = absorbing_root(g, v) ? std::max(counts[static_cast<std::size_t>(v)], 0LL)
                                                          : 0;
                    long long bs = std::min(counts[static_cast<std::size_t>(v)], 0LL);
                    ns[static_cast<std::size_t>(v)] =
                        arrivals[static_cast<std::size_t>(v)] + kept + bs;
                }
                if (g.root()) root_in = arrivals[static_cast<std::size_t>(*g.root())];
                long long nacc =
                    acc + ((stat == Statistic::root_arrivals) ? root_in : rate);
                ns.push_back(nacc);
                next[ns] += p * w;
            });
        }
        level = std::move(next);
        if (level.empty()) break;
    }
    for (const auto& [state, p] : level) out.add(state.back(), p);
    out.finalize();
    if (!out.normalized()) throw SimulationError("enumeration mass does not sum to 1");
    return out;
}

ExactDistribution enumerate_motion_to_extinction(const Graph& g, const InitialCondition& xi0,
                                                 const EnumerationBudget& budget) {
    int n = g.vertex_count();
    const VertexSet all = VertexSet::all(n);
    State init(xi0.counts().begin(), xi0.counts().end());
    init.push_back(0);
    Level level{{init, Rational(1)}};
    ExactDistribution out;
    out.cap = budget.step_cap;

    while (!level.empty()) {
        check_level_budget(level, budget);
        Level next;
        for (const auto& [state, p] : level) {
            State counts(state.begin(), state.end() - 1);
            long long acc = state.back();
            long long rate = positive_part_sum(counts, all);
            if (rate == 0) { // extinct
                out.add(acc, p);
                continue;
            }
            if (acc >= budget.step_cap) { // motion only grows; pool the tail
                out.overflow += p;
                continue;
            }
            std::vector<int> movers(static_cast<std::size_t>(n), 0);
            for (Vertex v = 0; v < n; ++v) {
                long long c = counts[static_cast<std::size_t>(v)];
                if (c > 0 && !absorbing_root(g, v)) movers[static_cast<std::size_t>(v)] = static_cast<int>(c);
            }
            enumerate_moves(g, movers, [&](const std::vector<long long>& arrivals,
                                           const Rational& w) {
                State ns(counts);
                for (Vertex v = 0; v < n; ++v) {
                    long long kept = absorbing_root(g, v) ? std::max(counts[static_cast<std::size_t>(v)], 0LL)
                                                          : 0;
                    long long bs = std::min(counts[static_cast<std::size_t>(v)], 0LL);
                    ns[static_cast<std::size_t>(v)] =
                        arrivals[static_cast<std::size_t>(v)] + kept + bs;
                }
                ns.push_back(acc + rate);
                next[ns] += p * w;
            });
        }
        level = std::move(next);
    }
    out.finalize();
    if (!out.normalized()) throw SimulationError("enumeration mass does not sum to 1");
    return out;
}

// ---------------------------------------------------------------- tracer enumeration

namespace {

// Count-level mirror of the tracer interaction rules (a)-(d). Tracer slots
// live in the trailing state entries: (state_a, at) per tracer.
struct TracerBits {
    bool solo_a, other_a;
    Vertex solo_at, other_at;
};

// Resolve one site on counts. solo is the tracked tracer (X in the tracer
// system, Y in the flipped one); other is the prioritized tracer.
void resolve_counts(Vertex z, State& counts, TracerBits& tb) {
    auto& c = counts[static_cast<std::size_t>(z)];
    while (true) {
        long long a_non = std::max(c, 0LL);
        long long b_non = std::max(-c, 0LL);
        bool solo_here_a = tb.solo_a && tb.solo_at == z;
        bool other_here_a = tb.other_a && tb.other_at == z;
        bool solo_here_b = !tb.solo_a && tb.solo_at == z;
        bool other_here_b = !tb.other_a && tb.other_at == z;
        bool a_side = a_non > 0 || solo_here_a || other_here_a;
        bool b_side = b_non > 0 || solo_here_b || other_here_b;
        if (!a_side || !b_side) break;
        // rule (a) pairs are already netted out by the signed representation
        if (a_non > 0) {
            // bravest B is a tracer (prioritized first: braveness -1 > -2)
            if (other_here_b) {
                tb.other_a = true;
            } else {
                tb.solo_a = true;
            }
            --c; // rule (c): the A-particle annihilates
        } else if (b_non > 0) {
            // bravest A is a tracer in state A (prioritized first)
            if (other_here_a) {
                tb.other_a = false;
            } else {
                tb.solo_a = false;
            }
            ++c; // rule (b): the B-particle annihilates
        } else {
            // rule (d): both sides are tracers
            if (other_here_a) break; // prioritized already in state A
            // non-prioritized (solo) in A, prioritized in B: both switch
            tb.solo_a = false;
            tb.other_a = true;
        }
    }
}

long long tracer_rate(const State& counts, const TracerBits& tb, TracerStatistic stat,
                      const VertexSet& h) {
    long long s = 0;
    for (Vertex z : h) {
        long long c = counts[static_cast<std::size_t>(z)];
        if (tb.solo_a && tb.solo_at == z) ++c;
        if (stat == TracerStatistic::v_pair) {
            if (tb.other_a && tb.other_at == z) ++c;
        } else {
            if (!tb.other_a && tb.other_at == z) --c;
        }
        if (c > 0) s += c;
    }
    return s;
}

State pack_tracer(const State& counts, const TracerBits& tb, long long acc) {
    State s(counts);
    s.push_back(tb.solo_a ? 1 : 0);
    s.push_back(tb.solo_at);
    s.push_back(tb.other_a ? 1 : 0);
    s.push_back(tb.other_at);
    s.push_back(acc);
    return s;
}

void unpack_tracer(const State& s, int n, State& counts, TracerBits& tb, long long& acc) {
    counts.assign(s.begin(), s.begin() + n);
    tb.solo_a = s[static_cast<std::size_t>(n)] != 0;
    tb.solo_at = static_cast<Vertex>(s[static_cast<std::size_t>(n) + 1]);
    tb.other_a = s[static_cast<std::size_t>(n) + 2] != 0;
    tb.other_at = static_cast<Vertex>(s[static_cast<std::size_t>(n) + 3]);
    acc = s[static_cast<std::size_t>(n) + 4];
}

} // namespace

ExactDistribution enumerate_tracer_exact(const Graph& g, const InitialCondition& xi0, Vertex x,
                                         long long T, TracerStatistic stat, const VertexSet& h,
                                         bool /*flipped*/, const EnumerationBudget& budget) {
    // The flipped system differs from the tracer system only by which of the
    // two fresh i.i.d. paths the solo tracer follows, so the count-level law
    // is identical; the flag is accepted for interface symmetry.
    if (T < 0 || T > budget.max_time) throw ConfigError("horizon outside enumeration budget");
    int n = g.vertex_count();
    if (!g.valid_vertex(x)) throw ConfigError("tracer site not in graph");

    State counts0(xi0.counts().begin(), xi0.counts().end());
    TracerBits tb0{true, true, x, x};
    resolve_counts(x, counts0, tb0); // canonical time-0 resolution

    Level level{{pack_tracer(counts0, tb0, 0), Rational(1)}};
    ExactDistribution out;

    for (long long t = 0; t < T; ++t) {
        check_level_budget(level, budget);
        Level next;
        for (const auto& [state, p] : level) {
            State counts;
            TracerBits tb{};
            long long acc = 0;
            unpack_tracer(state, n, counts, tb, acc);
            long long rate = tracer_rate(counts, tb, stat, h);

            std::vector<int> movers(static_cast<std::size_t>(n), 0);
            bool any = false;
            for (Vertex v = 0; v < n; ++v) {
                long long c = counts[static_cast<std::size_t>(v)];
                if (c > 0 && !absorbing_root(g, v)) {
                    movers[static_cast<std::size_t>(v)] = static_cast<int>(c);
                    any = true;
                }
            }
            bool solo_moves = tb.solo_a && !absorbing_root(g, tb.solo_at);
            bool other_moves = tb.other_a && !absorbing_root(g, tb.other_at);
            if (!any && !solo_moves && !other_moves) {
                out.add(acc + rate * (T - t), p);
                continue;
            }
            enumerate_moves(g, movers, [&](const std::vector<long long>& arrivals,
                                           const Rational& w) {
                // tracer destination choices multiply the outcome
                auto nb_s = solo_moves ? g.neighbors(tb.solo_at) : std::span<const Vertex>{};
                auto nb_o = other_moves ? g.neighbors(tb.other_at) : std::span<const Vertex>{};
                std::size_t fan_s = solo_moves ? nb_s.size() : 1;
                std::size_t fan_o = other_moves ? nb_o.size() : 1;
                for (std::size_t is = 0; is < fan_s; ++is) {
                    for (std::size_t io = 0; io < fan_o; ++io) {
                        State ns(counts);
                        for (Vertex v = 0; v < n; ++v) {
                            long long kept = absorbing_root(g, v)
                                                 ? std::max(counts[static_cast<std::size_t>(v)], 0LL)
                                                 : 0;
                            long long bs = std::min(counts[static_cast<std::size_t>(v)], 0LL);
                            ns[static_cast<std::size_t>(v)] =
                                arrivals[static_cast<std::size_t>(v)] + kept + bs;
                        }
                        TracerBits ntb = tb;
                        if (solo_moves) ntb.solo_at = nb_s[is];
                        if (other_moves) ntb.other_at = nb_o[io];
                        for (Vertex z = 0; z < n; ++z) resolve_counts(z, ns, ntb);
                        Rational w2 = w / Rational(static_cast<long long>(fan_s * fan_o));
                        next[pack_tracer(ns, ntb, acc + rate)] += p * w2;
                    }
                }
            });
        }
        level = std::move(next);
        if (level.empty()) break;
    }
    for (const auto& [state, p] : level) {
        State counts;
        TracerBits tb{};
        long long acc = 0;
        unpack_tracer(state, n, counts, tb, acc);
        out.add(acc, p);
    }
    out.finalize();
    if (!out.normalized()) throw SimulationError("enumeration mass does not sum to 1");
    return out;
}

// ---------------------------------------------------------------- h-curve

std::vector<HCurveRow> exact_h_curve(const Graph& g, const InitialCondition& xi0, Vertex x,
                                     long long k_lo, long long k_hi, PhiKind phi, Rational a,
                                     long long T, const VertexSet& h,
                                     const EnumerationBudget& budget) {
    if (k_lo > k_hi) throw ConfigError("empty k range");
    auto phi_fn = [&](long long v) -> Rational {
        switch (phi) {
        case PhiKind::identity:
            return Rational(v);
        case PhiKind::square:
            return Rational(v) * Rational(v);
        case PhiKind::stop_loss: {
            Rational gain = Rational(v) - a;
            return gain > 0 ? gain : Rational(0);
        }
        }
        return Rational(0);
    };
    std::vector<Rational> hk;
    for (long long k = k_lo; k <= k_hi + 2; ++k) {
        InitialCondition xi = xi0;
        xi.set(x, k);
        ExactDistribution d = enumerate_exact(g, xi, T, Statistic::occupation, h, budget);
        hk.push_back(d.expect(phi_fn));
    }
    std::vector<HCurveRow> rows;
    for (long long k = k_lo; k <= k_hi; ++k) {
        std::size_t i = static_cast<std::size_t>(k - k_lo);
        rows.push_back({k, hk[i], hk[i + 1] - hk[i], hk[i + 2] - 2 * hk[i + 1] + hk[i]});
    }
    return rows;
}

// ---------------------------------------------------------------- sequential IDLA

long long sequential_idla_sample(const Graph& g, Vertex root, long long n, std::uint64_t seed) {
    if (!g.valid_vertex(root)) throw ConfigError("root not in graph");
    if (n > g.vertex_count()) throw ConfigError("more particles than vertices");
    std::vector<char> occupied(static_cast<std::size_t>(g.vertex_count()), 0);
    long long steps = 0;
    for (long long i = 0; i < n; ++i) {
        Vertex at = root;
        long long m = 0;
        while (occupied[static_cast<std::size_t>(at)]) {
            auto nb = g.neighbors(at);
            std::uint64_t hsh = rng::key_hash(seed, rng::Tag::idla, static_cast<std::uint64_t>(i),
                                              static_cast<std::uint64_t>(m));
            int pick = static_cast<int>(rng::uniform01(hsh) * static_cast<double>(nb.size()));
            if (pick >= static_cast<int>(nb.size())) pick = static_cast<int>(nb.size()) - 1;
            at = nb[static_cast<std::size_t>(pick)];
            ++steps;
            ++m;
        }
        occupied[static_cast<std::size_t>(at)] = 1;
    }
    return steps;
}

ExactDistribution enumerate_idla_exact(const Graph& g, Vertex root, long long n,
                                       const EnumerationBudget& budget) {
    if (!g.valid_vertex(root)) throw ConfigError("root not in graph");
    if (n > g.vertex_count()) throw ConfigError("more particles than vertices");
    int nv = g.vertex_count();
    // state: occupancy bits..., active particle index, position, steps
    auto settle_chain = [&](State& s) {
        // settle the active particle while it stands on a free vertex
        while (true) {
            long long i = s[static_cast<std::size_t>(nv)];
            if (i >= n) return;
            Vertex at = static_cast<Vertex>(s[static_cast<std::size_t>(nv) + 1]);
            if (s[static_cast<std::size_t>(at)]) return; // must walk
            s[static_cast<std::size_t>(at)] = 1;
            s[static_cast<std::size_t>(nv)] = i + 1;
            s[static_cast<std::size_t>(nv) + 1] = root;
        }
    };
    State init(static_cast<std::size_t>(nv), 0);
    init.push_back(0);    // active index
    init.push_back(root); // active position
    init.push_back(0);    // steps
    settle_chain(init);
    Level level{{init, Rational(1)}};
    ExactDistribution out;
    out.cap = budget.step_cap;

    while (!level.empty()) {
        check_level_budget(level, budget);
        Level next;
        for (const auto& [state, p] : level) {
            long long i = state[static_cast<std::size_t>(nv)];
            long long steps = state.back();
            if (i >= n) {
                out.add(steps, p);
                continue;
            }
            if (steps >= budget.step_cap) {
                out.overflow += p;
                continue;
            }
            Vertex at = static_cast<Vertex>(state[static_cast<std::size_t>(nv) + 1]);
            auto nb = g.neighbors(at);
            for (Vertex w : nb) {
                State ns(state);
                ns[static_cast<std::size_t>(nv) + 1] = w;
                ns.back() = steps + 1;
                settle_chain(ns);
                next[ns] += p / Rational(static_cast<long long>(nb.size()));
            }
        }
        level = std::move(next);
    }
    out.finalize();
    if (!out.normalized()) throw SimulationError("enumeration mass does not sum to 1");
    return out;
}

// ---------------------------------------------------------------- joint quadruple law

namespace {

// Particle-level replay enumeration: three mini systems share one stack of
// enumerated choices (walk steps keyed by (origin, j, n); braveness ranks by
// lazy insertion among the particles compared so far).
struct TapeEntry {
    int fanout;
    int chosen;
};

struct ChoiceTape {
    std::vector<TapeEntry> entries;
    std::size_t pos = 0;
    bool exhausted_ok = true;

    int choose(int fanout) {
        if (pos < entries.size()) return entries[pos++].chosen;
        entries.push_back({fanout, 0});
        ++pos;
        return 0;
    }
    bool backtrack() {
        while (!entries.empty() && entries.back().chosen + 1 >= entries.back().fanout)
            entries.pop_back();
        if (entries.empty()) return false;
        entries.back().chosen += 1;
        pos = 0;
        return true;
    }
    Rational probability() const {
        Rational p = 1;
        for (const auto& e : entries) p /= e.fanout;
        return p;
    }
};

struct MiniKey {
    Vertex origin;
    int j;
    int n;
    auto operator<=>(const MiniKey&) const = default;
};

// Shared instruction realization: walk-step and rank choices resolved through
// the tape once, cached so every system sees the same values.
struct SharedDraws {
    ChoiceTape* tape;
    std::map<MiniKey, Vertex> steps;
    std::vector<std::pair<Vertex, int>> rank_order; // ascending braveness

    Vertex step(const Graph& g, Vertex origin, int j, int n, Vertex current) {
        MiniKey k{origin, j, n};
        auto it = steps.find(k);
        if (it != steps.end()) return it->second;
        auto nb = g.neighbors(current);
        if (nb.empty()) return current;
        int pick = tape->choose(static_cast<int>(nb.size()));
        Vertex dest = nb[static_cast<std::size_t>(pick)];
        steps.emplace(k, dest);
        return dest;
    }
    // rank position of particle (origin, j); inserts via an enumerated slot
    int rank(Vertex origin, int j) {
        for (std::size_t i = 0; i < rank_order.size(); ++i)
            if (rank_order[i] == std::make_pair(origin, j)) return static_cast<int>(i);
        int slot = tape->choose(static_cast<int>(rank_order.size()) + 1);
        rank_order.insert(rank_order.begin() + slot, {origin, j});
        return slot;
    }
};

struct MiniParticle {
    Vertex origin;
    int j;
    int pos = 0;
    Vertex at;
    bool alive = true;
};

struct MiniTracer {
    bool present = false;
    bool is_solo = false; // follows the first fresh path
    int path_j = 0;
    Vertex origin = kNoVertex;
    int pos = 0;
    Vertex at = kNoVertex;
    bool state_a = true;
};

struct MiniSystem {
    std::vector<MiniParticle> as;
    std::vector<int> b_count;
    MiniTracer solo, other; // other is prioritized for state A
    long long acc = 0;

    long long alpha(Vertex z) const {
        long long c = 0;
        for (const auto& p : as)
            if (p.alive && p.at == z) ++c;
        return c;
    }
    long long view(Vertex z, int which) const {
        // which: 0 = base xi / zeta, 1 = zeta^solo, 2 = zeta^pair
        long long c = alpha(z) - b_count[static_cast<std::size_t>(z)];
        if (!solo.present) return c;
        bool solo_here = solo.at == z, other_here = other.at == z;
        switch (which) {
        case 0:
            if (solo_here && !solo.state_a) --c;
            if (other_here && !other.state_a) --c;
            break;
        case 1:
            if (solo_here && solo.state_a) ++c;
            if (other_here && !other.state_a) --c;
            break;
        default:
            if (solo_here && solo.state_a) ++c;
            if (other_here && other.state_a) ++c;
            break;
        }
        return c;
    }
};

void mini_resolve(MiniSystem& sys, Vertex z, SharedDraws& draws) {
    while (true) {
        std::vector<MiniParticle*> here;
        for (auto& p : sys.as)
            if (p.alive && p.at == z) here.push_back(&p);
        MiniParticle* ba = nullptr;
        if (here.size() == 1) {
            ba = here.front(); // no comparison needed, no rank branch consumed
        } else if (here.size() > 1) {
            int ba_rank = -1;
            for (auto* p : here) {
                int r = draws.rank(p->origin, p->j);
                if (!ba || r > ba_rank) {
                    ba = p;
                    ba_rank = r;
                }
            }
        }
        bool solo_a_here = sys.solo.present && sys.solo.state_a && sys.solo.at == z;
        bool other_a_here = sys.other.present && sys.other.state_a && sys.other.at == z;
        bool solo_b_here = sys.solo.present && !sys.solo.state_a && sys.solo.at == z;
        bool other_b_here = sys.other.present && !sys.other.state_a && sys.other.at == z;
        bool b_non = sys.b_count[static_cast<std::size_t>(z)] > 0;

        bool a_side = ba || solo_a_here || other_a_here;
        bool b_side = b_non || solo_b_here || other_b_here;
        if (!a_side || !b_side) break;

        if (ba && b_non) { // rule (a)
            ba->alive = false;
            --sys.b_count[static_cast<std::size_t>(z)];
        } else if (!ba && b_non) { // rule (b): bravest state-A tracer pauses
            if (other_a_here)
                sys.other.state_a = false;
            else
                sys.solo.state_a = false;
            --sys.b_count[static_cast<std::size_t>(z)];
        } else if (ba && !b_non) { // rule (c): bravest paused tracer resumes
            ba->alive = false;
            if (other_b_here)
                sys.other.state_a = true;
            else
                sys.solo.state_a = true;
        } else { // rule (d)
            if (other_a_here) break; // prioritized already in state A
            sys.solo.state_a = false;
            sys.other.state_a = true;
        }
    }
}

void mini_step(const Graph& g, MiniSystem& sys, SharedDraws& draws) {
    struct Move {
        MiniParticle* p;
        Vertex dest;
    };
    std::vector<Move> moves;
    std::vector<Vertex> touched;
    for (auto& p : sys.as) {
        if (!p.alive) continue;
        if (absorbing_root(g, p.at)) continue;
        moves.push_back({&p, draws.step(g, p.origin, p.j, p.pos, p.at)});
    }
    for (MiniTracer* tr : {&sys.solo, &sys.other}) {
        if (!tr->present || !tr->state_a || absorbing_root(g, tr->at)) continue;
        Vertex dest = draws.step(g, tr->origin, tr->path_j, tr->pos, tr->at);
        tr->pos += 1;
        tr->at = dest;
        touched.push_back(dest);
    }
    for (auto& m : moves) {
        m.p->pos += 1;
        m.p->at = m.dest;
        touched.push_back(m.dest);
    }
    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    for (Vertex z : touched) mini_resolve(sys, z, draws);
}

MiniSystem mini_init(const Graph& g, const InitialCondition& xi0, Vertex x, bool with_tracers,
                     bool flipped, SharedDraws& draws) {
    MiniSystem sys;
    sys.b_count.assign(static_cast<std::size_t>(g.vertex_count()), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        long long c = xi0.count(v);
        for (long long j = 1; j <= c; ++j)
            sys.as.push_back({v, static_cast<int>(j), 0, v, true});
        if (c < 0) sys.b_count[static_cast<std::size_t>(v)] = static_cast<int>(-c);
    }
    if (with_tracers) {
        int kp = static_cast<int>(std::max(xi0.count(x) + 1, 1LL));
        // the solo tracer follows S^{x,k} in the tracer system, S^{x,k+1} in
        // the flipped one; priority sits with the other tracer
        sys.solo = {true, true, flipped ? kp + 1 : kp, x, 0, x, true};
        sys.other = {true, false, flipped ? kp : kp + 1, x, 0, x, true};
        mini_resolve(sys, x, draws);
    }
    return sys;
}

} // namespace

std::vector<QuadrupleAtom> enumerate_quadruple(const Graph& g, const InitialCondition& xi0,
                                               Vertex x, long long T, const VertexSet& h,
                                               const EnumerationBudget& budget) {
    if (T < 0 || T > budget.max_time) throw ConfigError("horizon outside enumeration budget");
    std::map<std::array<long long, 4>, Rational> acc;
    ChoiceTape tape;
    long long worlds = 0;
    while (true) {
        if (++worlds > budget.max_worlds)
            throw ConfigError("enumeration budget exceeded: more than " +
                              std::to_string(budget.max_worlds) + " worlds");
        SharedDraws draws{&tape, {}, {}};
        MiniSystem base = mini_init(g, xi0, x, false, false, draws);
        MiniSystem tracer = mini_init(g, xi0, x, true, false, draws);
        MiniSystem flipped = mini_init(g, xi0, x, true, true, draws);
        long long phi = 0, phi_x = 0, phi_y = 0, phi_xy = 0;
        for (long long t = 0; t < T; ++t) {
            for (Vertex z : h) {
                long long c = base.view(z, 0);
                if (c > 0) phi += c;
                c = tracer.view(z, 1);
                if (c > 0) phi_x += c;
                c = tracer.view(z, 2);
                if (c > 0) phi_xy += c;
                c = flipped.view(z, 1);
                if (c > 0) phi_y += c;
            }
            mini_step(g, base, draws);
            mini_step(g, tracer, draws);
            mini_step(g, flipped, draws);
        }
        acc[{phi, phi_x, phi_y, phi_xy}] += tape.probability();
        if (!tape.backtrack()) break;
    }
    std::vector<QuadrupleAtom> out;
    Rational total = 0;
    for (const auto& [v, p] : acc) {
        out.push_back({v, p});
        total += p;
    }
    if (total != 1) throw SimulationError("quadruple enumeration mass does not sum to 1");
    return out;
}

} // namespace dlas
