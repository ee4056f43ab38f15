#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "dlas/graph.hpp"
#include "dlas/pmf.hpp"
#include "dlas/rng.hpp"

namespace dlas {

/// Total-ordered particle tag. Ordinary particles draw value in [0,1] from a
/// 64-bit counter stream; tracers use the sentinels -1 and -2, below every
/// ordinary value. Comparison is (value, raw, tie) lexicographic, so ties are
/// impossible by construction and never recomputed.
struct Braveness {
    double value = 0.0;
    std::uint64_t raw = 0;
    std::uint64_t tie = 0;

    friend auto operator<=>(const Braveness&, const Braveness&) = default;

    static Braveness tracer_priority() { return {-1.0, 0, 1}; }   // prioritized tracer
    static Braveness tracer_secondary() { return {-2.0, 0, 0}; }  // the other tracer
    bool is_tracer() const { return value < 0.0; }
};

/// Per-vertex signed counts: positive = A-particles, negative = B-particles.
class InitialCondition {
public:
    InitialCondition() = default;
    explicit InitialCondition(int vertex_count)
        : counts_(static_cast<std::size_t>(vertex_count), 0) {}

    long long count(Vertex v) const { return counts_[static_cast<std::size_t>(v)]; }
    void set(Vertex v, long long c) { counts_[static_cast<std::size_t>(v)] = c; }
    int vertex_count() const { return static_cast<int>(counts_.size()); }
    long long total_a() const;
    long long total_b() const;
    const std::vector<long long>& counts() const { return counts_; }

private:
    std::vector<long long> counts_;
};

/// Per-site initial law: either a fixed count or an independent pmf draw.
/// Vertices without an entry default to 0.
class InitialSpec {
public:
    void set_deterministic(Vertex v, long long c) { sites_[v] = c; }
    void set_pmf(Vertex v, Pmf pmf) { sites_[v] = std::move(pmf); }
    const std::map<Vertex, std::variant<long long, Pmf>>& sites() const { return sites_; }

private:
    std::map<Vertex, std::variant<long long, Pmf>> sites_;
};

InitialCondition sample_initial(const InitialSpec& spec, const Graph& g, std::uint64_t seed);

/// One-coin-per-site construction: xi0(x) = 1{U<=p_x} - 1{U>p_x} and
/// xi0'(x) = 1{U<=p_x} alpha(x) - 1{U>p_x} beta(x), sharing the same U(x).
/// alpha and beta must have mean exactly 1.
struct MinimalConfigSpec {
    std::vector<double> p; // per vertex
    Pmf alpha;
    Pmf beta;
    void validate(const Graph& g) const;
};

std::pair<InitialCondition, InitialCondition>
sample_minimal_pair(const MinimalConfigSpec& spec, const Graph& g, std::uint64_t seed);

struct QueryRecord {
    char kind; // 's' step, 'h' hold, 'b' braveness
    std::uint64_t label;
    int j;
    int n;
    std::uint64_t result;
    friend bool operator==(const QueryRecord&, const QueryRecord&) = default;
};

/// The instruction oracle (S, h): random-walk paths, holding times, and
/// bravenesses, every value a pure function of
/// (master seed, stream, vertex label, particle index, step). Coupled
/// systems hold the same Instructions and therefore see the same randomness
/// without any storage.
class Instructions {
public:
    Instructions(std::uint64_t master_seed, std::shared_ptr<const Graph> graph, TimeModel tm);

    std::uint64_t master_seed() const { return seed_; }
    TimeModel time_model() const { return tm_; }
    const Graph& graph() const { return *graph_; }

    /// One step of path S^{x,j}: the vertex after jump n+1 given the walker
    /// currently sits at `current` having made n jumps. j < 0 (B-particles)
    /// and the absorbing root of a directed arena return `current`.
    Vertex next_position(Vertex origin, int j, int n, Vertex current) const;

    /// S^{x,j}_n by walking from the origin (O(n); prefer next_position).
    Vertex position(Vertex origin, int j, int n) const;

    /// Unit-rate exponential holding duration before jump n (n >= 1).
    double hold(Vertex origin, int j, int n) const;

    Braveness braveness(Vertex origin, int j) const;

    /// Test hook: when attached, every query appends a record.
    void attach_log(std::vector<QueryRecord>* log) const { log_ = log; }

private:
    std::uint64_t seed_;
    std::shared_ptr<const Graph> graph_;
    TimeModel tm_;
    mutable std::vector<QueryRecord>* log_ = nullptr;
};

} // namespace dlas
